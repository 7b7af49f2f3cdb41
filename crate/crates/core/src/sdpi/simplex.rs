//! Geometry of the probability simplex: Euclidean projection and lattice
//! enumeration.

use std::cmp::Ordering;

/// Euclidean projection of `v` onto `{q : q >= 0, Σ q = 1}`.
///
/// Sort-and-threshold algorithm: find the largest `k` such that
/// `u_k > (Σ_{i<=k} u_i - 1) / k` for the descending sort `u`, then clip.
pub fn project(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_unstable_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (k, &uk) in u.iter().enumerate() {
        cumsum += uk;
        let t = (cumsum - 1.0) / (k + 1) as f64;
        if uk - t > 0.0 {
            theta = t;
        }
    }
    let mut q: Vec<f64> = v.iter().map(|&x| (x - theta).max(0.0)).collect();
    // Rounding can leave the sum a few ulps off.
    let s: f64 = q.iter().sum();
    if s > 0.0 {
        q.iter_mut().for_each(|x| *x /= s);
    }
    q
}

/// Number of lattice points `{k/n}` on the simplex of dimension `dim - 1`,
/// i.e. `C(n + dim - 1, dim - 1)`.
pub fn lattice_size(n: usize, dim: usize) -> u128 {
    if dim == 0 {
        return 0;
    }
    let k = (dim - 1) as u128;
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n as u128 + k - i) / (i + 1);
    }
    c
}

/// Calls `f` on every point of the simplex lattice of resolution `1/n` whose
/// first coordinate is `first / n`.
pub fn for_each_lattice_point_with_first<F: FnMut(&[f64])>(
    n: usize,
    dim: usize,
    first: usize,
    mut f: F,
) {
    debug_assert!(dim >= 1 && first <= n);
    let mut counts = vec![0usize; dim];
    let mut point = vec![0.0; dim];
    counts[0] = first;
    if dim == 1 {
        if first == n {
            point[0] = 1.0;
            f(&point);
        }
        return;
    }
    fill(n, 1, n - first, &mut counts, &mut point, &mut f);
}

fn fill<F: FnMut(&[f64])>(
    n: usize,
    pos: usize,
    remaining: usize,
    counts: &mut [usize],
    point: &mut [f64],
    f: &mut F,
) {
    let dim = counts.len();
    if pos == dim - 1 {
        counts[pos] = remaining;
        for (p, &c) in point.iter_mut().zip(counts.iter()) {
            *p = c as f64 / n as f64;
        }
        f(point);
        return;
    }
    for c in 0..=remaining {
        counts[pos] = c;
        fill(n, pos + 1, remaining - c, counts, point, f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn projection_fixes_simplex_points() {
        let q = [0.2, 0.3, 0.5];
        let p = project(&q);
        for (a, b) in p.iter().zip(q) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(project(&[5.0, 0.0]), vec![1.0, 0.0]);
        assert_eq!(project(&[0.7, 0.7]), vec![0.5, 0.5]);
    }

    #[test]
    fn lattice_counts() {
        assert_eq!(lattice_size(100, 4), 176_851);
        assert_eq!(lattice_size(200, 2), 201);
        let mut n = 0;
        for first in 0..=10 {
            for_each_lattice_point_with_first(10, 4, first, |p| {
                assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                n += 1;
            });
        }
        assert_eq!(n as u128, lattice_size(10, 4));
    }

    proptest! {
        #[test]
        fn projection_is_nearest_simplex_point(
            v in prop::collection::vec(-2.0f64..2.0, 4),
            w in prop::collection::vec(0.0f64..1.0, 4),
        ) {
            let p = project(&v);
            prop_assert!(p.iter().all(|&x| x >= 0.0));
            prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            let s: f64 = w.iter().sum();
            prop_assume!(s > 1e-6);
            let other: Vec<f64> = w.iter().map(|x| x / s).collect();
            let dist = |a: &[f64]| a.iter().zip(&v).map(|(x, y)| (x - y).powi(2)).sum::<f64>();
            prop_assert!(dist(&p) <= dist(&other) + 1e-12);
        }
    }
}
