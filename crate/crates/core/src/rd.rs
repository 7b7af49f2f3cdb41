//! Single-source rate-distortion functions via Blahut-Arimoto.
//!
//! Slopes are expressed in bits per unit distortion: a point computed at
//! slope `s` lies where the curve `R(D)` has derivative `s`. The tilted
//! reproduction kernel is therefore `r(x̂) 2^{s d(x, x̂)}`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prob::{binary_entropy, Distribution};

pub const MAX_ITERATIONS: usize = 200_000;

/// Default absolute tolerance on the target distortion.
pub const DISTORTION_TOLERANCE: f64 = 1e-6;

/// Initial slope bracket for [`rd_at_distortion`]; widened by doubling.
const INITIAL_SLOPE_BRACKET: f64 = -64.0;

/// Per-letter distortion `d(x, x̂)`, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistortionRepr")]
pub struct DistortionMatrix {
    x_size: usize,
    xhat_size: usize,
    costs: Vec<f64>,
}

#[derive(Deserialize)]
struct DistortionRepr {
    x_size: usize,
    xhat_size: usize,
    costs: Vec<f64>,
}

impl TryFrom<DistortionRepr> for DistortionMatrix {
    type Error = Error;

    fn try_from(r: DistortionRepr) -> Result<Self> {
        DistortionMatrix::new(r.x_size, r.xhat_size, r.costs)
    }
}

impl DistortionMatrix {
    pub fn new(x_size: usize, xhat_size: usize, costs: Vec<f64>) -> Result<Self> {
        if x_size == 0 || xhat_size == 0 {
            return Err(Error::EmptyAlphabet);
        }
        if costs.len() != x_size * xhat_size {
            return Err(Error::DimensionMismatch {
                expected: x_size * xhat_size,
                got: costs.len(),
            });
        }
        if let Some(c) = costs.iter().find(|c| !c.is_finite() || **c < 0.0) {
            return Err(Error::InvalidDistortion(format!(
                "costs must be finite and non-negative, found {c}"
            )));
        }
        Ok(Self {
            x_size,
            xhat_size,
            costs,
        })
    }

    pub fn hamming(n: usize) -> Result<Self> {
        Self::new(
            n,
            n,
            (0..n * n)
                .map(|i| if i / n == i % n { 0.0 } else { 1.0 })
                .collect(),
        )
    }

    pub fn zero(x_size: usize, xhat_size: usize) -> Result<Self> {
        Self::new(x_size, xhat_size, vec![0.0; x_size * xhat_size])
    }

    pub fn x_size(&self) -> usize {
        self.x_size
    }

    pub fn xhat_size(&self) -> usize {
        self.xhat_size
    }

    pub fn get(&self, x: usize, xhat: usize) -> f64 {
        self.costs[x * self.xhat_size + xhat]
    }

    fn row(&self, x: usize) -> &[f64] {
        &self.costs[x * self.xhat_size..(x + 1) * self.xhat_size]
    }

    pub fn is_identically_zero(&self) -> bool {
        self.costs.iter().all(|&c| c == 0.0)
    }

    /// Source symbols with no zero-cost reproduction. Such matrices are
    /// accepted, but `R(D)` does not reach `H(X)` at `D = 0` for them.
    pub fn uncovered_rows(&self) -> Vec<usize> {
        (0..self.x_size)
            .filter(|&x| self.row(x).iter().all(|&c| c > 0.0))
            .collect()
    }

    fn check_source(&self, source: &Distribution) -> Result<()> {
        if source.alphabet_size() != self.x_size {
            return Err(Error::DimensionMismatch {
                expected: self.x_size,
                got: source.alphabet_size(),
            });
        }
        Ok(())
    }

    /// `E[min_x̂ d(X, x̂)]`, the smallest achievable expected distortion.
    pub fn min_distortion(&self, source: &Distribution) -> f64 {
        source
            .probs()
            .iter()
            .enumerate()
            .map(|(x, p)| p * self.row(x).iter().copied().fold(f64::INFINITY, f64::min))
            .sum()
    }

    /// `min_x̂ E[d(X, x̂)]`, the distortion reachable at zero rate.
    pub fn max_distortion(&self, source: &Distribution) -> f64 {
        self.zero_rate_reproduction(source).1
    }

    fn zero_rate_reproduction(&self, source: &Distribution) -> (usize, f64) {
        (0..self.xhat_size)
            .map(|xh| {
                let e: f64 = source
                    .probs()
                    .iter()
                    .enumerate()
                    .map(|(x, p)| p * self.get(x, xh))
                    .sum();
                (xh, e)
            })
            .fold(
                (0, f64::INFINITY),
                |best, cur| {
                    if cur.1 < best.1 {
                        cur
                    } else {
                        best
                    }
                },
            )
    }
}

/// A point `(D, R(D))` on a rate-distortion curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RdPoint {
    pub distortion: f64,
    /// Bits per source symbol.
    pub rate: f64,
    /// Curve slope at this point; `-inf` for the zero-excess-distortion end.
    pub slope: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RdCurve {
    pub points: Vec<RdPoint>,
}

impl RdCurve {
    /// Checks that the curve is sorted, non-increasing and convex, each
    /// within `tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        for w in self.points.windows(2) {
            if w[1].distortion < w[0].distortion {
                return Err(Error::CurveInvariant(
                    "points not sorted by distortion".into(),
                ));
            }
            if w[1].rate > w[0].rate + tol {
                return Err(Error::CurveInvariant(format!(
                    "rate increases from {} to {} at D = {}",
                    w[0].rate, w[1].rate, w[1].distortion
                )));
            }
        }
        for w in self.points.windows(3) {
            let (a, b, c) = (w[0], w[1], w[2]);
            let span = c.distortion - a.distortion;
            if span <= 0.0 {
                continue;
            }
            let chord = a.rate + (c.rate - a.rate) * (b.distortion - a.distortion) / span;
            if b.rate > chord + tol {
                return Err(Error::CurveInvariant(format!(
                    "not convex at D = {} (rate {} above chord {})",
                    b.distortion, b.rate, chord
                )));
            }
        }
        Ok(())
    }
}

struct Converged {
    point: RdPoint,
    marginal: Vec<f64>,
}

/// Blahut-Arimoto at a fixed slope, optionally warm-started and optionally
/// recording the Lagrangian `I - s·D` after every iteration.
fn iterate(
    source: &Distribution,
    d: &DistortionMatrix,
    slope: f64,
    tol: f64,
    init: Option<&[f64]>,
    mut trace: Option<&mut Vec<f64>>,
) -> Result<Converged> {
    let (nx, nh) = (d.x_size, d.xhat_size);
    let p = source.probs();

    if slope == 0.0 {
        let (xh, dist) = d.zero_rate_reproduction(source);
        let mut marginal = vec![0.0; nh];
        marginal[xh] = 1.0;
        return Ok(Converged {
            point: RdPoint {
                distortion: dist,
                rate: 0.0,
                slope,
                iterations: 0,
            },
            marginal,
        });
    }

    // Tilted kernel. At slope -inf only the per-row minimum-cost
    // reproductions survive.
    let kernel: Vec<f64> = if slope == f64::NEG_INFINITY {
        (0..nx)
            .flat_map(|x| {
                let row = d.row(x);
                let m = row.iter().copied().fold(f64::INFINITY, f64::min);
                row.iter().map(move |&c| if c == m { 1.0 } else { 0.0 })
            })
            .collect()
    } else {
        d.costs.iter().map(|&c| (slope * c).exp2()).collect()
    };

    let mut r = match init {
        Some(r0) if r0.len() == nh => r0.to_vec(),
        _ => vec![1.0 / nh as f64; nh],
    };
    let mut c = vec![0.0; nx];
    let mut chat = vec![0.0; nh];
    let mut gap = f64::INFINITY;

    for it in 1..=MAX_ITERATIONS {
        for x in 0..nx {
            c[x] = (0..nh).map(|h| r[h] * kernel[x * nh + h]).sum();
        }
        chat.iter_mut().for_each(|v| *v = 0.0);
        for x in 0..nx {
            if p[x] == 0.0 {
                continue;
            }
            let w = p[x] / c[x];
            for h in 0..nh {
                chat[h] += w * kernel[x * nh + h];
            }
        }
        let max_log = chat
            .iter()
            .map(|&v| v.log2())
            .fold(f64::NEG_INFINITY, f64::max);
        let mean_log: f64 = r
            .iter()
            .zip(&chat)
            .filter(|(&rh, _)| rh > 0.0)
            .map(|(&rh, &v)| rh * v.log2())
            .sum();
        gap = max_log - mean_log;
        for (rh, v) in r.iter_mut().zip(&chat) {
            *rh *= v;
        }
        let s: f64 = r.iter().sum();
        r.iter_mut().for_each(|v| *v /= s);

        if let Some(t) = trace.as_deref_mut() {
            let (dist, rate) = evaluate(p, d, &kernel, &r);
            let lagrangian = if slope.is_finite() {
                rate - slope * dist
            } else {
                rate
            };
            t.push(lagrangian);
        }

        if gap < tol {
            let (distortion, rate) = evaluate(p, d, &kernel, &r);
            return Ok(Converged {
                point: RdPoint {
                    distortion,
                    rate,
                    slope,
                    iterations: it,
                },
                marginal: r,
            });
        }
    }
    Err(Error::NonConvergence {
        iterations: MAX_ITERATIONS,
        gap,
    })
}

/// `(E d, I(X; X̂))` of the channel `Q(x̂|x) ∝ r(x̂) K(x, x̂)`, with the mutual
/// information measured against the channel's own output marginal.
fn evaluate(p: &[f64], d: &DistortionMatrix, kernel: &[f64], r: &[f64]) -> (f64, f64) {
    let (nx, nh) = (d.x_size, d.xhat_size);
    let mut q = vec![0.0; nx * nh];
    let mut out = vec![0.0; nh];
    for x in 0..nx {
        let c: f64 = (0..nh).map(|h| r[h] * kernel[x * nh + h]).sum();
        for h in 0..nh {
            let v = r[h] * kernel[x * nh + h] / c;
            q[x * nh + h] = v;
            out[h] += p[x] * v;
        }
    }
    let mut dist = 0.0;
    let mut rate = 0.0;
    for x in 0..nx {
        for h in 0..nh {
            let v = q[x * nh + h];
            if v > 0.0 && p[x] > 0.0 {
                dist += p[x] * v * d.get(x, h);
                rate += p[x] * v * (v / out[h]).log2();
            }
        }
    }
    (dist, rate.max(0.0))
}

/// The point of the rate-distortion curve with slope `slope <= 0`.
///
/// `slope = 0` returns the zero-rate end `(D_max, 0)`; `slope = -inf`
/// returns the minimum-distortion end.
pub fn blahut_arimoto(
    source: &Distribution,
    d: &DistortionMatrix,
    slope: f64,
    tol: f64,
) -> Result<RdPoint> {
    d.check_source(source)?;
    check_args(slope, tol)?;
    Ok(iterate(source, d, slope, tol, None, None)?.point)
}

fn check_args(slope: f64, tol: f64) -> Result<()> {
    if slope.is_nan() || slope > 0.0 {
        return Err(Error::InvalidParameter {
            name: "slope",
            reason: format!("must be <= 0, got {slope}"),
        });
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "tol",
            reason: format!("must be positive, got {tol}"),
        });
    }
    Ok(())
}

/// `R(D)` at a target distortion, by bisection on the slope.
///
/// The returned rate is first-order corrected from the bracketing point to
/// the exact target, and `distortion` echoes the target.
pub fn rd_at_distortion(
    source: &Distribution,
    d: &DistortionMatrix,
    target: f64,
    tol: f64,
) -> Result<RdPoint> {
    d.check_source(source)?;
    check_args(-1.0, tol)?;
    if !target.is_finite() || target < 0.0 {
        return Err(Error::InvalidParameter {
            name: "distortion",
            reason: format!("must be finite and non-negative, got {target}"),
        });
    }
    let zero_rate = RdPoint {
        distortion: target,
        rate: 0.0,
        slope: 0.0,
        iterations: 0,
    };
    if d.is_identically_zero() {
        return Ok(zero_rate);
    }
    let d_min = d.min_distortion(source);
    let d_max = d.max_distortion(source);
    if target >= d_max {
        return Ok(zero_rate);
    }
    if target < d_min - 1e-12 {
        return Err(Error::InfeasibleDistortion {
            target,
            minimum: d_min,
        });
    }
    let ba_tol = (tol * 1e-3).max(1e-13);
    if target <= d_min + 1e-12 {
        let mut p = iterate(source, d, f64::NEG_INFINITY, ba_tol, None, None)?.point;
        p.distortion = target;
        return Ok(p);
    }

    let mut iterations = 0;
    let mut lo = INITIAL_SLOPE_BRACKET;
    let mut warm: Option<Vec<f64>> = None;
    let lo_point = loop {
        let c = iterate(source, d, lo, ba_tol, warm.as_deref(), None)?;
        iterations += c.point.iterations;
        warm = Some(c.marginal);
        if c.point.distortion <= target || lo < -1e6 {
            break c.point;
        }
        lo *= 2.0;
    };
    let mut hi = 0.0;
    let mut best = lo_point;
    if (lo_point.distortion - target).abs() > tol {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let c = iterate(source, d, mid, ba_tol, warm.as_deref(), None)?;
            iterations += c.point.iterations;
            warm = Some(c.marginal);
            best = c.point;
            if (c.point.distortion - target).abs() <= tol || hi - lo < 1e-13 {
                break;
            }
            if c.point.distortion > target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }
    Ok(RdPoint {
        distortion: target,
        rate: (best.rate + best.slope * (target - best.distortion)).max(0.0),
        slope: best.slope,
        iterations,
    })
}

/// `n_points` points evenly spaced in distortion over `[D_min, D_max]`.
pub fn rd_curve(source: &Distribution, d: &DistortionMatrix, n_points: usize) -> Result<RdCurve> {
    d.check_source(source)?;
    if n_points < 2 {
        return Err(Error::InvalidParameter {
            name: "n_points",
            reason: format!("need at least 2, got {n_points}"),
        });
    }
    let d_min = d.min_distortion(source);
    let d_max = d.max_distortion(source);
    let points = (0..n_points)
        .into_par_iter()
        .map(|i| {
            let t = d_min + (d_max - d_min) * i as f64 / (n_points - 1) as f64;
            rd_at_distortion(source, d, t, DISTORTION_TOLERANCE)
        })
        .collect::<Result<Vec<_>>>()?;
    let curve = RdCurve { points };
    curve.validate(1e-7)?;
    Ok(curve)
}

/// Closed-form `R(D)` of a Bernoulli(`p`) source under Hamming distortion.
pub fn binary_hamming_rd(p: f64, distortion: f64) -> f64 {
    let m = p.min(1.0 - p);
    if distortion < m {
        binary_entropy(m) - binary_entropy(distortion.max(0.0))
    } else {
        0.0
    }
}

#[cfg(test)]
pub(crate) fn lagrangian_trace(
    source: &Distribution,
    d: &DistortionMatrix,
    slope: f64,
    tol: f64,
) -> Result<Vec<f64>> {
    let mut t = Vec::new();
    iterate(source, d, slope, tol, None, Some(&mut t))?;
    Ok(t)
}
