//! Two-encoder quadratic Gaussian source coding in closed form.
//!
//! Sources are jointly Gaussian with unit variance and correlation `ρ`;
//! distortion is mean-square error. All rates are in bits.

use std::io::Write;

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::numfmt::format_significant;
use crate::prob::JointDistribution;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianParams {
    pub rho: f64,
    pub dx: f64,
    pub dy: f64,
}

impl GaussianParams {
    pub fn new(rho: f64, dx: f64, dy: f64) -> Result<Self> {
        check_rho(rho)?;
        for (name, d) in [("dx", dx), ("dy", dy)] {
            if !(d > 0.0 && d <= 1.0) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("distortion must lie in (0, 1], got {d}"),
                });
            }
        }
        Ok(Self { rho, dx, dy })
    }

    fn rho2(&self) -> f64 {
        self.rho * self.rho
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if rho.abs() < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "rho",
            reason: format!("correlation must satisfy |rho| < 1, got {rho}"),
        })
    }
}

/// `1 + sqrt(1 + 4ρ² D_X D_Y / (1 - ρ²)²)`.
pub fn beta(p: &GaussianParams) -> f64 {
    let r2 = p.rho2();
    1.0 + (1.0 + 4.0 * r2 * p.dx * p.dy / ((1.0 - r2) * (1.0 - r2))).sqrt()
}

/// Minimum `R_X` given `R_Y` on the boundary of the rate region.
pub fn contour_rx(p: &GaussianParams, ry: f64) -> f64 {
    let r2 = p.rho2();
    0.5 * ((1.0 - r2 + r2 * (-2.0 * ry).exp2()) / p.dx).log2()
}

/// Minimum `R_Y` given `R_X`; the mirror image of [`contour_rx`].
pub fn contour_ry(p: &GaussianParams, rx: f64) -> f64 {
    contour_rx(
        &GaussianParams {
            rho: p.rho,
            dx: p.dy,
            dy: p.dx,
        },
        rx,
    )
}

/// The exact minimum sum rate.
pub fn exact_sum_rate(p: &GaussianParams) -> f64 {
    // Zero at D_X = D_Y = 1, where rounding can push the log slightly negative.
    (0.5 * ((1.0 - p.rho2()) * beta(p) / (2.0 * p.dx * p.dy)).log2()).max(0.0)
}

/// Right-hand sides of `R_X + ρ² R_Y >= ½ log(1/D_X)` and
/// `R_Y + ρ² R_X >= ½ log(1/D_Y)`, the tangents of the two contours at
/// zero rate for the other encoder.
pub fn linearized_bounds(p: &GaussianParams) -> (f64, f64) {
    (0.5 * (1.0 / p.dx).log2(), 0.5 * (1.0 / p.dy).log2())
}

/// `(½ log(1/D_X) + ½ log(1/D_Y)) / (1 + ρ²)`.
pub fn simple_sum_bound(p: &GaussianParams) -> f64 {
    let (a, b) = linearized_bounds(p);
    (a + b) / (1.0 + p.rho2())
}

/// `½ log((1 - ρ²) / (D_X D_Y))`, clipped at zero. This is the sum rate
/// when a single encoder observes both sources.
pub fn cooperative_bound(p: &GaussianParams) -> f64 {
    (0.5 * ((1.0 - p.rho2()) / (p.dx * p.dy)).log2()).max(0.0)
}

/// `s*` of a jointly Gaussian pair: `ρ²`.
pub fn gaussian_rho_star(rho: f64) -> Result<f64> {
    check_rho(rho)?;
    Ok(rho * rho)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FigureRow {
    pub dx: f64,
    pub dy: f64,
    pub exact: f64,
    pub simple: f64,
    pub cooperative: f64,
    pub max_bound: f64,
}

/// Distortion pairs at which [`figure_data`] evaluates the bounds.
#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    /// `D_X = D_Y = d` with `d` log-spaced over `[lo, hi]`.
    Diagonal {
        points: usize,
        lo: f64,
        hi: f64,
    },
    /// `D_X D_Y = product` with `D_X` log-spaced over `[product, 1]`.
    EqualProduct {
        product: f64,
        points: usize,
    },
    /// The diagonal sweep over `[1e-3, 1]` (60 points) followed by the
    /// equal-product sweep at `1e-2` (30 points).
    Default,
    Explicit(Vec<(f64, f64)>),
}

fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

impl Grid {
    pub fn points(&self) -> Vec<(f64, f64)> {
        match self {
            Grid::Diagonal { points, lo, hi } => log_space(*lo, *hi, *points)
                .into_iter()
                .map(|d| (d, d))
                .collect(),
            Grid::EqualProduct { product, points } => log_space(*product, 1.0, *points)
                .into_iter()
                .map(|d| (d, (product / d).min(1.0)))
                .collect(),
            Grid::Default => {
                let mut v = Grid::Diagonal {
                    points: 60,
                    lo: 1e-3,
                    hi: 1.0,
                }
                .points();
                v.extend(
                    Grid::EqualProduct {
                        product: 1e-2,
                        points: 30,
                    }
                    .points(),
                );
                v
            }
            Grid::Explicit(v) => v.clone(),
        }
    }
}

/// Exact sum rate, simple bound, cooperative bound and their maximum at
/// every grid point.
pub fn figure_data(rho: f64, grid: &Grid) -> Result<Vec<FigureRow>> {
    check_rho(rho)?;
    grid.points()
        .into_iter()
        .map(|(dx, dy)| {
            let p = GaussianParams::new(rho, dx, dy)?;
            let simple = simple_sum_bound(&p);
            let cooperative = cooperative_bound(&p);
            Ok(FigureRow {
                dx,
                dy,
                exact: exact_sum_rate(&p),
                simple,
                cooperative,
                max_bound: simple.max(cooperative),
            })
        })
        .collect()
}

pub const CSV_HEADER: &str = "dx,dy,exact,simple,cooperative,max_bound";

/// Writes rows as CSV with 12 significant digits per value.
pub fn write_csv<W: Write>(rows: &[FigureRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        let f = |x: f64| format_significant(x, 12);
        writeln!(
            out,
            "{},{},{},{},{},{}",
            f(r.dx),
            f(r.dy),
            f(r.exact),
            f(r.simple),
            f(r.cooperative),
            f(r.max_bound)
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FigureSummary {
    pub rows: usize,
    /// `min (exact - max_bound)`; negative when a bound exceeds the exact rate.
    pub min_margin: f64,
    /// `max (exact - simple) / exact` over rows with a positive exact rate.
    pub max_relative_gap_simple: f64,
    pub rows_cooperative_above_simple: usize,
    pub rows_simple_above_cooperative: usize,
}

pub fn summarize(rows: &[FigureRow]) -> FigureSummary {
    let mut s = FigureSummary {
        rows: rows.len(),
        min_margin: f64::INFINITY,
        max_relative_gap_simple: 0.0,
        rows_cooperative_above_simple: 0,
        rows_simple_above_cooperative: 0,
    };
    for r in rows {
        s.min_margin = s.min_margin.min(r.exact - r.max_bound);
        if r.exact > 1e-12 {
            s.max_relative_gap_simple = s
                .max_relative_gap_simple
                .max((r.exact - r.simple) / r.exact);
        }
        if r.cooperative > r.simple {
            s.rows_cooperative_above_simple += 1;
        } else if r.simple > r.cooperative {
            s.rows_simple_above_cooperative += 1;
        }
    }
    s
}

/// Quantizes a standard bivariate Gaussian with correlation `rho` to `levels`
/// uniformly spaced reproduction points on `[lo, hi]` per axis. Cells are
/// bounded by midpoints between levels; the outermost cells absorb the tails.
pub fn discretize_bivariate(
    rho: f64,
    levels: usize,
    lo: f64,
    hi: f64,
) -> Result<JointDistribution> {
    check_rho(rho)?;
    if levels < 2 || lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(Error::InvalidParameter {
            name: "levels",
            reason: format!(
                "need at least 2 levels on a non-empty interval, got {levels} on [{lo}, {hi}]"
            ),
        });
    }
    const TAIL: f64 = 12.0;
    let step = (hi - lo) / (levels - 1) as f64;
    let mut edges = vec![lo.min(-TAIL)];
    edges.extend((1..levels).map(|i| lo + (i as f64 - 0.5) * step));
    edges.push(hi.max(TAIL));

    let std = Normal::new(0.0, 1.0).expect("standard normal");
    let cond_sd = (1.0 - rho * rho).sqrt();
    // P(a < N(0,1) < b) without cancellation in either tail.
    let mass = |a: f64, b: f64| {
        if a >= 0.0 {
            std.sf(a) - std.sf(b)
        } else {
            std.cdf(b) - std.cdf(a)
        }
    };
    let density = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();

    let n = levels;
    let mut probs = vec![0.0; n * n];
    // Composite Simpson in x over each cell of the conditional Y-cell masses.
    const PANELS: usize = 128;
    for i in 0..n {
        let (a, b) = (edges[i], edges[i + 1]);
        let h = (b - a) / PANELS as f64;
        for k in 0..=PANELS {
            let x = a + k as f64 * h;
            let w = if k == 0 || k == PANELS {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            let fx = density(x) * w * h / 3.0;
            if fx == 0.0 {
                continue;
            }
            for j in 0..n {
                let (c, d) = (edges[j], edges[j + 1]);
                probs[i * n + j] += fx * mass((c - rho * x) / cond_sd, (d - rho * x) / cond_sd);
            }
        }
    }
    // The exact cell masses are symmetric; quadrature error is not.
    for i in 0..n {
        for j in 0..i {
            let m = 0.5 * (probs[i * n + j] + probs[j * n + i]);
            probs[i * n + j] = m;
            probs[j * n + i] = m;
        }
    }
    for p in probs.iter_mut() {
        *p = p.max(0.0);
    }
    let total: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|p| *p /= total);
    JointDistribution::new(n, n, probs)
}
