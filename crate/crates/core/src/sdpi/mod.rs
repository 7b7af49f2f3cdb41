//! Strong data processing constants.
//!
//! `s*(X;Y)` is the supremum over input distributions `Q_X != P_X` of
//! `D(Q_Y || P_Y) / D(Q_X || P_X)`, where `Q_Y` is `Q_X` pushed through
//! `P_{Y|X}`. No closed form exists in general, so [`sstar`] reports the
//! largest of three lower bounds:
//!
//! * an exhaustive lattice search over the simplex (input alphabets up to
//!   [`SdpiConfig::grid_max_alphabet`]),
//! * multi-start projected-gradient ascent on the log-ratio, seeded from
//!   every vertex, Dirichlet(1) draws, and the lattice winner,
//! * the squared maximal correlation `ρ_m²`, which is the limit of the
//!   ratio as `Q_X -> P_X` along the best direction.
//!
//! The reported value is therefore a lower bound on the true supremum.
//! Candidates within [`SdpiConfig::exclusion_radius`] (total variation) of
//! `P_X` are skipped; that neighbourhood is covered by `ρ_m²`.

mod search;
pub mod simplex;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prob::{
    mutual_information_raw, tensor_product, Channel, Direction, Distribution, JointDistribution,
};
use search::{AscentSettings, Candidate, RatioProblem};

/// Largest per-axis alphabet accepted by [`tensorization_check`] for the
/// product source.
pub const TENSORIZATION_LIMIT: usize = 16;

pub const DEFAULT_SEED: u64 = 0x5d91_2013;

/// Estimates below this are rounding residue and are reported as zero.
pub const VALUE_FLOOR: f64 = 1e-12;

/// Search parameters for [`sstar`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SdpiConfig {
    /// Total-variation radius around `P_X` excluded from the search.
    pub exclusion_radius: f64,
    /// Lattice spacing. `None` selects 1/200 for binary inputs and 1/100
    /// otherwise.
    pub grid_resolution: Option<f64>,
    /// The lattice search runs only for input alphabets up to this size.
    pub grid_max_alphabet: usize,
    pub multistart_count: usize,
    pub max_iterations: usize,
    pub step_tolerance: f64,
    pub seed: u64,
}

impl Default for SdpiConfig {
    fn default() -> Self {
        Self {
            exclusion_radius: 1e-4,
            grid_resolution: None,
            grid_max_alphabet: 4,
            multistart_count: 64,
            max_iterations: 2000,
            step_tolerance: 1e-10,
            seed: DEFAULT_SEED,
        }
    }
}

impl SdpiConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be positive, got {v}"),
                })
            }
        };
        positive("exclusion_radius", self.exclusion_radius)?;
        positive("step_tolerance", self.step_tolerance)?;
        if let Some(r) = self.grid_resolution {
            positive("grid_resolution", r)?;
            if r > 1.0 {
                return Err(Error::InvalidParameter {
                    name: "grid_resolution",
                    reason: format!("must be at most 1, got {r}"),
                });
            }
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter {
                name: "max_iterations",
                reason: "must be positive".into(),
            });
        }
        Ok(())
    }

    fn grid_divisions(&self, dim: usize) -> usize {
        match self.grid_resolution {
            Some(r) => (1.0 / r).round().max(1.0) as usize,
            None if dim <= 2 => 200,
            None => 100,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMethod {
    Grid,
    Multistart,
    Combined,
}

/// Outcome of [`sstar`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SdpiResult {
    pub direction: Direction,
    /// Lower bound on `s*`, in `[0, 1]`.
    pub value: f64,
    /// The input distribution attaining `value`. `None` when the local limit
    /// `ρ_m²` dominates every searched candidate (or no candidate exists).
    pub argmax_q: Option<Distribution>,
    pub rho_m_squared: f64,
    pub method: SearchMethod,
    pub evaluations: usize,
    /// Set when no exhaustive lattice search backed the estimate.
    pub gap_note: Option<String>,
}

fn oriented(j: &JointDistribution, direction: Direction) -> JointDistribution {
    match direction {
        Direction::XToY => j.clone(),
        Direction::YToX => j.transpose(),
    }
}

/// `D(Q_Y || P_Y) / D(Q_X || P_X)` for the channel selected by `direction`.
///
/// For [`Direction::YToX`], `q` is a distribution on the Y alphabet.
pub fn divergence_ratio(
    q: &Distribution,
    j: &JointDistribution,
    direction: Direction,
    exclusion_radius: f64,
) -> Result<f64> {
    let oj = oriented(j, direction);
    let (px, py) = oj.marginals();
    if q.alphabet_size() != px.alphabet_size() {
        return Err(Error::DimensionMismatch {
            expected: px.alphabet_size(),
            got: q.alphabet_size(),
        });
    }
    let channel = oj.conditional(Direction::XToY);
    let problem = RatioProblem {
        px: px.probs(),
        py: py.probs(),
        channel: &channel,
        exclusion_radius,
    };
    let mut scratch = vec![0.0; py.alphabet_size()];
    problem
        .eval(q.probs(), &mut scratch)
        .ok_or(Error::DegenerateRatio {
            radius: exclusion_radius,
        })
}

/// Hirschfeld-Gebelein-Rényi maximal correlation `ρ_m`: the second largest
/// singular value of `p(x,y) / sqrt(p(x) p(y))`.
pub fn maximal_correlation(j: &JointDistribution) -> f64 {
    if j.x_size().min(j.y_size()) < 2 {
        return 0.0;
    }
    let (px, py) = j.marginals();
    let m = DMatrix::from_fn(j.x_size(), j.y_size(), |x, y| {
        j.get(x, y) / (px.probs()[x] * py.probs()[y]).sqrt()
    });
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_unstable_by(|a, b| b.total_cmp(a));
    sv[1].clamp(0.0, 1.0)
}

/// Estimates `s*(X;Y)` ([`Direction::XToY`]) or `s*(Y;X)`.
pub fn sstar(j: &JointDistribution, direction: Direction, cfg: &SdpiConfig) -> Result<SdpiResult> {
    cfg.validate()?;
    let oj = oriented(j, direction);
    let (px, py) = oj.marginals();
    let dim = px.alphabet_size();
    let rho_m = maximal_correlation(&oj);
    let rho_m_squared = rho_m * rho_m;

    let use_grid = dim <= cfg.grid_max_alphabet;
    let use_ascent = !use_grid || cfg.multistart_count > 0;
    let method = match (use_grid, use_ascent) {
        (true, true) => SearchMethod::Combined,
        (true, false) => SearchMethod::Grid,
        _ => SearchMethod::Multistart,
    };
    let gap_note = (!use_grid).then(|| {
        format!(
            "input alphabet {dim} exceeds the exhaustive-grid limit {}; value is a multi-start lower bound",
            cfg.grid_max_alphabet
        )
    });

    if dim < 2 {
        // Q_X = P_X is the only input distribution; the supremum is empty.
        return Ok(SdpiResult {
            direction,
            value: 0.0,
            argmax_q: None,
            rho_m_squared,
            method,
            evaluations: 0,
            gap_note,
        });
    }

    let channel = oj.conditional(Direction::XToY);
    let problem = RatioProblem {
        px: px.probs(),
        py: py.probs(),
        channel: &channel,
        exclusion_radius: cfg.exclusion_radius,
    };

    let mut evaluations = 0;
    let mut best: Option<Candidate> = None;
    if use_grid {
        let grid = search::grid_search(&problem, cfg.grid_divisions(dim));
        evaluations += grid.evaluations;
        best = grid.best;
    }

    if use_ascent {
        let mut starts: Vec<Vec<f64>> = (0..dim)
            .map(|i| {
                let mut v = vec![0.0; dim];
                v[i] = 1.0;
                v
            })
            .collect();
        starts.extend(search::dirichlet_starts(
            dim,
            cfg.multistart_count,
            cfg.seed,
        ));
        if let Some(b) = &best {
            starts.push(b.q.clone());
        }
        let settings = AscentSettings {
            max_iterations: cfg.max_iterations,
            step_tolerance: cfg.step_tolerance,
        };
        let ms = search::multistart(&problem, &starts, &settings);
        evaluations += ms.evaluations;
        best = Candidate::best(best, ms.best);
    }

    let (value, argmax_q) = match best {
        Some(c) if c.value >= rho_m_squared => {
            (c.value.min(1.0), Some(Distribution::from_raw(c.q)))
        }
        _ => (rho_m_squared, None),
    };
    let value = if value < VALUE_FLOOR { 0.0 } else { value };

    Ok(SdpiResult {
        direction,
        value,
        argmax_q,
        rho_m_squared,
        method,
        evaluations,
        gap_note,
    })
}

/// `ρ*(X,Y) = max{s*(X;Y), s*(Y;X)}`.
pub fn rho_star(j: &JointDistribution, cfg: &SdpiConfig) -> Result<f64> {
    let (a, b) = rayon::join(
        || sstar(j, Direction::XToY, cfg),
        || sstar(j, Direction::YToX, cfg),
    );
    Ok(a?.value.max(b?.value))
}

/// Both sides of `I(Y;U) <= s* I(X;U)` for the chain `U - X - Y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SdpiCheck {
    /// `I(Y;U)`
    pub lhs: f64,
    /// `s* · I(X;U)`
    pub rhs: f64,
    pub holds: bool,
}

/// Evaluates the strong data processing inequality on the chain defined by
/// `p(x,y) p(u|x)`, with `u_channel` holding `p(u|x)`.
pub fn verify_sdpi_inequality(
    j: &JointDistribution,
    u_channel: &Channel,
    sstar_value: f64,
) -> Result<SdpiCheck> {
    if u_channel.input_size() != j.x_size() {
        return Err(Error::DimensionMismatch {
            expected: j.x_size(),
            got: u_channel.input_size(),
        });
    }
    let nu = u_channel.output_size();
    let (px, _) = j.marginals();
    let mut ux = vec![0.0; nu * j.x_size()];
    let mut uy = vec![0.0; nu * j.y_size()];
    for x in 0..j.x_size() {
        for u in 0..nu {
            let w = u_channel.get(x, u);
            ux[u * j.x_size() + x] = px.probs()[x] * w;
            for y in 0..j.y_size() {
                uy[u * j.y_size() + y] += j.get(x, y) * w;
            }
        }
    }
    let lhs = mutual_information_raw(nu, j.y_size(), &uy);
    let rhs = sstar_value * mutual_information_raw(nu, j.x_size(), &ux);
    Ok(SdpiCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + 1e-9,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TensorizationReport {
    /// `s*` of the single-letter source (lattice plus multi-start).
    pub single: f64,
    /// `s*` of the two-letter product source (multi-start only).
    pub product: f64,
    pub gap: f64,
}

/// Compares `s*(X;Y)` with `s*(X²;Y²)` for the i.i.d. pair.
pub fn tensorization_check(j: &JointDistribution, cfg: &SdpiConfig) -> Result<TensorizationReport> {
    let (nx, ny) = (j.x_size() * j.x_size(), j.y_size() * j.y_size());
    if nx > TENSORIZATION_LIMIT || ny > TENSORIZATION_LIMIT {
        return Err(Error::AlphabetTooLarge {
            x_size: nx,
            y_size: ny,
            limit: TENSORIZATION_LIMIT,
        });
    }
    let single = sstar(j, Direction::XToY, cfg)?;
    let jj = tensor_product(j, j);
    let product_cfg = SdpiConfig {
        grid_max_alphabet: 0,
        ..cfg.clone()
    };
    let product = sstar(&jj, Direction::XToY, &product_cfg)?.value;
    Ok(TensorizationReport {
        single: single.value,
        product,
        gap: (single.value - product).abs(),
    })
}
