//! Outer-bound evaluators for multiterminal source coding, the CEO problem
//! and common-randomness generation.
//!
//! Every bound here is a converse: a [`BoundReport`] with `satisfied ==
//! false` certifies that the tuple is not achievable, while a satisfied
//! report proves nothing about achievability.
//!
//! The solver in [`crate::sdpi`] returns a lower bound `ŝ` on `s*`. Since
//! `R_X + ŝ R_Y` is increasing in `ŝ`, an underestimate can only flag more
//! tuples as violating, so a flagged violation is conclusive only when the
//! estimate is known to be tight (an exhaustive lattice search ran and the
//! solver reported no gap note).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prob::{Direction, JointDistribution};
use crate::rd::{rd_at_distortion, DistortionMatrix, DISTORTION_TOLERANCE};
use crate::sdpi::{sstar, SdpiConfig, SdpiResult};

/// Slack at or above `-SATISFIED_TOLERANCE` counts as satisfied.
pub const SATISFIED_TOLERANCE: f64 = 1e-9;

const ONE_SIDED_NOTE: &str =
    "converse bound: a violation certifies non-achievability; satisfaction certifies nothing";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateDistortionTuple {
    pub rx: f64,
    pub ry: f64,
    pub dx: f64,
    pub dy: f64,
}

impl RateDistortionTuple {
    pub fn new(rx: f64, ry: f64, dx: f64, dy: f64) -> Result<Self> {
        for (name, v) in [("rx", rx), ("ry", ry), ("dx", dx), ("dy", dy)] {
            non_negative(name, v)?;
        }
        Ok(Self { rx, ry, dx, dy })
    }
}

fn non_negative(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be finite and non-negative, got {v}"),
        })
    }
}

fn unit_interval(name: &'static str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must lie in [0, 1], got {v}"),
        })
    }
}

/// One evaluated inequality `lhs >= rhs`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs - rhs`.
    pub slack: f64,
    pub satisfied: bool,
    /// Set when the constraint carries no information for these inputs.
    pub vacuous: bool,
    pub inputs: BTreeMap<String, f64>,
    pub note: String,
}

impl BoundReport {
    fn new(name: &str, lhs: f64, rhs: f64, inputs: &[(&str, f64)]) -> Self {
        let slack = lhs - rhs;
        Self {
            name: name.to_string(),
            lhs,
            rhs,
            slack,
            satisfied: slack >= -SATISFIED_TOLERANCE,
            vacuous: false,
            inputs: inputs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            note: ONE_SIDED_NOTE.to_string(),
        }
    }

    fn vacuous(mut self, why: &str) -> Self {
        self.vacuous = true;
        self.note = format!("{why}; {ONE_SIDED_NOTE}");
        self
    }
}

/// The two single-letter outer-bound constraints
/// `R_X + s*(Y;X) R_Y >= R_X(D_X)` and `R_Y + s*(X;Y) R_X >= R_Y(D_Y)`.
pub fn theorem1_check(
    t: &RateDistortionTuple,
    sstar_yx: f64,
    sstar_xy: f64,
    rx_of_dx: f64,
    ry_of_dy: f64,
) -> Result<Vec<BoundReport>> {
    unit_interval("sstar_yx", sstar_yx)?;
    unit_interval("sstar_xy", sstar_xy)?;
    non_negative("rx_of_dx", rx_of_dx)?;
    non_negative("ry_of_dy", ry_of_dy)?;
    let mut x = BoundReport::new(
        "R_X + s*(Y;X) R_Y >= R_X(D_X)",
        t.rx + sstar_yx * t.ry,
        rx_of_dx,
        &[
            ("R_X", t.rx),
            ("R_Y", t.ry),
            ("D_X", t.dx),
            ("s*(Y;X)", sstar_yx),
            ("R_X(D_X)", rx_of_dx),
        ],
    );
    let mut y = BoundReport::new(
        "R_Y + s*(X;Y) R_X >= R_Y(D_Y)",
        t.ry + sstar_xy * t.rx,
        ry_of_dy,
        &[
            ("R_X", t.rx),
            ("R_Y", t.ry),
            ("D_Y", t.dy),
            ("s*(X;Y)", sstar_xy),
            ("R_Y(D_Y)", ry_of_dy),
        ],
    );
    if rx_of_dx == 0.0 {
        x = x.vacuous("R_X(D_X) = 0");
    }
    if ry_of_dy == 0.0 {
        y = y.vacuous("R_Y(D_Y) = 0");
    }
    Ok(vec![x, y])
}

/// `(R_X(D_X) + R_Y(D_Y)) / (1 + ρ*)`, the sum-rate lower bound.
pub fn sum_rate_bound(rho_star: f64, rx_of_dx: f64, ry_of_dy: f64) -> Result<f64> {
    unit_interval("rho_star", rho_star)?;
    non_negative("rx_of_dx", rx_of_dx)?;
    non_negative("ry_of_dy", ry_of_dy)?;
    Ok((rx_of_dx + ry_of_dy) / (1.0 + rho_star))
}

pub fn sum_rate_check(
    t: &RateDistortionTuple,
    rho_star: f64,
    rx_of_dx: f64,
    ry_of_dy: f64,
) -> Result<BoundReport> {
    let bound = sum_rate_bound(rho_star, rx_of_dx, ry_of_dy)?;
    Ok(BoundReport::new(
        "R_X + R_Y >= (R_X(D_X) + R_Y(D_Y)) / (1 + rho*)",
        t.rx + t.ry,
        bound,
        &[
            ("R_X", t.rx),
            ("R_Y", t.ry),
            ("rho*", rho_star),
            ("R_X(D_X)", rx_of_dx),
            ("R_Y(D_Y)", ry_of_dy),
        ],
    ))
}

/// Largest fractional sum-rate excess of separate encoding over the optimum
/// permitted by the sum-rate bound: `1 - 1/(1 + ρ*)`.
pub fn independent_coding_penalty(rho_star: f64) -> Result<f64> {
    unit_interval("rho_star", rho_star)?;
    Ok(1.0 - 1.0 / (1.0 + rho_star))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CeoQuery {
    pub rates: Vec<f64>,
    /// `s*(Y_i; X)` per agent.
    pub sstars: Vec<f64>,
    /// `R_X(D)`.
    pub target_rate: f64,
}

impl CeoQuery {
    pub fn k(&self) -> usize {
        self.rates.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.rates.is_empty() {
            return Err(Error::InvalidParameter {
                name: "rates",
                reason: "need at least one agent".into(),
            });
        }
        if self.rates.len() != self.sstars.len() {
            return Err(Error::DimensionMismatch {
                expected: self.rates.len(),
                got: self.sstars.len(),
            });
        }
        for &r in &self.rates {
            non_negative("rates", r)?;
        }
        for &s in &self.sstars {
            unit_interval("sstars", s)?;
        }
        non_negative("target_rate", self.target_rate)
    }
}

/// `Σ s*(Y_i; X) R_i >= R_X(D)` for agents with conditionally independent
/// observations.
pub fn ceo_bound_check(q: &CeoQuery) -> Result<BoundReport> {
    q.validate()?;
    let lhs = q.rates.iter().zip(&q.sstars).map(|(r, s)| r * s).sum();
    let mut inputs: Vec<(String, f64)> =
        vec![("k".into(), q.k() as f64), ("R_X(D)".into(), q.target_rate)];
    for (i, (r, s)) in q.rates.iter().zip(&q.sstars).enumerate() {
        inputs.push((format!("R_{}", i + 1), *r));
        inputs.push((format!("s*(Y_{};X)", i + 1), *s));
    }
    let inputs: Vec<(&str, f64)> = inputs.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    Ok(BoundReport::new(
        "sum_i s*(Y_i;X) R_i >= R_X(D)",
        lhs,
        q.target_rate,
        &inputs,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CommonRandomnessQuery {
    /// Communication rate.
    pub r: f64,
    /// Common-randomness rate.
    pub c: f64,
    pub sstar: f64,
}

/// `1 / (1 - s*(X;Y)) >= C / R`. Vacuous when `s* = 1`.
pub fn cr_ratio_bound(q: &CommonRandomnessQuery) -> Result<BoundReport> {
    non_negative("r", q.r)?;
    non_negative("c", q.c)?;
    unit_interval("sstar", q.sstar)?;
    if q.r == 0.0 {
        return Err(Error::UndefinedRatio);
    }
    let limit = if q.sstar < 1.0 {
        1.0 / (1.0 - q.sstar)
    } else {
        f64::INFINITY
    };
    let report = BoundReport::new(
        "1 / (1 - s*(X;Y)) >= C / R",
        limit,
        q.c / q.r,
        &[("R", q.r), ("C", q.c), ("s*(X;Y)", q.sstar)],
    );
    Ok(if q.sstar >= 1.0 {
        report.vacuous("s*(X;Y) = 1 places no limit on C/R")
    } else {
        report
    })
}

/// Everything [`full_report`] computed along the way.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FullReport {
    pub reports: Vec<BoundReport>,
    pub sstar_xy: SdpiResult,
    pub sstar_yx: SdpiResult,
    pub rho_star: f64,
    pub rx_of_dx: f64,
    pub ry_of_dy: f64,
    /// True when both `s*` estimates came with an exhaustive lattice search.
    pub sstar_certified: bool,
}

/// Computes both `s*` directions and both rate-distortion values, then
/// evaluates the two single-letter constraints and the sum-rate bound.
pub fn full_report(
    j: &JointDistribution,
    dx: &DistortionMatrix,
    dy: &DistortionMatrix,
    t: &RateDistortionTuple,
    cfg: &SdpiConfig,
) -> Result<FullReport> {
    let (px, py) = j.marginals();
    let (xy, yx) = rayon::join(
        || sstar(j, Direction::XToY, cfg),
        || sstar(j, Direction::YToX, cfg),
    );
    let (xy, yx) = (xy?, yx?);
    let rx = rd_at_distortion(&px, dx, t.dx, DISTORTION_TOLERANCE)?.rate;
    let ry = rd_at_distortion(&py, dy, t.dy, DISTORTION_TOLERANCE)?.rate;
    let rho = xy.value.max(yx.value);
    let mut reports = theorem1_check(t, yx.value, xy.value, rx, ry)?;
    reports.push(sum_rate_check(t, rho, rx, ry)?);
    Ok(FullReport {
        reports,
        sstar_certified: xy.gap_note.is_none() && yx.gap_note.is_none(),
        sstar_xy: xy,
        sstar_yx: yx,
        rho_star: rho,
        rx_of_dx: rx,
        ry_of_dy: ry,
    })
}
