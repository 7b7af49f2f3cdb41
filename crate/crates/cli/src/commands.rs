use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use sdpi_core::bounds::{
    ceo_bound_check, cr_ratio_bound, full_report, CeoQuery, CommonRandomnessQuery,
};
use sdpi_core::gaussian::{figure_data, summarize, write_csv, Grid};
use sdpi_core::rd::{rd_at_distortion, rd_curve, DISTORTION_TOLERANCE};
use sdpi_core::sdpi::sstar;
use sdpi_core::{Direction, DistortionMatrix, RateDistortionTuple, SdpiConfig, SdpiResult};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::input;
use crate::output::{sink, to_json};

fn caveat(r: &SdpiResult) {
    if let Some(note) = &r.gap_note {
        eprintln!("warning: s*{}: {note}", r.direction.label());
    }
}

pub fn sstar_both(joint: &Path, cfg: &SdpiConfig) -> CliResult<Value> {
    let j = input::joint(joint)?;
    let xy = sstar(&j, Direction::XToY, cfg)?;
    let yx = sstar(&j, Direction::YToX, cfg)?;
    caveat(&xy);
    caveat(&yx);
    let rho = xy.value.max(yx.value);
    Ok(to_json(&json!({
        "sstar_xy": xy,
        "sstar_yx": yx,
        "rho_star": rho,
    })))
}

pub enum RdMode {
    Target(f64),
    Curve(usize),
}

pub fn rd(source: &Path, distortion: &Path, mode: RdMode) -> CliResult<Value> {
    let p = input::source(source)?;
    let d = input::distortion(distortion)?;
    Ok(match mode {
        RdMode::Target(t) => to_json(&rd_at_distortion(&p, &d, t, DISTORTION_TOLERANCE)?),
        RdMode::Curve(n) => to_json(&rd_curve(&p, &d, n)?),
    })
}

pub struct BoundsArgs<'a> {
    pub joint: &'a Path,
    pub x_distortion: Option<&'a Path>,
    pub y_distortion: Option<&'a Path>,
    pub tuple: RateDistortionTuple,
}

pub fn bounds(args: BoundsArgs<'_>, cfg: &SdpiConfig) -> CliResult<Value> {
    let j = input::joint(args.joint)?;
    let load = |path: Option<&Path>, n: usize| -> CliResult<DistortionMatrix> {
        match path {
            Some(p) => input::distortion(p),
            None => Ok(DistortionMatrix::hamming(n)?),
        }
    };
    let dx = load(args.x_distortion, j.x_size())?;
    let dy = load(args.y_distortion, j.y_size())?;
    let report = full_report(&j, &dx, &dy, &args.tuple, cfg)?;
    caveat(&report.sstar_xy);
    caveat(&report.sstar_yx);
    for r in report.reports.iter().filter(|r| r.vacuous) {
        eprintln!("note: {}: {}", r.name, r.note);
    }
    Ok(to_json(&report))
}

/// `default`, `diag:N`, `product:P:N`, or `points:DX/DY,DX/DY,...`.
#[derive(Debug, Clone)]
pub struct GridSpec(pub Grid);

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |v: &str| {
            v.parse::<f64>()
                .map_err(|e| format!("bad number `{v}`: {e}"))
        };
        let count = |v: &str| match v.parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(format!("bad point count `{v}`")),
        };
        let grid = match parts.as_slice() {
            ["default"] => Grid::Default,
            ["diag", n] => Grid::Diagonal {
                points: count(n)?,
                lo: 1e-3,
                hi: 1.0,
            },
            ["product", p, n] => Grid::EqualProduct {
                product: num(p)?,
                points: count(n)?,
            },
            ["points", list] => Grid::Explicit(
                list.split(',')
                    .map(|pair| {
                        let (a, b) = pair
                            .split_once('/')
                            .ok_or_else(|| format!("expected DX/DY, got `{pair}`"))?;
                        Ok((num(a)?, num(b)?))
                    })
                    .collect::<Result<_, String>>()?,
            ),
            _ => return Err(format!("unknown grid `{s}`")),
        };
        Ok(GridSpec(grid))
    }
}

/// Writes the CSV to `out` (standard output if absent) and returns summary
/// statistics.
pub fn gauss_figures(rho: f64, grid: &Grid, out: Option<&PathBuf>) -> CliResult<Value> {
    let rows = figure_data(rho, grid)?;
    let path = out.map(PathBuf::as_path);
    let io_err = |source| CliError::Io {
        path: out.cloned().unwrap_or_else(|| "<stdout>".into()),
        source,
    };
    let mut w = sink(path)?;
    write_csv(&rows, &mut w).map_err(io_err)?;
    w.flush().map_err(io_err)?;
    Ok(to_json(&summarize(&rows)))
}

pub fn ceo(rates: Vec<f64>, sstars: Vec<f64>, target_rate: f64) -> CliResult<Value> {
    let q = CeoQuery {
        rates,
        sstars,
        target_rate,
    };
    Ok(to_json(&ceo_bound_check(&q)?))
}

pub fn cr(r: f64, c: f64, sstar: f64) -> CliResult<Value> {
    Ok(to_json(&cr_ratio_bound(&CommonRandomnessQuery {
        r,
        c,
        sstar,
    })?))
}
