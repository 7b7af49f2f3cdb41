//! Input files. Parsing is split from validation so that malformed JSON and
//! well-formed but invalid distributions map to different exit codes.

use std::fs;
use std::path::Path;

use sdpi_core::{DistortionMatrix, Distribution, JointDistribution, SdpiConfig};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawJoint {
    x_size: usize,
    y_size: usize,
    probs: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSource {
    probs: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDistortion {
    x_size: usize,
    xhat_size: usize,
    costs: Vec<f64>,
}

fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn joint(path: &Path) -> CliResult<JointDistribution> {
    let raw: RawJoint = read_json(path)?;
    Ok(JointDistribution::new(raw.x_size, raw.y_size, raw.probs)?)
}

pub fn source(path: &Path) -> CliResult<Distribution> {
    let raw: RawSource = read_json(path)?;
    Ok(Distribution::new(raw.probs)?)
}

pub fn distortion(path: &Path) -> CliResult<DistortionMatrix> {
    let raw: RawDistortion = read_json(path)?;
    Ok(DistortionMatrix::new(raw.x_size, raw.xhat_size, raw.costs)?)
}

pub fn config(path: Option<&Path>, seed: Option<u64>) -> CliResult<SdpiConfig> {
    let mut cfg: SdpiConfig = match path {
        Some(p) => read_json(p)?,
        None => SdpiConfig::default(),
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}
