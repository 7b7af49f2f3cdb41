use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use sdpi_core::numfmt::round_significant;
use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, CliResult};

pub const SIGNIFICANT_DIGITS: u32 = 12;

/// Rounds every float in `v` to [`SIGNIFICANT_DIGITS`]. Integers are left
/// alone; non-finite floats are already `null` in JSON.
fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64() {
                if let Some(r) =
                    serde_json::Number::from_f64(round_significant(x, SIGNIFICANT_DIGITS))
                {
                    *n = r;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Value {
    let mut v = serde_json::to_value(value).expect("report types serialize");
    round_floats(&mut v);
    v
}

/// Opens `path` for writing, or standard output when absent.
pub fn sink(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|source| {
            CliError::Io {
                path: p.to_path_buf(),
                source,
            }
        })?)),
        None => Box::new(io::stdout().lock()),
    })
}

pub fn write_json(value: &Value, path: Option<&Path>) -> CliResult<()> {
    let mut out = sink(path)?;
    let io_err = |source| CliError::Io {
        path: path.map_or_else(|| "<stdout>".into(), Path::to_path_buf),
        source,
    };
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| io_err(e.into()))?;
    writeln!(out).and_then(|_| out.flush()).map_err(io_err)
}
