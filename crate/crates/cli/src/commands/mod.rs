pub mod analyze;
pub mod boundary;
pub mod sweep;
pub mod verify;

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

pub(crate) fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub(crate) fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub(crate) fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json(value)?).with_context(|| format!("writing {}", path.display()))
}

pub(crate) fn write_csv(path: &Path, header: &str, rows: &[String]) -> Result<()> {
    let mut s = String::with_capacity(header.len() + 1 + rows.len() * 64);
    s.push_str(header);
    s.push('\n');
    for r in rows {
        s.push_str(r);
        s.push('\n');
    }
    fs::write(path, s).with_context(|| format!("writing {}", path.display()))
}

/// `NaN` for instabilities and singular bounds, other errors pass through.
pub(crate) fn or_nan(r: qnet::Result<f64>) -> qnet::Result<f64> {
    match r {
        Ok(v) => Ok(v),
        Err(e) if e.is_instability() || matches!(e, qnet::Error::Singularity(_)) => Ok(f64::NAN),
        Err(e) => Err(e),
    }
}
