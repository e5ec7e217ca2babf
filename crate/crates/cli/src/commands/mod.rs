pub mod outage;
pub mod sweep;
pub mod table;
pub mod validate;

use std::fmt;
use std::path::PathBuf;

use anyhow::Context as _;
use fhaci_core::channel::SystemConfig;
use fhaci_core::cpfsk::{RateThresholdTable, TableSpec};

use crate::Common;

/// Errors raised by the front end itself, classified for the exit code.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Numeric(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "configuration error: {m}"),
            Failure::Numeric(m) => write!(f, "numeric failure: {m}"),
        }
    }
}

impl std::error::Error for Failure {}

pub fn load_config(common: &Common) -> anyhow::Result<SystemConfig> {
    let Some(path) = &common.config else {
        return Ok(SystemConfig::reference_network());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
    SystemConfig::from_json(&text).with_context(|| format!("in {}", path.display()))
}

pub fn table_path(common: &Common) -> PathBuf {
    common
        .table
        .clone()
        .unwrap_or_else(|| common.out.join("rate_table.json"))
}

/// Loads the rate table, building the default one if no file exists yet.
pub fn load_table(common: &Common) -> anyhow::Result<(RateThresholdTable, PathBuf)> {
    let path = table_path(common);
    if path.exists() {
        let t = RateThresholdTable::load(&path).with_context(|| format!("loading table {}", path.display()))?;
        return Ok((t, path));
    }
    if common.table.is_some() {
        return Err(Failure::Config(format!("table {} does not exist", path.display())).into());
    }
    eprintln!("building default rate table (one-time, cached at {})", path.display());
    let t = RateThresholdTable::build(&TableSpec::default())?;
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    t.save(&path)?;
    Ok((t, path))
}

/// Parses `a:b:step` (inclusive) or a comma-separated list.
pub fn parse_values(text: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let num = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("`{s}`: {e}"));
    let values = match parts.as_slice() {
        [a, b, step] => {
            let (a, b, step) = (num(a)?, num(b)?, num(step)?);
            if !(step > 0.0) || b < a {
                return Err(format!("range `{text}` needs first <= last and step > 0"));
            }
            let n = ((b - a) / step + 1e-9).floor() as usize;
            (0..=n).map(|i| ((a + step * i as f64) * 1e9).round() / 1e9).collect()
        }
        [_] => text.split(',').map(num).collect::<Result<Vec<_>, _>>()?,
        _ => return Err(format!("`{text}` is neither a list nor first:last:step")),
    };
    if values.is_empty() {
        return Err("empty value list".into());
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_lists_and_ranges() {
        assert_eq!(parse_values("0.96,0.99").unwrap(), vec![0.96, 0.99]);
        assert_eq!(parse_values("1:5:2").unwrap(), vec![1.0, 3.0, 5.0]);
        assert_eq!(parse_values("0.9:0.95:0.01").unwrap().len(), 6);
        assert!(parse_values("3:1:1").is_err());
        assert!(parse_values("x").is_err());
        assert!(parse_values("1:2").is_err());
    }
}
