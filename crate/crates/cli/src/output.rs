//! CSV tables, summaries and the error file.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::{json, Value};

use crate::config::ExperimentConfig;

pub enum Cell {
    F(f64),
    U(u64),
    I(i64),
    S(String),
    Empty,
}

/// Plain decimal in the usual range, exponent form outside it. Both are the
/// shortest strings that round-trip.
pub fn format_float(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::F(x) => format_float(*x),
            Cell::U(x) => x.to_string(),
            Cell::I(x) => x.to_string(),
            Cell::S(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

pub struct Table {
    /// Empty for the main table `<name>.csv`, else `<name>.<suffix>.csv`.
    pub suffix: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(suffix: &str, header: &[&str]) -> Self {
        Self { suffix: suffix.into(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn file_name(&self, name: &str) -> String {
        if self.suffix.is_empty() {
            format!("{name}.csv")
        } else {
            format!("{name}.{}.csv", self.suffix)
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Writes every table and `<name>.summary.json`; returns the paths written.
pub fn write_artifacts(
    dir: &Path,
    config: &ExperimentConfig,
    tables: &[Table],
    metrics: Value,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut written = Vec::new();
    let mut files = Vec::new();
    for table in tables {
        let file = table.file_name(&config.name);
        let path = dir.join(&file);
        table.write(&path)?;
        files.push(json!({ "file": file, "columns": table.header, "rows": table.rows.len() }));
        written.push(path);
    }
    let summary = json!({
        "name": config.name,
        "experiment": config.experiment.kind(),
        "seed": config.seed,
        "version": env!("CARGO_PKG_VERSION"),
        "units": {
            "energy": "g0",
            "time": "1/g0",
            "g0_over_2pi_mhz": config.energy_unit_mhz,
            "physical_time": "us",
        },
        "parameters": config.to_value(),
        "metrics": metrics,
        "files": files,
    });
    let path = dir.join(format!("{}.summary.json", config.name));
    fs::write(&path, serde_json::to_string_pretty(&summary)? + "\n")?;
    written.push(path);
    Ok(written)
}

pub fn write_error(dir: &Path, kind: &str, field: Option<&str>, message: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join("error.json");
    let body = json!({ "status": "error", "kind": kind, "field": field, "message": message });
    fs::write(&path, serde_json::to_string_pretty(&body)? + "\n")?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for x in [0.0, 1.0, -0.25, 1e-20, 3.5e-5, 123456.789, 1e300, f64::MIN_POSITIVE] {
            assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(format_float(0.5), "0.5");
        assert_eq!(format_float(1e-20), "1e-20");
        assert_eq!(format_float(f64::NAN), "NaN");
    }
}
