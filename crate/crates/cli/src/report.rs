use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::ExperimentConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    /// Checks ran and a tolerance failed.
    Fail,
    /// The volume-constancy hypothesis fails on this background.
    Violated,
    /// Numerical failure: stall or degenerate mesh.
    Error,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Fail | Status::Violated => 1,
            Status::Error => 3,
        }
    }
}

/// One row of the family table.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyRow {
    pub t: f64,
    pub volume: f64,
    pub residual: f64,
    pub hausdorff_step: f64,
}

pub struct Outcome {
    pub status: Status,
    pub summary: String,
    pub results: serde_json::Value,
    pub rows: Option<Vec<FamilyRow>>,
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema_version: u32,
    command: &'a str,
    status: Status,
    timestamp: String,
    config: &'a ExperimentConfig,
    results: &'a serde_json::Value,
}

pub fn output_dir(config: &ExperimentConfig) -> PathBuf {
    config
        .out
        .clone()
        .or_else(|| std::env::var_os("NKCURVES_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

/// Writes `<command>.json` and, for families, `<command>.csv`; returns the
/// report path.
pub fn write(config: &ExperimentConfig, outcome: &Outcome) -> std::io::Result<PathBuf> {
    let dir = output_dir(config);
    fs::create_dir_all(&dir)?;
    let envelope = Envelope {
        schema_version: SCHEMA_VERSION,
        command: &config.command,
        status: outcome.status,
        timestamp: chrono::Utc::now().to_rfc3339(),
        config,
        results: &outcome.results,
    };
    let path = dir.join(format!("{}.json", config.command));
    fs::write(&path, serde_json::to_string_pretty(&envelope)? + "\n")?;
    if let Some(rows) = &outcome.rows {
        write_rows(&dir.join(format!("{}.csv", config.command)), rows)?;
    }
    Ok(path)
}

fn write_rows(path: &Path, rows: &[FamilyRow]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()
}
