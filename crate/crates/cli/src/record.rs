//! Run records and report persistence.
//!
//! Every run is wrapped in a [`RunRecord`] that captures the command
//! line, the seed and the artifact version alongside the report payload,
//! so a run is reproducible from its record alone. Records serialize
//! through the pinned JSON form (stable key order, 17-significant-digit
//! floats) and round-trip losslessly. Reports with density profiles also
//! get a CSV side file next to the JSON.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use ifns_core::harness::CellSummary;
use ifns_core::report::{densities_to_csv, to_json_string};

/// Directory used to resolve relative output paths.
pub const OUT_DIR_ENV: &str = "IFNS_OUT_DIR";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord<T> {
    pub timestamp_unix: u64,
    pub command_line: Vec<String>,
    pub artifact_version: String,
    pub seed: Option<u64>,
    pub report: T,
}

impl<T: Serialize> RunRecord<T> {
    pub fn new(seed: Option<u64>, report: T) -> Self {
        Self {
            timestamp_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            command_line: std::env::args().collect(),
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            report,
        }
    }

    pub fn to_json(&self) -> anyhow::Result<String> {
        Ok(to_json_string(self)?)
    }
}

/// Resolve `path` against `IFNS_OUT_DIR` when it is relative.
pub fn resolve_out_path(path: &Path) -> PathBuf {
    if path.is_relative() {
        if let Ok(dir) = std::env::var(OUT_DIR_ENV) {
            if !dir.is_empty() {
                return PathBuf::from(dir).join(path);
            }
        }
    }
    path.to_path_buf()
}

/// Write the record as JSON; with `cells`, also write the density
/// profiles as `<stem>.densities.csv` next to it.
pub fn write_report<T: Serialize>(
    record: &RunRecord<T>,
    path: &Path,
    cells: Option<&[CellSummary]>,
) -> anyhow::Result<PathBuf> {
    let path = resolve_out_path(path);
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::write(&path, record.to_json()?)?;
    if let Some(cells) = cells {
        let side = path.with_extension("densities.csv");
        fs::write(&side, densities_to_csv(cells))?;
    }
    Ok(path)
}
