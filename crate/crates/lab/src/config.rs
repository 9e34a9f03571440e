//! Runtime configuration: tolerances, memory budget and ladder defaults.
//!
//! Everything has a documented default; a single JSON file overrides any
//! subset of fields. The output directory is the one knob that may also be
//! set through the environment (`BESOV_OUT_DIR`).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse config {path}: {source}")]
    Parse {
        path: PathBuf,
        source: serde_json::Error,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Partition-of-unity defect allowed on the covered cube.
    pub partition_unity: f64,
    /// Mask values below this count as zero support.
    pub support_zero: f64,
    /// Relative agreement required between successive ladder rungs.
    pub ladder_rel: f64,
    /// Relative agreement required between the FFT pipeline and the
    /// direct-summation reference.
    pub fft_oracle_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            partition_unity: 1e-12,
            support_zero: 1e-14,
            ladder_rel: 1e-3,
            fft_oracle_rel: 1e-9,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct Config {
    pub tolerances: Tolerances,
    /// Masks are materialized densely only when the whole family fits in
    /// this budget.
    pub memory_budget_bytes: usize,
    /// Number of rungs a witness ladder runs per row.
    pub ladder_rungs: usize,
    /// Where reports land when the caller passes a relative output path.
    pub output_dir: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            tolerances: Tolerances::default(),
            memory_budget_bytes: DEFAULT_MEMORY_BUDGET,
            ladder_rungs: 2,
            output_dir: None,
        }
    }
}

const DEFAULT_MEMORY_BUDGET: usize = 512 << 20;

pub fn default_memory_budget() -> usize {
    DEFAULT_MEMORY_BUDGET
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| ConfigError::Parse {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Resolves an output path: absolute paths pass through; relative ones
    /// are joined onto `BESOV_OUT_DIR`, then the configured directory.
    pub fn resolve_output(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            return path.to_path_buf();
        }
        if let Ok(dir) = std::env::var("BESOV_OUT_DIR") {
            if !dir.is_empty() {
                return PathBuf::from(dir).join(path);
            }
        }
        match &self.output_dir {
            Some(dir) => dir.join(path),
            None => path.to_path_buf(),
        }
    }
}
