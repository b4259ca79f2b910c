//! File formats, sweeps and the acceptance harness for `bergman-core`.
//!
//! * [`format`]: polynomial text and JSON forms.
//! * [`config`]: sweep configuration files.
//! * [`corpus`]: seeded random polynomial corpora.
//! * [`report`]: verification rows, CSV and JSON output.
//! * [`sweep`]: runs a configuration's cross product of checks.
//! * [`suite`]: the fixed acceptance criteria behind `bergman verify-suite`.

pub mod config;
pub mod corpus;
pub mod format;
pub mod report;
pub mod suite;
pub mod sweep;

pub use config::SweepConfig;
pub use report::{Row, Status, VerificationReport};

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("{0}")]
    Core(#[from] bergman_core::Error),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("io error: {0}")]
    Io(String),
    #[error("thread pool: {0}")]
    Pool(String),
}

/// Runs `f` on a pool of `jobs` threads (`0` lets rayon choose).
pub fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T, LabError> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(|e| LabError::Pool(e.to_string()))?;
    Ok(pool.install(f))
}
