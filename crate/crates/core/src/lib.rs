//! Simulation and topological diagnostics for a finite-time quantum Otto engine.
//!
//! The crate is organized bottom-up:
//!
//! - [`engine`]: Bloch-equation integration of the four-stroke cycle under
//!   five control-degradation models.
//! - [`tda`]: delay embedding, H1 Vietoris–Rips persistence, Wasserstein-1 and
//!   bottleneck distances, and the quality index.
//! - [`vectorize`]: persistence images and silhouettes.
//! - [`ssm`]: the six-statistic spectral-statistical baseline.
//! - [`mlkit`]: logistic regression, ROC/AUC, stratified cross-validation and
//!   Pearson correlation maps.
//! - [`pipeline`]: dataset generation, experiments, sweeps and reports.

pub mod engine;
pub mod error;
pub mod format;
pub mod mlkit;
pub mod pipeline;
pub mod ssm;
pub mod tda;
pub mod vectorize;

pub use engine::{BlochState, EngineParams, NoiseModel, NoiseSpec, Trajectory};
pub use error::{Error, Result};

use std::path::Path;

/// Writes `bytes` to a temporary sibling and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}
