//! Experiment configuration.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Tolerances {
    pub tol_metric: f64,
    pub tol_conv: f64,
    pub resolution: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { tol_metric: 1e-9, tol_conv: 1e-9, resolution: 0.05 }
    }
}

/// Configuration shared by the batch experiment runners. Instances are
/// reproducible from `seed` alone; see [`crate::rng::SplitMix64`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub instance_count: usize,
    pub dim: usize,
    pub cloud_size: usize,
    /// The dimension constant of the right-hand inequality; the reports
    /// label derived quantities as relative to this configured value.
    pub c_prime: f64,
    pub tolerances: Tolerances,
    pub output_path: PathBuf,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.instance_count == 0 {
            return Err(CliError::input("instance_count must be positive"));
        }
        if self.dim == 0 || self.cloud_size == 0 {
            return Err(CliError::input("dim and cloud_size must be positive"));
        }
        if !(self.c_prime > 0.0) || !self.c_prime.is_finite() {
            return Err(CliError::input("c_prime must be positive and finite"));
        }
        let t = &self.tolerances;
        if !(t.tol_metric >= 0.0) || !(t.tol_conv > 0.0) || !(t.resolution > 0.0) {
            return Err(CliError::input("tolerances must be positive"));
        }
        Ok(())
    }
}
