use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Multi-start solver settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Number of built-in starts (constant, slice-sum, then seeded random).
    pub starts: usize,
    /// Start `i` draws from a generator seeded with `seed + i`.
    pub seed: u64,
    /// Relative value change regarded as stationary.
    pub tol: f64,
    /// Largest coordinate change regarded as stationary.
    pub step_tol: f64,
    pub max_iter: usize,
    /// Consecutive stationary iterations required to stop.
    pub window: usize,
    /// Run starts on the thread pool (no effect without the `parallel` feature).
    pub parallel: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { starts: 32, seed: 0, tol: 1e-10, step_tol: 1e-9, max_iter: 10_000, window: 5, parallel: true }
    }
}

impl SolverOptions {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_starts(mut self, starts: usize) -> Self {
        self.starts = starts;
        self
    }

    pub fn sequential(mut self) -> Self {
        self.parallel = false;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::BadParameter(format!("tol must be positive, got {}", self.tol)));
        }
        if !(self.step_tol.is_finite() && self.step_tol > 0.0) {
            return Err(Error::BadParameter(format!("step_tol must be positive, got {}", self.step_tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::BadParameter("max_iter must be positive".into()));
        }
        if self.window == 0 {
            return Err(Error::BadParameter("window must be positive".into()));
        }
        Ok(())
    }
}
