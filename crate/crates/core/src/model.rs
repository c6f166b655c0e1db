use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridSpec;

/// Physical constants: damping `lambda`, nonlinearity `gamma`, period `tau`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub lambda: f64,
    pub gamma: f64,
    pub period: f64,
}

impl ModelParams {
    pub fn new(lambda: f64, gamma: f64, period: f64) -> Result<Self> {
        let p = Self { lambda, gamma, period };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(Error::InvalidParams(format!("lambda = {} must be positive", self.lambda)));
        }
        if !self.gamma.is_finite() {
            return Err(Error::InvalidParams(format!("gamma = {} must be finite", self.gamma)));
        }
        if !(self.period.is_finite() && self.period > 0.0) {
            return Err(Error::InvalidParams(format!("period = {} must be positive", self.period)));
        }
        Ok(())
    }

    /// The period must match the grid it is used with.
    pub fn check_grid(&self, grid: &GridSpec) -> Result<()> {
        let tol = 1e-12 * self.period.abs().max(grid.period.abs());
        if (self.period - grid.period).abs() > tol {
            return Err(Error::InvalidParams(format!(
                "model period {} differs from grid period {}",
                self.period, grid.period
            )));
        }
        Ok(())
    }
}
