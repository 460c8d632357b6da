//! Quadrature rules shared by the special functions, transforms and pricers.

mod double_exponential;
mod gauss;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use double_exponential::{exp_sinh, tanh_sinh, DeEstimate};
pub use gauss::{hermite, hermite_cached, jacobi, laguerre_normalized, legendre, legendre_cached, GaussRule};

/// Budget and tolerances for adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub max_nodes: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { max_nodes: 20_000, rel_tol: 1e-10, abs_tol: 1e-14 }
    }
}

impl QuadratureSpec {
    pub fn new(max_nodes: usize, rel_tol: f64, abs_tol: f64) -> Result<Self> {
        let spec = QuadratureSpec { max_nodes, rel_tol, abs_tol };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |x: f64| x > 0.0 && x < 1.0;
        if !unit(self.rel_tol) || !unit(self.abs_tol) {
            return Err(Error::InvalidParameter(format!(
                "tolerances must lie in (0, 1): rel {} abs {}",
                self.rel_tol, self.abs_tol
            )));
        }
        if self.max_nodes < 16 {
            return Err(Error::InvalidParameter(format!("max_nodes {} < 16", self.max_nodes)));
        }
        Ok(())
    }

    /// Same budget with tolerances scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        QuadratureSpec {
            rel_tol: (self.rel_tol * factor).clamp(1e-15, 0.5),
            abs_tol: (self.abs_tol * factor).clamp(1e-300, 0.5),
            ..*self
        }
    }
}
