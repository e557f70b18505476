//! Hermitization: log-determinant fields of `A/√n − zI`, their regularized
//! versions, log-potentials of candidate limits, and the Girko identity
//! recovering the characteristic function from the `g` transform.

mod field;
mod girko;

pub use field::{log_det_field, regularized_log_det, LatticeSpec, LogPotentialGrid, DEFAULT_EPS_EXPONENT};
pub use girko::{cutoff, girko_kernel, girko_reconstruct, QuadratureSpec};

use num_complex::Complex64;

use crate::error::Result;
use crate::limits::CircularLaw;
use crate::measures::EmpiricalMeasure2D;

/// Measures with a computable `∫ log|w − z| dμ(w)`.
pub trait LogPotential {
    fn log_potential(&self, z: Complex64) -> Result<f64>;
}

impl LogPotential for EmpiricalMeasure2D {
    fn log_potential(&self, z: Complex64) -> Result<f64> {
        EmpiricalMeasure2D::log_potential(self, z)
    }
}

impl LogPotential for CircularLaw {
    fn log_potential(&self, z: Complex64) -> Result<f64> {
        Ok(CircularLaw::log_potential(self, z))
    }
}

pub fn log_potential<M: LogPotential + ?Sized>(mu: &M, z: Complex64) -> Result<f64> {
    mu.log_potential(z)
}
