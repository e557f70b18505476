use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::normalized;
use crate::numerics::det::log_of_product;
use crate::numerics::{singular_values, squared_singular_values, ComplexMatrix, LogDet};

/// `ε_n = n^{DEFAULT_EPS_EXPONENT}` for the regularized log-determinant.
pub const DEFAULT_EPS_EXPONENT: f64 = -0.1;

/// Square lattice of `side × side` points centred on `center`, covering
/// `[center − extent, center + extent]` in both directions. Points sit at
/// half-step offsets, `center − extent + (k + ½)·step`, so a lattice centred
/// on an integer never lands on an integer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub center: Complex64,
    pub extent: f64,
    pub step: f64,
}

impl LatticeSpec {
    pub fn new(center: Complex64, extent: f64, step: f64) -> Result<Self> {
        let spec = LatticeSpec { center, extent, step };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.center.re.is_finite()
            && self.center.im.is_finite()
            && self.extent.is_finite()
            && self.step.is_finite()
            && self.extent > 0.0
            && self.step > 0.0;
        if !ok {
            return Err(Error::config(format!("lattice needs finite center and positive extent/step, got {self:?}")));
        }
        let ratio = 2.0 * self.extent / self.step;
        if ratio < 0.5 || (ratio - ratio.round()).abs() > 1e-9 * ratio.max(1.0) {
            return Err(Error::config(format!(
                "lattice step {} must divide 2·extent = {} into a whole number of cells",
                self.step,
                2.0 * self.extent
            )));
        }
        Ok(())
    }

    /// Points per side.
    pub fn side(&self) -> usize {
        (2.0 * self.extent / self.step).round() as usize
    }

    pub fn len(&self) -> usize {
        self.side() * self.side()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn coordinate(&self, k: usize) -> f64 {
        -self.extent + (k as f64 + 0.5) * self.step
    }

    /// Point `(i, j)`: `i` indexes the real axis, `j` the imaginary axis.
    pub fn point(&self, i: usize, j: usize) -> Complex64 {
        self.center + Complex64::new(self.coordinate(i), self.coordinate(j))
    }

    /// All points, imaginary index outer and real index inner.
    pub fn points(&self) -> Vec<Complex64> {
        let s = self.side();
        (0..s).flat_map(|j| (0..s).map(move |i| self.point(i, j))).collect()
    }
}

/// `f_n(z) = (1/n) log|det(A/√n − zI)|` sampled on a lattice, in the order of
/// [`LatticeSpec::points`].
#[derive(Debug, Clone, PartialEq)]
pub struct LogPotentialGrid {
    pub spec: LatticeSpec,
    pub values: Vec<LogDet>,
}

impl LogPotentialGrid {
    pub fn get(&self, i: usize, j: usize) -> LogDet {
        self.values[j * self.spec.side() + i]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Complex64, LogDet)> + '_ {
        self.spec.points().into_iter().zip(self.values.iter().copied())
    }

    /// Lattice points where `A/√n − zI` was exactly singular.
    pub fn singular_points(&self) -> Vec<Complex64> {
        self.iter().filter(|(_, v)| v.is_minus_infinity()).map(|(z, _)| z).collect()
    }
}

/// `(1/n)Σ log σ_i(B − zI)` for an already normalized `B`.
fn normalized_log_det(b: &ComplexMatrix, z: Complex64) -> Result<LogDet> {
    let n = b.rows() as f64;
    let s = singular_values(&b.shifted(z))?;
    Ok(log_of_product(&s.values).map(|x| x / n))
}

/// Evaluates `f_n` at every lattice point. Each point is computed
/// independently, so the result does not depend on the thread schedule.
pub fn log_det_field(a: &ComplexMatrix, grid: &LatticeSpec) -> Result<LogPotentialGrid> {
    grid.validate()?;
    let b = normalized(a)?;
    let values = grid
        .points()
        .into_par_iter()
        .map(|z| normalized_log_det(&b, z))
        .collect::<Result<Vec<_>>>()?;
    Ok(LogPotentialGrid { spec: *grid, values })
}

/// `(1/2n) Σ log(σ_i(A/√n − zI)² + ε)`; finite for every `ε > 0` and
/// increasing in `ε`.
pub fn regularized_log_det(a: &ComplexMatrix, z: Complex64, eps: f64) -> Result<f64> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::config(format!("regularization must be positive and finite, got {eps}")));
    }
    let b = normalized(a)?;
    let sq = squared_singular_values(&b.shifted(z))?;
    Ok(sq.iter().map(|&s| (s + eps).ln()).sum::<f64>() / (2.0 * sq.len() as f64))
}
