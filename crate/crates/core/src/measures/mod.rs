//! Empirical spectral measures, their transforms, and the distances used to
//! compare them.

mod dictionary;
mod empirical;
mod ks;

pub use dictionary::{bl_distance, Bump, TestFunctionDictionary, DICTIONARY_VERSION};
pub use empirical::{
    dilation_esd, esd_eigen, esd_gram, normalized, EmpiricalMeasure1D, EmpiricalMeasure2D, ATOM_COLLISION,
};
pub use ks::{ks_one_sample, ks_sorted, ks_two_sample, radial_angular_ks};

use num_complex::Complex64;

use crate::error::Result;

/// `(1/n)Σ e^{i(u Re λ + v Im λ)}`.
pub fn characteristic_function(mu: &EmpiricalMeasure2D, u: f64, v: f64) -> Complex64 {
    mu.characteristic_function(u, v)
}

/// `(2/n)·Re Σ (z − λ)/|z − λ|²`.
pub fn stieltjes_g(mu: &EmpiricalMeasure2D, z: Complex64) -> Result<f64> {
    mu.stieltjes_g(z)
}

/// `∫|z|² dμ`.
pub fn second_moment(mu: &EmpiricalMeasure2D) -> f64 {
    mu.second_moment()
}
