//! Dense complex linear algebra kernels.

pub mod det;
pub mod distances;
pub mod eigen;
mod hermitian;
pub mod lemmas;
pub mod matrix;
mod scalar;
pub mod svd;

pub use det::{log_abs_det, LogDet, LogDetMethod};
pub use distances::{leave_one_out_distances, row_distances, OrthonormalBasis, RANK_TOLERANCE};
pub use eigen::{eigenvalues, EigenSpectrum};
pub use lemmas::{verify_interlacing, verify_weyl, InequalityReport, WeylReport};
pub use matrix::ComplexMatrix;
pub use svd::{log_abs_det_lu, singular_values, smallest_singular_value, squared_singular_values, SingularSpectrum};

/// Hilbert–Schmidt norm `(Σ|a_ij|²)^{1/2}`.
pub fn hs_norm(a: &ComplexMatrix) -> f64 {
    a.hs_norm()
}
