//! Scalar laws, deterministic base matrices, and the three ways of combining
//! them into `A_n`.

mod assemble;
mod base;
mod distribution;
mod kappa;

pub use assemble::{assemble, validate_profile, Assembly, ProfileSpec, INVERTIBILITY_TOLERANCE};
pub use base::{build_base_matrix, BaseMatrixSpec, BaseScale};
pub use distribution::{sample_scalar, ScalarDistribution};
pub use kappa::{kappa_controlled_estimate, unit_grid, KappaReport, KappaRow};

use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;
use crate::rng::RngStream;

/// `n×n` matrix of iid draws, filled in row-major order.
pub fn build_iid_matrix(n: usize, dist: &ScalarDistribution, rng: &mut RngStream) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::config("matrix size must be at least 1"));
    }
    dist.validate()?;
    let data = (0..n * n).map(|_| dist.draw(rng)).collect();
    ComplexMatrix::new(n, n, data)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iid_is_reproducible() {
        let d = ScalarDistribution::RealGaussian;
        let a = build_iid_matrix(2, &d, &mut RngStream::new(42, 0)).unwrap();
        let b = build_iid_matrix(2, &d, &mut RngStream::new(42, 0)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn iid_row_major_order() {
        let d = ScalarDistribution::UniformCentered;
        let a = build_iid_matrix(3, &d, &mut RngStream::new(7, 7)).unwrap();
        let mut rng = RngStream::new(7, 7);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(a[(i, j)], sample_scalar(&d, &mut rng).unwrap());
            }
        }
    }

    #[test]
    fn iid_normalization() {
        let n = 500;
        let x = build_iid_matrix(n, &ScalarDistribution::Bernoulli, &mut RngStream::new(1, 0)).unwrap();
        assert_eq!(x.hs_norm().powi(2) / (n * n) as f64, 1.0);
        let g = build_iid_matrix(n, &ScalarDistribution::RealGaussian, &mut RngStream::new(1, 0)).unwrap();
        let v = g.hs_norm().powi(2) / (n * n) as f64;
        assert!((0.9..=1.1).contains(&v));
    }

    #[test]
    fn zero_size_rejected() {
        assert!(matches!(
            build_iid_matrix(0, &ScalarDistribution::Bernoulli, &mut RngStream::new(0, 0)),
            Err(Error::Config(_))
        ));
    }
}
