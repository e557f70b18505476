//! Distances from rows to spans of other rows, by modified Gram–Schmidt with
//! one full reorthogonalization pass.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::scalar::{axpy, dotc, norm2};
use super::svd::singular_values;
use crate::error::{Error, Result};

/// Incrementally built orthonormal basis of a subspace of ℂⁿ.
#[derive(Debug, Clone, Default)]
pub struct OrthonormalBasis {
    vectors: Vec<Vec<Complex64>>,
}

impl OrthonormalBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Residual of `x` after projecting out the basis (two MGS passes).
    pub fn residual(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut r = x.to_vec();
        for _pass in 0..2 {
            for q in &self.vectors {
                let coef = dotc(q, &r);
                axpy(-coef, q, &mut r);
            }
        }
        r
    }

    pub fn distance(&self, x: &[Complex64]) -> f64 {
        norm2(&self.residual(x))
    }

    /// Appends the normalized residual of `x`; returns the residual norm.
    /// Residuals below `1e-13·‖x‖` are treated as dependent and not added.
    pub fn push(&mut self, x: &[Complex64]) -> f64 {
        let mut r = self.residual(x);
        let d = norm2(&r);
        if d > 1e-13 * norm2(x) && d > 0.0 {
            let inv = 1.0 / d;
            r.iter_mut().for_each(|v| *v *= inv);
            self.vectors.push(r);
        }
        d
    }
}

/// Relative singular-value floor below which a matrix counts as
/// numerically rank-deficient for the exact identities.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// `d_1 = ‖row_1‖`, `d_i = dist(row_i, span(rows_1..i−1))`.
pub fn row_distances(a: &ComplexMatrix) -> Result<Vec<f64>> {
    if !a.is_square() {
        return Err(Error::config("row_distances needs a square matrix"));
    }
    let mut basis = OrthonormalBasis::new();
    Ok((0..a.rows()).map(|i| basis.push(a.row(i))).collect())
}

/// `dist(X_j, W_j)` where `W_j` is spanned by every row except `j`.
/// Requires full row rank (`σ_min > RANK_TOLERANCE·σ_1`).
pub fn leave_one_out_distances(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let (rows, cols) = (a.rows(), a.cols());
    if rows == 0 || rows > cols {
        return Err(Error::config(format!(
            "leave-one-out distances need 1 ≤ rows ≤ cols, got {rows}x{cols}"
        )));
    }
    let s = singular_values(a)?;
    if !(s.smallest() > RANK_TOLERANCE * s.largest()) {
        return Err(Error::DegenerateInput(format!(
            "matrix is not of full rank: σ_min = {:e}, σ_max = {:e}",
            s.smallest(),
            s.largest()
        )));
    }
    Ok((0..rows)
        .map(|j| {
            let mut basis = OrthonormalBasis::new();
            for i in (0..rows).filter(|&i| i != j) {
                basis.push(a.row(i));
            }
            basis.distance(a.row(j))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_rows() {
        let d = row_distances(&ComplexMatrix::real_diagonal(&[3.0, 4.0])).unwrap();
        assert_eq!(d, vec![3.0, 4.0]);
    }

    #[test]
    fn shear_rows() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        let d = row_distances(&m).unwrap();
        assert!((d[0] - 2f64.sqrt()).abs() < 1e-15);
        assert!((d[1] - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((d[0] * d[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rank_deficient_prefix_gives_zero_not_error() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]).unwrap();
        let d = row_distances(&m).unwrap();
        assert!(d[1] < 1e-14);
    }

    #[test]
    fn leave_one_out_examples() {
        let d = leave_one_out_distances(&ComplexMatrix::real_diagonal(&[1.0, 2.0])).unwrap();
        assert_eq!(d, vec![1.0, 2.0]);
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        let d = leave_one_out_distances(&m).unwrap();
        assert!((d[0] - 1.0).abs() < 1e-15);
        assert!((d[1] - 0.5f64.sqrt()).abs() < 1e-15);
        let inv_sq: f64 = d.iter().map(|x| x.powi(-2)).sum();
        assert!((inv_sq - 3.0).abs() < 1e-13);
    }

    #[test]
    fn leave_one_out_rejects_rank_deficiency() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 2.0, 0.0], &[2.0, 4.0, 0.0]]).unwrap();
        assert!(matches!(leave_one_out_distances(&m), Err(Error::DegenerateInput(_))));
        assert!(matches!(leave_one_out_distances(&ComplexMatrix::zeros(3, 2)), Err(Error::Config(_))));
    }
}
