use std::fmt;

use super::distances::row_distances;
use super::matrix::ComplexMatrix;
use super::svd::singular_values;
use crate::error::{Error, Result};

/// Relative floor below which a singular value (or row distance) counts as
/// an exact zero.
pub const SINGULAR_FLOOR: f64 = 1e-300;

/// `log|det|`, with exact singularity as an explicit marker rather than a
/// huge negative number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LogDet {
    Finite(f64),
    MinusInfinity,
}

impl LogDet {
    pub fn finite(self) -> Option<f64> {
        match self {
            LogDet::Finite(x) => Some(x),
            LogDet::MinusInfinity => None,
        }
    }

    pub fn is_minus_infinity(self) -> bool {
        matches!(self, LogDet::MinusInfinity)
    }

    pub fn map(self, f: impl FnOnce(f64) -> f64) -> LogDet {
        match self {
            LogDet::Finite(x) => LogDet::Finite(f(x)),
            LogDet::MinusInfinity => LogDet::MinusInfinity,
        }
    }
}

impl fmt::Display for LogDet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogDet::Finite(x) => write!(f, "{x}"),
            LogDet::MinusInfinity => f.write_str("-inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogDetMethod {
    ViaSingular,
    ViaDistances,
}

pub fn log_abs_det(a: &ComplexMatrix, method: LogDetMethod) -> Result<LogDet> {
    if !a.is_square() {
        return Err(Error::config("log_abs_det needs a square matrix"));
    }
    let factors = match method {
        LogDetMethod::ViaSingular => singular_values(a)?.values,
        LogDetMethod::ViaDistances => row_distances(a)?,
    };
    Ok(log_of_product(&factors))
}

/// `Σ log x_i`, or the marker when any factor is below the floor relative to
/// the largest.
pub fn log_of_product(factors: &[f64]) -> LogDet {
    let top = factors.iter().copied().fold(0.0_f64, f64::max);
    if factors.is_empty() {
        return LogDet::Finite(0.0);
    }
    if top == 0.0 || factors.iter().any(|&x| x < SINGULAR_FLOOR * top) {
        return LogDet::MinusInfinity;
    }
    LogDet::Finite(factors.iter().map(|x| x.ln()).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_zero() {
        for method in [LogDetMethod::ViaSingular, LogDetMethod::ViaDistances] {
            assert_eq!(log_abs_det(&ComplexMatrix::identity(5), method).unwrap(), LogDet::Finite(0.0));
        }
    }

    #[test]
    fn diag_e_e2() {
        let e = std::f64::consts::E;
        let m = ComplexMatrix::real_diagonal(&[e, e * e]);
        for method in [LogDetMethod::ViaSingular, LogDetMethod::ViaDistances] {
            let v = log_abs_det(&m, method).unwrap().finite().unwrap();
            assert!((v - 3.0).abs() < 1e-14);
        }
    }

    #[test]
    fn singular_gives_marker() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, 0.0]]).unwrap();
        assert!(log_abs_det(&m, LogDetMethod::ViaDistances).unwrap().is_minus_infinity());
        assert!(log_abs_det(&ComplexMatrix::zeros(3, 3), LogDetMethod::ViaSingular)
            .unwrap()
            .is_minus_infinity());
    }
}
