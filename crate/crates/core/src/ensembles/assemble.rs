use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{smallest_singular_value, ComplexMatrix};

/// Relative threshold below which `K` or `L` counts as non-invertible.
pub const INVERTIBILITY_TOLERANCE: f64 = 1e-12;

/// How the random part enters `A = M + (…)`.
#[derive(Debug, Clone, Copy)]
pub enum Assembly<'a> {
    /// `M + X`.
    Shift,
    /// `M + K X L`.
    Sandwich { k: &'a ComplexMatrix, l: &'a ComplexMatrix },
    /// `M + C∘X`, with real entries of `C` in `[a, b]`, `0 < a ≤ b`.
    HadamardProfile { c: &'a ComplexMatrix },
}

/// Builds the unnormalized matrix; the `1/√n` factor is applied downstream.
pub fn assemble(m: &ComplexMatrix, x: &ComplexMatrix, mode: Assembly<'_>) -> Result<ComplexMatrix> {
    let n = m.rows();
    let check = |name: &str, a: &ComplexMatrix| {
        if a.rows() != n || a.cols() != n {
            Err(Error::config(format!(
                "{name} is {}x{}, expected {n}x{n}",
                a.rows(),
                a.cols()
            )))
        } else {
            Ok(())
        }
    };
    check("M", m)?;
    check("X", x)?;
    match mode {
        Assembly::Shift => m.add(x),
        Assembly::Sandwich { k, l } => {
            check("K", k)?;
            check("L", l)?;
            ensure_invertible("K", k)?;
            ensure_invertible("L", l)?;
            m.add(&k.matmul(x)?.matmul(l)?)
        }
        Assembly::HadamardProfile { c } => {
            check("C", c)?;
            validate_profile(c)?;
            m.add(&c.hadamard(x)?)
        }
    }
}

fn ensure_invertible(name: &str, a: &ComplexMatrix) -> Result<()> {
    let norm = a.hs_norm();
    let smin = smallest_singular_value(a)?;
    if norm == 0.0 || smin < INVERTIBILITY_TOLERANCE * norm {
        return Err(Error::DegenerateOperator(format!(
            "{name} is not invertible: σ_min = {smin:e}, ‖{name}‖₂ = {norm:e}"
        )));
    }
    Ok(())
}

/// Returns the observed `(a, b)` bracket of a valid variance profile.
pub fn validate_profile(c: &ComplexMatrix) -> Result<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for v in c.as_slice() {
        if v.im != 0.0 || !(v.re > 0.0) {
            return Err(Error::config(format!(
                "variance profile entries must be real and positive, found {v}"
            )));
        }
        lo = lo.min(v.re);
        hi = hi.max(v.re);
    }
    Ok((lo, hi))
}

/// Serializable description of a variance profile `C`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileSpec {
    Constant { value: f64 },
    /// `C_ij = low + (high − low)·(i + j)/(2(n − 1))`.
    Ramp { low: f64, high: f64 },
    /// Row-major real entries, exactly `n²` of them.
    Explicit { entries: Vec<f64> },
}

impl ProfileSpec {
    pub fn build(&self, n: usize) -> Result<ComplexMatrix> {
        if n == 0 {
            return Err(Error::config("profile size must be at least 1"));
        }
        let c = match self {
            Self::Constant { value } => ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(*value, 0.0)),
            Self::Ramp { low, high } => {
                let denom = (2 * n.saturating_sub(1)).max(1) as f64;
                ComplexMatrix::from_fn(n, n, |i, j| Complex64::new(low + (high - low) * (i + j) as f64 / denom, 0.0))
            }
            Self::Explicit { entries } => {
                if entries.len() != n * n {
                    return Err(Error::config(format!(
                        "explicit profile has {} entries, expected {}",
                        entries.len(),
                        n * n
                    )));
                }
                ComplexMatrix::from_real(n, n, entries)?
            }
        };
        validate_profile(&c)?;
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{build_iid_matrix, ScalarDistribution};
    use crate::rng::RngStream;

    fn sample(n: usize) -> ComplexMatrix {
        build_iid_matrix(n, &ScalarDistribution::ComplexGaussian, &mut RngStream::new(8, 1)).unwrap()
    }

    #[test]
    fn shift_of_zero_is_identity_map() {
        let x = sample(5);
        assert_eq!(assemble(&ComplexMatrix::zeros(5, 5), &x, Assembly::Shift).unwrap(), x);
    }

    #[test]
    fn sandwich_with_identities_matches_shift() {
        let x = sample(6);
        let m = ComplexMatrix::real_diagonal(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let i = ComplexMatrix::identity(6);
        let a = assemble(&m, &x, Assembly::Sandwich { k: &i, l: &i }).unwrap();
        assert_eq!(a, assemble(&m, &x, Assembly::Shift).unwrap());
    }

    #[test]
    fn unit_profile_matches_shift_exactly() {
        let x = sample(6);
        let m = ComplexMatrix::identity(6);
        let c = ProfileSpec::Constant { value: 1.0 }.build(6).unwrap();
        let a = assemble(&m, &x, Assembly::HadamardProfile { c: &c }).unwrap();
        assert_eq!(a, assemble(&m, &x, Assembly::Shift).unwrap());
    }

    #[test]
    fn singular_sandwich_is_rejected() {
        let x = sample(3);
        let k = ComplexMatrix::real_diagonal(&[1.0, 1.0, 0.0]);
        let i = ComplexMatrix::identity(3);
        let err = assemble(&ComplexMatrix::zeros(3, 3), &x, Assembly::Sandwich { k: &k, l: &i });
        assert!(matches!(err, Err(Error::DegenerateOperator(_))));
        let rank_one = ComplexMatrix::from_fn(3, 3, |_, _| Complex64::new(1.0, 0.0));
        let err = assemble(&ComplexMatrix::zeros(3, 3), &x, Assembly::Sandwich { k: &i, l: &rank_one });
        assert!(matches!(err, Err(Error::DegenerateOperator(_))));
    }

    #[test]
    fn size_mismatch_is_config_error() {
        let err = assemble(&ComplexMatrix::zeros(3, 3), &sample(4), Assembly::Shift);
        assert!(matches!(err, Err(Error::Config(_))));
    }

    #[test]
    fn profile_validation() {
        assert!(ProfileSpec::Constant { value: 0.0 }.build(2).is_err());
        let ramp = ProfileSpec::Ramp { low: 0.5, high: 2.0 }.build(4).unwrap();
        assert_eq!(ramp[(0, 0)].re, 0.5);
        assert_eq!(ramp[(3, 3)].re, 2.0);
        assert_eq!(validate_profile(&ramp).unwrap(), (0.5, 2.0));
        assert!(ProfileSpec::Explicit { entries: vec![1.0; 3] }.build(2).is_err());
    }
}
