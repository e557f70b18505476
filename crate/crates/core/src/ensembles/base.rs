use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;
use crate::rng::RngStream;

/// Whether declared entry values are taken literally or multiplied by `√n`.
/// The spectra are always studied after the global `1/√n` normalization, so
/// `sqrt_n` makes the declared values visible at unit scale.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseScale {
    #[default]
    Unit,
    SqrtN,
}

impl BaseScale {
    fn factor(self, n: usize) -> f64 {
        match self {
            BaseScale::Unit => 1.0,
            BaseScale::SqrtN => (n as f64).sqrt(),
        }
    }
}

fn half() -> f64 {
    0.5
}

/// Deterministic part `M_n` of an ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", from = "RawBase")]
pub enum BaseMatrixSpec {
    Zero,
    /// `diag(a,…,a,b,…,b)` with the first `round(split·n)` entries equal to `a`.
    TwoBlockDiagonal {
        a: f64,
        b: f64,
        split: f64,
        scale: BaseScale,
    },
    /// `magnitude` times the block-constant matrix whose `rank` diagonal
    /// blocks are all-ones; `rank = 1` is the all-`magnitude` matrix.
    LowRank { rank: usize, magnitude: f64 },
    /// Diagonal with iid entries `√n·ζ`, `ζ` uniform over `atoms`
    /// (repeat an atom to weight it). `seed` keys the draw.
    DiagonalFromMeasure { atoms: Vec<[f64; 2]>, seed: u64 },
    /// Row-major `[re, im]` pairs; must hold exactly `n²` entries.
    Explicit { entries: Vec<[f64; 2]> },
}

/// Parse-side mirror with `zero` as a struct variant, so stray keys are
/// rejected for it too.
#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawBase {
    Zero {},
    TwoBlockDiagonal {
        a: f64,
        b: f64,
        #[serde(default = "half")]
        split: f64,
        #[serde(default)]
        scale: BaseScale,
    },
    LowRank {
        rank: usize,
        magnitude: f64,
    },
    DiagonalFromMeasure {
        atoms: Vec<[f64; 2]>,
        #[serde(default)]
        seed: u64,
    },
    Explicit {
        entries: Vec<[f64; 2]>,
    },
}

impl From<RawBase> for BaseMatrixSpec {
    fn from(raw: RawBase) -> Self {
        match raw {
            RawBase::Zero {} => Self::Zero,
            RawBase::TwoBlockDiagonal { a, b, split, scale } => Self::TwoBlockDiagonal { a, b, split, scale },
            RawBase::LowRank { rank, magnitude } => Self::LowRank { rank, magnitude },
            RawBase::DiagonalFromMeasure { atoms, seed } => Self::DiagonalFromMeasure { atoms, seed },
            RawBase::Explicit { entries } => Self::Explicit { entries },
        }
    }
}

/// Stream index reserved for `diagonal_from_measure` draws.
const MEASURE_STREAM: u64 = 0x6d65_6173;

impl BaseMatrixSpec {
    pub fn validate(&self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::config("base matrix size must be at least 1"));
        }
        let finite = |x: f64| x.is_finite();
        match self {
            Self::Zero => Ok(()),
            Self::TwoBlockDiagonal { a, b, split, .. } => {
                if !(finite(*a) && finite(*b)) {
                    return Err(Error::config("two_block_diagonal values must be finite"));
                }
                if !(0.0..=1.0).contains(split) {
                    return Err(Error::config(format!("two_block_diagonal split must lie in [0, 1], got {split}")));
                }
                Ok(())
            }
            Self::LowRank { rank, magnitude } => {
                if *rank == 0 || *rank > n {
                    return Err(Error::config(format!("low_rank needs 1 ≤ rank ≤ n, got rank {rank} for n = {n}")));
                }
                if !finite(*magnitude) {
                    return Err(Error::config("low_rank magnitude must be finite"));
                }
                Ok(())
            }
            Self::DiagonalFromMeasure { atoms, .. } => {
                if atoms.is_empty() {
                    return Err(Error::config("diagonal_from_measure needs at least one atom"));
                }
                if atoms.iter().flatten().any(|x| !x.is_finite()) {
                    return Err(Error::config("diagonal_from_measure atoms must be finite"));
                }
                Ok(())
            }
            Self::Explicit { entries } => {
                if entries.len() != n * n {
                    return Err(Error::config(format!(
                        "explicit base matrix has {} entries, expected {} for n = {n}",
                        entries.len(),
                        n * n
                    )));
                }
                if entries.iter().flatten().any(|x| !x.is_finite()) {
                    return Err(Error::config("explicit entries must be finite"));
                }
                Ok(())
            }
        }
    }

    /// An upper bound on `(1/n²)‖M_n‖₂²` valid for this spec at size `n`.
    pub fn declared_bound(&self, n: usize) -> f64 {
        let nf = n as f64;
        match self {
            Self::Zero => 0.0,
            Self::TwoBlockDiagonal { a, b, scale, .. } => {
                let s = scale.factor(n);
                (a * a).max(b * b) * s * s / nf
            }
            Self::LowRank { magnitude, .. } => magnitude * magnitude,
            Self::DiagonalFromMeasure { atoms, .. } => {
                atoms.iter().map(|[re, im]| re * re + im * im).fold(0.0, f64::max)
            }
            Self::Explicit { entries } => {
                entries.iter().map(|[re, im]| re * re + im * im).sum::<f64>() / (nf * nf)
            }
        }
    }
}

pub fn build_base_matrix(spec: &BaseMatrixSpec, n: usize) -> Result<ComplexMatrix> {
    spec.validate(n)?;
    let m = match spec {
        BaseMatrixSpec::Zero => ComplexMatrix::zeros(n, n),
        BaseMatrixSpec::TwoBlockDiagonal { a, b, split, scale } => {
            let k = (split * n as f64).round() as usize;
            let s = scale.factor(n);
            let d: Vec<f64> = (0..n).map(|i| s * if i < k { *a } else { *b }).collect();
            ComplexMatrix::real_diagonal(&d)
        }
        BaseMatrixSpec::LowRank { rank, magnitude } => {
            let block = |i: usize| i * rank / n;
            let v = Complex64::new(*magnitude, 0.0);
            let zero = Complex64::new(0.0, 0.0);
            ComplexMatrix::from_fn(n, n, |i, j| if block(i) == block(j) { v } else { zero })
        }
        BaseMatrixSpec::DiagonalFromMeasure { atoms, seed } => {
            let mut rng = RngStream::new(*seed, MEASURE_STREAM);
            let s = (n as f64).sqrt();
            let d: Vec<Complex64> = (0..n)
                .map(|_| {
                    let k = ((rng.next_f64() * atoms.len() as f64) as usize).min(atoms.len() - 1);
                    Complex64::new(atoms[k][0], atoms[k][1]) * s
                })
                .collect();
            ComplexMatrix::diagonal(&d)
        }
        BaseMatrixSpec::Explicit { entries } => ComplexMatrix::new(
            n,
            n,
            entries.iter().map(|&[re, im]| Complex64::new(re, im)).collect(),
        )?,
    };
    Ok(m)
}
