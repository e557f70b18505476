//! Singular values. Small matrices (`min(rows, cols) ≤ JACOBI_MAX_ORDER`)
//! use one-sided Jacobi, which resolves every singular value to roughly
//! `ε·σ₁` absolute error. Larger ones go through the Hermitian eigenproblem
//! of the smaller Gram matrix, which is several times faster but squares
//! the condition number: singular values below about `√ε·σ₁` carry large
//! relative error there. The spectral experiments only threshold singular
//! values far above that level. Negative Gram eigenvalues produced by
//! rounding are clamped to zero.

use num_complex::Complex64;

use super::hermitian::hermitian_eigenvalues;
use super::matrix::ComplexMatrix;
use super::scalar::{dotc, Scalar};
use crate::error::Result;

/// Singular values sorted non-increasing, length `min(rows, cols)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularSpectrum {
    pub values: Vec<f64>,
}

impl SingularSpectrum {
    pub fn largest(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn smallest(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub fn singular_values(a: &ComplexMatrix) -> Result<SingularSpectrum> {
    let sq = squared_singular_values(a)?;
    Ok(SingularSpectrum {
        values: sq.into_iter().map(f64::sqrt).collect(),
    })
}

/// Largest `min(rows, cols)` handled by one-sided Jacobi.
pub const JACOBI_MAX_ORDER: usize = 64;

/// Sweep budget for one-sided Jacobi; quadratic convergence makes 10–15
/// typical.
const JACOBI_SWEEPS: usize = 60;

/// Squared singular values sorted non-increasing.
pub fn squared_singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let (r, c) = (a.rows(), a.cols());
    if r == 0 || c == 0 {
        return Ok(Vec::new());
    }
    if r.min(c) <= JACOBI_MAX_ORDER {
        return Ok(jacobi_singular_values(a)?.into_iter().map(|x| x * x).collect());
    }
    let mut ev = if a.is_real() {
        let data = a.real_parts();
        let (mut g, m) = gram(&data, r, c);
        hermitian_eigenvalues(&mut g, m)?
    } else {
        let (mut g, m) = gram(a.as_slice(), r, c);
        hermitian_eigenvalues(&mut g, m)?
    };
    for x in &mut ev {
        if *x < 0.0 {
            *x = 0.0;
        }
    }
    Ok(ev)
}

/// One-sided (Hestenes) Jacobi on the columns of `A` or `A*`, whichever has
/// fewer columns. Each rotation orthogonalizes one column pair; at
/// convergence the column norms are the singular values.
fn jacobi_singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let (r, c) = (a.rows(), a.cols());
    // Columns stored contiguously: cols[j] is column j of the tall orientation.
    let (m, k) = if r >= c { (r, c) } else { (c, r) };
    let mut cols: Vec<Vec<Complex64>> = if r >= c {
        (0..c).map(|j| (0..r).map(|i| a[(i, j)]).collect()).collect()
    } else {
        (0..r).map(|i| a.row(i).iter().map(|z| z.conj()).collect()).collect()
    };
    debug_assert!(cols.iter().all(|v| v.len() == m));
    let tol = f64::EPSILON * m as f64;
    // Columns below this squared norm are rounding noise of a rank-deficient
    // A; rotating them against each other never settles.
    let frob_sq: f64 = cols.iter().flatten().map(|z| z.norm_sqr()).sum();
    let noise = (f64::EPSILON * m as f64).powi(2) * frob_sq;
    let mut converged = false;
    for _ in 0..JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..k {
            for q in p + 1..k {
                let (head, tail) = cols.split_at_mut(q);
                let (x, y) = (&mut head[p], &mut tail[0]);
                let alpha: f64 = x.iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = y.iter().map(|z| z.norm_sqr()).sum();
                let gamma = dotc(x, y);
                let g = gamma.norm();
                if g == 0.0 || g <= tol * (alpha * beta).sqrt() || alpha.min(beta) <= noise {
                    continue;
                }
                rotated = true;
                // Rotate x and y·e^{−iφ}, where e^{iφ} = γ/|γ|, so the pair's
                // Gram entry is the real number |γ|.
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for (u, v) in x.iter_mut().zip(y.iter_mut()) {
                    let w = *v * phase.conj();
                    let nu = *u * cs - w * sn;
                    let nw = *u * sn + w * cs;
                    *u = nu;
                    *v = nw * phase;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(crate::error::Error::NumericalFailure {
            stage: "jacobi svd",
            detail: format!("no convergence in {JACOBI_SWEEPS} sweeps ({r}x{c})"),
            partial: Vec::new(),
        });
    }
    let mut sv: Vec<f64> = cols.iter().map(|v| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    Ok(sv)
}

/// Smaller Gram matrix in full row-major storage, with its order.
fn gram<T: Scalar>(data: &[T], rows: usize, cols: usize) -> (Vec<T>, usize) {
    // Work on whichever orientation has the fewer rows.
    let (src, m, k): (std::borrow::Cow<[T]>, usize, usize) = if rows <= cols {
        (std::borrow::Cow::Borrowed(data), rows, cols)
    } else {
        let mut t = vec![T::zero(); rows * cols];
        for i in 0..rows {
            for j in 0..cols {
                t[j * rows + i] = data[i * cols + j].conj();
            }
        }
        (std::borrow::Cow::Owned(t), cols, rows)
    };
    let mut g = vec![T::zero(); m * m];
    for i in 0..m {
        let ri = &src[i * k..(i + 1) * k];
        for j in 0..=i {
            let rj = &src[j * k..(j + 1) * k];
            // (AA*)_{ij} = Σ_l a_il conj(a_jl)
            let v = dotc(rj, ri);
            g[i * m + j] = v;
            g[j * m + i] = v.conj();
        }
    }
    (g, m)
}

/// In-place LU with partial pivoting: `P A = L U`, unit lower `L` stored
/// below the diagonal. `None` on an exactly zero pivot.
struct Lu {
    n: usize,
    lu: Vec<Complex64>,
    perm: Vec<usize>,
}

impl Lu {
    fn factor(a: &ComplexMatrix) -> Option<Self> {
        assert!(a.is_square());
        let n = a.rows();
        let mut m: Vec<Complex64> = a.as_slice().to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (piv, best) = (k..n)
                .map(|i| (i, m[i * n + k].norm()))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap();
            if best == 0.0 {
                return None;
            }
            if piv != k {
                for j in 0..n {
                    m.swap(k * n + j, piv * n + j);
                }
                perm.swap(k, piv);
            }
            let pivot = m[k * n + k];
            let (top, bottom) = m.split_at_mut((k + 1) * n);
            let urow = &top[k * n + k + 1..k * n + n];
            for i in 0..n - k - 1 {
                let row = &mut bottom[i * n..(i + 1) * n];
                let f = row[k] / pivot;
                row[k] = f;
                if f == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for (x, u) in row[k + 1..].iter_mut().zip(urow) {
                    *x -= f * u;
                }
            }
        }
        Some(Self { n, lu: m, perm })
    }

    fn log_abs_det(&self) -> f64 {
        (0..self.n).map(|k| self.lu[k * self.n + k].norm().ln()).sum()
    }

    /// `A⁻¹` in row-major order, by solving `A x = e_j` column by column.
    fn inverse(&self) -> ComplexMatrix {
        let n = self.n;
        let zero = Complex64::new(0.0, 0.0);
        let mut inv = vec![zero; n * n];
        let mut x = vec![zero; n];
        for j in 0..n {
            for (i, xi) in x.iter_mut().enumerate() {
                *xi = if self.perm[i] == j { Complex64::new(1.0, 0.0) } else { zero };
            }
            for i in 0..n {
                let row = &self.lu[i * n..i * n + i];
                let s: Complex64 = row.iter().zip(&x[..i]).map(|(l, v)| l * v).sum();
                x[i] -= s;
            }
            for i in (0..n).rev() {
                let row = &self.lu[i * n + i + 1..(i + 1) * n];
                let s: Complex64 = row.iter().zip(&x[i + 1..]).map(|(u, v)| u * v).sum();
                x[i] = (x[i] - s) / self.lu[i * n + i];
            }
            for i in 0..n {
                inv[i * n + j] = x[i];
            }
        }
        ComplexMatrix::from_fn(n, n, |i, j| inv[i * n + j])
    }
}

/// `|det A|` through an LU factorization with partial pivoting, returned as
/// a log. Independent of the spectral routes, for cross-checks.
pub fn log_abs_det_lu(a: &ComplexMatrix) -> Option<f64> {
    Lu::factor(a).map(|lu| lu.log_abs_det())
}

/// `σ_min(A) = 1/σ_max(A⁻¹)` for square `A`, zero when LU meets an exact
/// zero pivot. Unlike the Gram route this resolves `σ_min` far below
/// `√ε·σ_max`.
pub fn smallest_singular_value(a: &ComplexMatrix) -> Result<f64> {
    if !a.is_square() {
        return Err(crate::error::Error::config("smallest_singular_value needs a square matrix"));
    }
    if a.rows() == 0 {
        return Ok(0.0);
    }
    match Lu::factor(a) {
        None => Ok(0.0),
        Some(lu) => {
            let top = singular_values(&lu.inverse())?.largest();
            Ok(if top.is_finite() && top > 0.0 { 1.0 / top } else { 0.0 })
        }
    }
}
