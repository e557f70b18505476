//! Eigenvalues of Hermitian matrices: Householder tridiagonalization
//! followed by implicit QL with Wilkinson-type shifts.

use super::eigen::{householder, ITERATIONS_PER_EIGENVALUE};
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Eigenvalues of the Hermitian matrix stored densely (row-major, full
/// storage) in `a`, sorted descending. `a` is destroyed.
pub(crate) fn hermitian_eigenvalues<T: Scalar>(a: &mut [T], n: usize) -> Result<Vec<f64>> {
    let (mut d, mut e) = tridiagonalize(a, n);
    tridiagonal_ql(&mut d, &mut e)?;
    d.sort_by(|x, y| y.total_cmp(x));
    Ok(d)
}

/// Reduces to a real symmetric tridiagonal `(diag, offdiag)`. Off-diagonal
/// phases are dropped: a diagonal unitary similarity makes them real and
/// non-negative without changing the spectrum.
fn tridiagonalize<T: Scalar>(a: &mut [T], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut v = vec![T::zero(); n];
    let mut p = vec![T::zero(); n];
    for k in 0..n.saturating_sub(2) {
        d[k] = a[k * n + k].re();
        let m = n - k - 1;
        for i in 0..m {
            v[i] = a[(k + 1 + i) * n + k];
        }
        let (beta, alpha) = householder(&mut v[..m]);
        e[k] = alpha.abs();
        if beta == 0.0 {
            continue;
        }
        let off = k + 1;
        let vs = &v[..m];
        // p = beta · B v
        for i in 0..m {
            let row = &a[(off + i) * n + off..(off + i + 1) * n];
            let mut s = T::zero();
            for (&bij, &vj) in row.iter().zip(vs) {
                s += bij * vj;
            }
            p[i] = s.scale(beta);
        }
        // w = p − (beta/2)(v* p) v
        let mut vp = T::zero();
        for i in 0..m {
            vp += vs[i].conj() * p[i];
        }
        let kk = vp.scale(0.5 * beta);
        for i in 0..m {
            p[i] -= kk * vs[i];
        }
        let ws = &p[..m];
        // B ← B − v w* − w v*
        for i in 0..m {
            let vi = vs[i];
            let wi = ws[i];
            let row = &mut a[(off + i) * n + off..(off + i + 1) * n];
            for ((bij, &vj), &wj) in row.iter_mut().zip(vs).zip(ws) {
                *bij -= vi * wj.conj() + wi * vj.conj();
            }
        }
    }
    if n >= 2 {
        d[n - 2] = a[(n - 2) * n + n - 2].re();
        e[n - 2] = a[(n - 1) * n + n - 2].abs();
    }
    if n >= 1 {
        d[n - 1] = a[(n - 1) * n + n - 1].re();
    }
    (d, e)
}

/// Implicit QL on a symmetric tridiagonal matrix; eigenvalues overwrite `d`.
/// `e[i]` couples `d[i]` and `d[i+1]`; `e[n-1]` is ignored.
pub(crate) fn tridiagonal_ql(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    // Deflating below ε·‖T‖ is backward stable and stops graded tails of
    // tiny entries from stalling the relative test.
    let norm = (0..n).map(|i| d[i].abs() + e[i].abs()).fold(0.0, f64::max);
    let floor = f64::EPSILON * norm;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m].abs() <= floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > ITERATIONS_PER_EIGENVALUE {
                return Err(Error::NumericalFailure {
                    stage: "tridiagonal_ql",
                    detail: format!("eigenvalue {l} did not converge"),
                    partial: d[..l].iter().map(|&x| x.into()).collect(),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + if g >= 0.0 { r } else { -r });
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
