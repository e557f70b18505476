//! Eigenvalues of dense non-Hermitian matrices.
//!
//! Pipeline: diagonal balancing, Householder reduction to upper Hessenberg
//! form, then shifted QR on the Hessenberg matrix with eigenvalue-only
//! updates (transformations touch only the active window). Real inputs use
//! the Francis double-shift step, which keeps arithmetic real and delivers
//! complex-conjugate pairs from 2×2 blocks; complex inputs use the
//! single-shift step with the Wilkinson shift.
//!
//! A subdiagonal entry is treated as zero once
//! `|h[k+1][k]| ≤ 1e-14 · (|h[k][k]| + |h[k+1][k+1]|)`. Each eigenvalue gets
//! at most [`ITERATIONS_PER_EIGENVALUE`] sweeps, with exceptional shifts at
//! sweeps 10, 20 and 30.
//!
//! Defective matrices (Jordan blocks) are handled on a best-effort basis: a
//! block of size k comes back as a cluster whose spread is of order ε^{1/k}.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::scalar::{norm2, Scalar};
use crate::error::{Error, Result};

pub const DEFLATION_TOLERANCE: f64 = 1e-14;
pub const ITERATIONS_PER_EIGENVALUE: usize = 40;

/// Eigenvalues with multiplicity, in no particular order.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSpectrum {
    pub values: Vec<Complex64>,
}

impl EigenSpectrum {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> Complex64 {
        self.values.iter().sum()
    }

    /// Moduli sorted ascending, the ordering used by the product inequalities.
    pub fn moduli_ascending(&self) -> Vec<f64> {
        let mut m: Vec<f64> = self.values.iter().map(|z| z.norm()).collect();
        m.sort_by(f64::total_cmp);
        m
    }
}

pub fn eigenvalues(a: &ComplexMatrix) -> Result<EigenSpectrum> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::config(format!(
            "eigenvalues need a non-empty square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let values = if a.is_real() {
        let mut h = a.real_parts();
        balance(&mut h, n);
        hessenberg(&mut h, n);
        real_hessenberg_qr(&mut h, n)?
    } else {
        let mut h = a.as_slice().to_vec();
        balance(&mut h, n);
        hessenberg(&mut h, n);
        complex_hessenberg_qr(&mut h, n)?
    };
    Ok(EigenSpectrum { values })
}

/// Diagonal similarity scaling by powers of two so that row and column
/// norms are comparable. Exact in floating point; no permutations.
pub(crate) fn balance<T: Scalar>(a: &mut [T], n: usize) {
    const RADIX: f64 = 2.0;
    const RADIX_SQ: f64 = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[j * n + i].abs1();
                    r += a[i * n + j].abs1();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX_SQ;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= RADIX_SQ;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let inv = 1.0 / f;
                for j in 0..n {
                    a[i * n + j] = a[i * n + j].scale(inv);
                }
                for j in 0..n {
                    a[j * n + i] = a[j * n + i].scale(f);
                }
            }
        }
    }
}

/// Householder vector for `x`: on return `x` holds `v` and the result is
/// `(beta, alpha)` with `(I − beta·v·v*)·x_original = alpha·e₁`.
pub(crate) fn householder<T: Scalar>(x: &mut [T]) -> (f64, T) {
    let norm = norm2(x);
    if norm == 0.0 {
        return (0.0, T::zero());
    }
    let alpha = -x[0].phase().scale(norm);
    x[0] -= alpha;
    let vnorm = norm2(x);
    if vnorm == 0.0 {
        return (0.0, alpha);
    }
    // Normalize v so beta = 2; squaring a tiny ‖v‖ would underflow.
    let s = T::from_f64(vnorm);
    for xi in x.iter_mut() {
        *xi = *xi / s;
    }
    (2.0, alpha)
}

/// In-place unitary reduction to upper Hessenberg form.
pub(crate) fn hessenberg<T: Scalar>(a: &mut [T], n: usize) {
    if n < 3 {
        return;
    }
    let mut v = vec![T::zero(); n];
    let mut w = vec![T::zero(); n];
    for k in 0..n - 2 {
        let m = n - k - 1;
        for i in 0..m {
            v[i] = a[(k + 1 + i) * n + k];
        }
        let (beta, alpha) = householder(&mut v[..m]);
        if beta == 0.0 {
            continue;
        }
        // Left: rows k+1.., columns k+1.. (column k is set directly below).
        let wk = &mut w[k + 1..n];
        wk.iter_mut().for_each(|x| *x = T::zero());
        for i in 0..m {
            let vi = v[i].conj();
            let row = &a[(k + 1 + i) * n + k + 1..(k + 2 + i) * n];
            for (wj, &r) in wk.iter_mut().zip(row) {
                *wj += vi * r;
            }
        }
        for i in 0..m {
            let f = v[i].scale(beta);
            let row = &mut a[(k + 1 + i) * n + k + 1..(k + 2 + i) * n];
            for (r, &wj) in row.iter_mut().zip(wk.iter()) {
                *r -= f * wj;
            }
        }
        a[(k + 1) * n + k] = alpha;
        for i in 1..m {
            a[(k + 1 + i) * n + k] = T::zero();
        }
        // Right: all rows, columns k+1..
        let vs = &v[..m];
        for r in 0..n {
            let row = &mut a[r * n + k + 1..(r + 1) * n];
            let mut s = T::zero();
            for (&x, &vj) in row.iter().zip(vs) {
                s += x * vj;
            }
            if s == T::zero() {
                continue;
            }
            let f = s.scale(beta);
            for (x, &vj) in row.iter_mut().zip(vs) {
                *x -= f * vj.conj();
            }
        }
    }
}

fn budget_exhausted(found: &[Complex64], remaining: usize) -> Error {
    Error::NumericalFailure {
        stage: "hessenberg_qr",
        detail: format!(
            "no convergence after {ITERATIONS_PER_EIGENVALUE} sweeps with {remaining} eigenvalues outstanding"
        ),
        partial: found.to_vec(),
    }
}

#[inline]
fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Francis double-shift QR on a real upper Hessenberg matrix.
fn real_hessenberg_qr(a: &mut [f64], n: usize) -> Result<Vec<Complex64>> {
    let idx = |i: usize, j: usize| i * n + j;
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    let mut found: Vec<Complex64> = Vec::with_capacity(n);

    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[idx(i, j)].abs();
        }
    }

    let mut nn = n as isize - 1;
    let mut t = 0.0;
    while nn >= 0 {
        let mut its = 0;
        loop {
            let nnu = nn as usize;
            // Find a negligible subdiagonal element.
            let mut l = nnu;
            while l >= 1 {
                let mut s = a[idx(l - 1, l - 1)].abs() + a[idx(l, l)].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[idx(l, l - 1)].abs() <= DEFLATION_TOLERANCE * s {
                    a[idx(l, l - 1)] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[idx(nnu, nnu)];
            if l == nnu {
                out[nnu] = Complex64::new(x + t, 0.0);
                found.push(out[nnu]);
                nn -= 1;
                break;
            }
            let mut y = a[idx(nnu - 1, nnu - 1)];
            let mut w = a[idx(nnu, nnu - 1)] * a[idx(nnu - 1, nnu)];
            if l == nnu - 1 {
                // Trailing 2×2 block.
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    let z = p + sign(z, p);
                    let e2 = if z != 0.0 { x - w / z } else { x + z };
                    out[nnu - 1] = Complex64::new(x + z, 0.0);
                    out[nnu] = Complex64::new(e2, 0.0);
                } else {
                    out[nnu - 1] = Complex64::new(x + p, z);
                    out[nnu] = Complex64::new(x + p, -z);
                }
                found.push(out[nnu - 1]);
                found.push(out[nnu]);
                nn -= 2;
                break;
            }
            if its == ITERATIONS_PER_EIGENVALUE {
                return Err(budget_exhausted(&found, nnu + 1));
            }
            if its == 10 || its == 20 || its == 30 {
                // Exceptional shift.
                t += x;
                for i in 0..=nnu {
                    a[idx(i, i)] -= x;
                }
                let s = a[idx(nnu, nnu - 1)].abs() + a[idx(nnu - 1, nnu - 2)].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;

            // Look for two consecutive small subdiagonal elements.
            let mut m = nnu - 2;
            let (mut p, mut q, mut r);
            loop {
                let z = a[idx(m, m)];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a[idx(m + 1, m)] + a[idx(m, m + 1)];
                q = a[idx(m + 1, m + 1)] - z - rr - ss;
                r = a[idx(m + 2, m + 1)];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[idx(m, m - 1)].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[idx(m - 1, m - 1)].abs() + z.abs() + a[idx(m + 1, m + 1)].abs());
                if u <= f64::EPSILON * v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nnu {
                a[idx(i, i - 2)] = 0.0;
                if i != m + 2 {
                    a[idx(i, i - 3)] = 0.0;
                }
            }
            // Double-shift sweep chasing the bulge from row m to nn.
            let mut k = m;
            while k < nnu {
                if k != m {
                    p = a[idx(k, k - 1)];
                    q = a[idx(k + 1, k - 1)];
                    r = if k != nnu - 1 { a[idx(k + 2, k - 1)] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = sign((p * p + q * q + r * r).sqrt(), p);
                if s != 0.0 {
                    if k == m {
                        if l != m {
                            a[idx(k, k - 1)] = -a[idx(k, k - 1)];
                        }
                    } else {
                        a[idx(k, k - 1)] = -s * x;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    let z = r / s;
                    q /= p;
                    r /= p;
                    // Row transformation on columns k..=nn.
                    if k != nnu - 1 {
                        let (head, tail) = a.split_at_mut(idx(k + 1, 0));
                        let row_k = &mut head[idx(k, k)..idx(k, nnu + 1)];
                        let (mid, rest) = tail.split_at_mut(n);
                        let row_k1 = &mut mid[k..=nnu];
                        let row_k2 = &mut rest[k..=nnu];
                        for ((ak, ak1), ak2) in row_k.iter_mut().zip(row_k1.iter_mut()).zip(row_k2.iter_mut()) {
                            let pp = *ak + q * *ak1 + r * *ak2;
                            *ak2 -= pp * z;
                            *ak1 -= pp * y;
                            *ak -= pp * x;
                        }
                    } else {
                        let (head, tail) = a.split_at_mut(idx(k + 1, 0));
                        let row_k = &mut head[idx(k, k)..idx(k, nnu + 1)];
                        let row_k1 = &mut tail[k..=nnu];
                        for (ak, ak1) in row_k.iter_mut().zip(row_k1.iter_mut()) {
                            let pp = *ak + q * *ak1;
                            *ak1 -= pp * y;
                            *ak -= pp * x;
                        }
                    }
                    // Column transformation on rows l..=min(nn, k+3).
                    let mmin = nnu.min(k + 3);
                    for i in l..=mmin {
                        let base = idx(i, k);
                        let mut pp = x * a[base] + y * a[base + 1];
                        if k != nnu - 1 {
                            pp += z * a[base + 2];
                            a[base + 2] -= pp * r;
                        }
                        a[base + 1] -= pp * q;
                        a[base] -= pp;
                    }
                }
                k += 1;
            }
        }
    }
    Ok(out)
}

/// Givens rotation `G = [[c, s], [−conj(s), c]]` with `G·[a; b] = [r; 0]`.
#[inline]
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let na = a.norm();
    let nb = b.norm();
    if nb == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if na == 0.0 {
        return (0.0, b.conj() / nb);
    }
    let r = na.hypot(nb);
    (na / r, (a / na) * b.conj() / r)
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let l1 = mean + disc;
    let l2 = mean - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Implicit single-shift QR on a complex upper Hessenberg matrix.
fn complex_hessenberg_qr(a: &mut [Complex64], n: usize) -> Result<Vec<Complex64>> {
    let idx = |i: usize, j: usize| i * n + j;
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    let mut found: Vec<Complex64> = Vec::with_capacity(n);
    let anorm: f64 = a.iter().map(|z| z.abs1()).sum();

    let mut hi = n as isize - 1;
    let mut its = 0;
    while hi >= 0 {
        let h = hi as usize;
        let mut l = h;
        while l >= 1 {
            let mut s = a[idx(l - 1, l - 1)].abs1() + a[idx(l, l)].abs1();
            if s == 0.0 {
                s = anorm;
            }
            if a[idx(l, l - 1)].abs1() <= DEFLATION_TOLERANCE * s {
                a[idx(l, l - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == h {
            out[h] = a[idx(h, h)];
            found.push(out[h]);
            hi -= 1;
            its = 0;
            continue;
        }
        if its == ITERATIONS_PER_EIGENVALUE {
            return Err(budget_exhausted(&found, h + 1));
        }
        let shift = if its > 0 && its % 10 == 0 {
            let s = a[idx(h, h - 1)].re.abs() + if h >= 2 { a[idx(h - 1, h - 2)].re.abs() } else { 0.0 };
            a[idx(h, h)] + Complex64::new(0.75 * s, 0.0)
        } else {
            wilkinson_shift(a[idx(h - 1, h - 1)], a[idx(h - 1, h)], a[idx(h, h - 1)], a[idx(h, h)])
        };
        its += 1;

        // First rotation from the shifted leading column, then chase.
        let mut x = a[idx(l, l)] - shift;
        let mut y = a[idx(l + 1, l)];
        for k in l..h {
            let (c, s) = givens(x, y);
            let col0 = if k > l { k - 1 } else { l };
            // Rows k, k+1 on columns col0..=h.
            for j in col0..=h {
                let u = a[idx(k, j)];
                let v = a[idx(k + 1, j)];
                a[idx(k, j)] = u * c + s * v;
                a[idx(k + 1, j)] = v * c - s.conj() * u;
            }
            if k > l {
                a[idx(k + 1, k - 1)] = Complex64::new(0.0, 0.0);
            }
            // Columns k, k+1 on rows l..=min(k+2, h).
            let rmax = (k + 2).min(h);
            for i in l..=rmax {
                let u = a[idx(i, k)];
                let v = a[idx(i, k + 1)];
                a[idx(i, k)] = u * c + v * s.conj();
                a[idx(i, k + 1)] = v * c - u * s;
            }
            if k + 1 < h {
                x = a[idx(k + 1, k)];
                y = a[idx(k + 2, k)];
            }
        }
    }
    Ok(out)
}
