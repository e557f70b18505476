//! Residual checks for the classical inequalities and identities relating
//! eigenvalues, singular values and row distances.

use super::det::log_of_product;
use super::distances::{leave_one_out_distances, row_distances, RANK_TOLERANCE};
use super::eigen::eigenvalues;
use super::matrix::ComplexMatrix;
use super::svd::{log_abs_det_lu, singular_values};
use crate::error::{Error, Result};

/// Outcome of a family of inequality checks. `worst_violation` is the largest
/// amount by which any inequality failed (zero or negative means none did,
/// in which case it is the tightest margin, negated).
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub checked: usize,
    pub violations: usize,
    pub worst_violation: f64,
    pub slack: f64,
}

impl InequalityReport {
    fn new(slack: f64) -> Self {
        Self {
            checked: 0,
            violations: 0,
            worst_violation: f64::NEG_INFINITY,
            slack,
        }
    }

    /// Records `lhs ≤ rhs`.
    fn record_le(&mut self, lhs: f64, rhs: f64) {
        self.checked += 1;
        let excess = if lhs == rhs { 0.0 } else { lhs - rhs };
        if excess > self.worst_violation {
            self.worst_violation = excess;
        }
        if excess > self.slack {
            self.violations += 1;
        }
    }

    pub fn holds(&self) -> bool {
        self.violations == 0
    }

    /// Re-evaluates against a different slack.
    pub fn holds_within(&self, slack: f64) -> bool {
        self.worst_violation <= slack
    }
}

/// Checks `σ_i(A) ≥ σ_i(A') ≥ σ_{i+k}(A)` where `A'` keeps the first `n−k`
/// rows, with slack `1e-9·σ₁(A)`.
pub fn verify_interlacing(a: &ComplexMatrix, k: usize) -> Result<InequalityReport> {
    let n = a.rows();
    if !a.is_square() || k == 0 || k >= n {
        return Err(Error::config(format!("interlacing needs square A and 1 ≤ k < n (n = {n}, k = {k})")));
    }
    let full = singular_values(a)?.values;
    let sub = singular_values(&a.top_rows(n - k))?.values;
    let mut report = InequalityReport::new(1e-9 * full[0]);
    for i in 0..n - k {
        report.record_le(sub[i], full[i]);
        report.record_le(full[i + k], sub[i]);
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeylReport {
    /// `‖A‖₂² − Σ|λ_j|²`; non-negative up to rounding, zero for normal `A`.
    pub second_moment_gap: f64,
    pub hs_norm_sq: f64,
    /// Both product inequalities, on moduli and singular values divided by
    /// `σ₁`, with absolute slack `1e-8`. Every normalized product lies in
    /// `[0, 1]`, so a rank-deficient `A` (where the Gram route resolves the
    /// zero singular values only to about `√ε·σ₁`) cannot blow up the way a
    /// log comparison would.
    pub products: InequalityReport,
}

impl WeylReport {
    pub fn holds(&self) -> bool {
        self.second_moment_gap >= -1e-10 * self.hs_norm_sq.max(1.0) && self.products.holds()
    }
}

/// `Σ|λ|² ≤ Σσ² = ‖A‖₂²`, and with `|λ_1| ≤ … ≤ |λ_n|`, `σ_1 ≥ … ≥ σ_n`:
/// `Π_{j≤J}|λ_j| ≤ Π_{j≤J}σ_j` and `Π_{j≥J}σ_j ≤ Π_{j≥J}|λ_j|` for all `J`.
pub fn verify_weyl(a: &ComplexMatrix) -> Result<WeylReport> {
    if !a.is_square() {
        return Err(Error::config("verify_weyl needs a square matrix"));
    }
    let n = a.rows();
    let lam = eigenvalues(a)?.moduli_ascending();
    let sig = singular_values(a)?.values;
    let hs_sq = a.hs_norm().powi(2);
    let eig_sq: f64 = lam.iter().map(|x| x * x).sum();

    let mut products = InequalityReport::new(1e-8);
    let top = if sig[0] > 0.0 { sig[0] } else { 1.0 };
    let (mut head_l, mut head_s) = (1.0, 1.0);
    for j in 0..n {
        head_l *= lam[j] / top;
        head_s *= sig[j] / top;
        products.record_le(head_l, head_s);
    }
    let (mut tail_l, mut tail_s) = (1.0, 1.0);
    for j in (0..n).rev() {
        tail_l *= lam[j] / top;
        tail_s *= sig[j] / top;
        products.record_le(tail_s, tail_l);
    }
    Ok(WeylReport {
        second_moment_gap: hs_sq - eig_sq,
        hs_norm_sq: hs_sq,
        products,
    })
}

/// Pairwise relative disagreement among `|det A|`, `Π|λ|`, `Πσ`, `Πd`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeterminantIdentity {
    pub log_det_lu: f64,
    pub log_eigen: f64,
    pub log_singular: f64,
    pub log_distances: f64,
    /// max over pairs of `|exp(Δlog) − 1|`.
    pub max_relative_error: f64,
}

/// Compares the four routes to `|det A|`. A numerically singular `A`
/// (`σ_min ≤ RANK_TOLERANCE·σ₁`) is a degenerate input: every route then
/// returns rounding noise.
pub fn determinant_identity(a: &ComplexMatrix) -> Result<DeterminantIdentity> {
    let lu = log_abs_det_lu(a).ok_or_else(|| Error::DegenerateInput("singular matrix".into()))?;
    let sig = singular_values(a)?;
    if !(sig.smallest() > RANK_TOLERANCE * sig.largest()) {
        return Err(Error::DegenerateInput(format!(
            "numerically singular: σ_min = {:e}, σ_max = {:e}",
            sig.smallest(),
            sig.largest()
        )));
    }
    let eig: Vec<f64> = eigenvalues(a)?.values.iter().map(|z| z.norm()).collect();
    let logs = [
        lu,
        log_of_product(&eig).finite().unwrap_or(f64::NEG_INFINITY),
        log_of_product(&sig.values).finite().unwrap_or(f64::NEG_INFINITY),
        log_of_product(&row_distances(a)?).finite().unwrap_or(f64::NEG_INFINITY),
    ];
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in i + 1..4 {
            let rel = ((logs[i] - logs[j]).exp() - 1.0).abs();
            worst = worst.max(if rel.is_nan() { f64::INFINITY } else { rel });
        }
    }
    Ok(DeterminantIdentity {
        log_det_lu: logs[0],
        log_eigen: logs[1],
        log_singular: logs[2],
        log_distances: logs[3],
        max_relative_error: worst,
    })
}

/// Relative residual of `Σσ_j⁻² = Σ dist(X_j, W_j)⁻²`.
pub fn negative_second_moment_residual(a: &ComplexMatrix) -> Result<f64> {
    let d = leave_one_out_distances(a)?;
    let s = singular_values(a)?.values;
    let lhs: f64 = s.iter().map(|x| x.powi(-2)).sum();
    let rhs: f64 = d.iter().map(|x| x.powi(-2)).sum();
    Ok((lhs - rhs).abs() / lhs.abs().max(rhs.abs()))
}
