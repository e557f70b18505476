//! Sweep of the exact linear-algebra identities and inequalities over
//! random square and rectangular matrices, plus hand-built normal and
//! nilpotent cases.

use num_complex::Complex64;

use super::{run_trials, Assertion, ExperimentConfig, RunOutput, TrialOutcome, TrialRecord};
use crate::ensembles::{build_iid_matrix, sample_scalar};
use crate::error::{Error, Result};
use crate::numerics::lemmas::{determinant_identity, negative_second_moment_residual};
use crate::numerics::{singular_values, verify_interlacing, verify_weyl, ComplexMatrix};
use crate::RngStream;

/// Circulant matrix with the given first row; circulants are normal.
fn circulant(row: &[Complex64]) -> ComplexMatrix {
    let n = row.len();
    ComplexMatrix::from_fn(n, n, |i, j| row[(j + n - i) % n])
}

/// `n×n` Jordan block with eigenvalue 0.
fn nilpotent(n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| Complex64::new(if j == i + 1 { 1.0 } else { 0.0 }, 0.0))
}

/// Skips cases where an identity's hypothesis (non-singular, full rank)
/// fails for the drawn matrix.
fn unless_degenerate(r: Result<f64>) -> Result<Option<f64>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::DegenerateInput(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Largest relative excess over all interlacing and Weyl inequalities.
fn inequality_violations(a: &ComplexMatrix) -> Result<(f64, f64)> {
    let n = a.rows();
    let top = singular_values(a)?.largest().max(f64::MIN_POSITIVE);
    let mut interlacing: f64 = 0.0;
    for k in 1..=3.min(n - 1) {
        interlacing = interlacing.max(verify_interlacing(a, k)?.worst_violation.max(0.0) / top);
    }
    let w = verify_weyl(a)?;
    let second = (-w.second_moment_gap).max(0.0) / w.hs_norm_sq.max(f64::MIN_POSITIVE);
    let products = w.products.worst_violation.max(0.0);
    Ok((interlacing, second.max(products)))
}

pub(crate) fn run(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let mut out = RunOutput::new(cfg.experiment);
    let cases = cfg.lemmas.cases;
    let span = cfg.lemmas.max_size - 1;
    let dist = &cfg.distributions.x;
    run_trials(
        &mut out,
        0,
        cases,
        |k| k as u64,
        |k, seed| {
            let n = 2 + k % span;
            let mut rng = RngStream::new(cfg.master_seed, seed);
            let a = build_iid_matrix(n, dist, &mut rng)?;
            let rows = 1 + (rng.next_u64() % n as u64) as usize;
            let data = (0..rows * n).map(|_| sample_scalar(dist, &mut rng)).collect::<Result<Vec<_>>>()?;
            let rect = ComplexMatrix::new(rows, n, data)?;

            let mut record = TrialRecord::new(cfg.experiment, n, k, seed);
            record.push("rows", rows as f64);
            let det = unless_degenerate(determinant_identity(&a).map(|d| d.max_relative_error))?;
            let nsm = unless_degenerate(negative_second_moment_residual(&rect))?;
            record.push("determinant_identity", det.unwrap_or(f64::NAN));
            record.push("negative_second_moment", nsm.unwrap_or(f64::NAN));
            let (interlacing, weyl) = inequality_violations(&a)?;
            record.push("interlacing_violation", interlacing);
            record.push("weyl_violation", weyl);
            Ok(TrialOutcome {
                record,
                timings: Vec::new(),
                extra: (),
            })
        },
    );

    // Hand-built cases: normal matrices make the second-moment inequality an
    // equality; nilpotent ones make it strict.
    let mut rng = RngStream::new(cfg.master_seed, cases as u64);
    let mut special = Vec::new();
    for n in [5, 12] {
        let row = (0..n)
            .map(|_| sample_scalar(&crate::ensembles::ScalarDistribution::ComplexGaussian, &mut rng))
            .collect::<Result<Vec<_>>>()?;
        special.push(("normal", circulant(&row)));
    }
    for n in [2, 3] {
        special.push(("nilpotent", nilpotent(n)));
    }
    let mut equality: f64 = 0.0;
    let mut strict = f64::INFINITY;
    for (j, (kind, a)) in special.into_iter().enumerate() {
        let w = verify_weyl(&a)?;
        let rel = w.second_moment_gap / w.hs_norm_sq;
        let mut record = TrialRecord::new(cfg.experiment, a.rows(), cases + j, cases as u64);
        record.push(format!("{kind}_second_moment_gap"), rel);
        out.records.push(record);
        if kind == "normal" {
            equality = equality.max(rel.abs());
        } else {
            strict = strict.min(rel);
        }
    }

    let worst = |name: &str| -> (f64, usize) {
        let vals: Vec<f64> = out.records.iter().filter_map(|r| r.metric(name)).collect();
        let skipped = vals.iter().filter(|v| v.is_nan()).count();
        (vals.iter().copied().filter(|v| !v.is_nan()).fold(0.0, f64::max), skipped)
    };
    let complete = out.failures.is_empty();
    for (name, limit) in [
        ("negative_second_moment", "negative_second_moment"),
        ("determinant_identity", "determinant_identity"),
        ("interlacing_violation", "inequality_slack"),
        ("weyl_violation", "inequality_slack"),
    ] {
        let (w, skipped) = worst(name);
        out.assertions.push(Assertion::at_most(
            name,
            if complete { w } else { f64::NAN },
            cfg.threshold(limit),
            format!("worst over {cases} cases; {skipped} skipped as singular or rank-deficient"),
        ));
    }
    out.assertions.push(Assertion::at_most(
        "normal_equality",
        equality,
        cfg.threshold("normal_equality"),
        "|‖A‖² − Σ|λ|²|/‖A‖² on circulant matrices",
    ));
    out.assertions.push(Assertion::at_least(
        "nilpotent_strictness",
        strict,
        0.5,
        "(‖A‖² − Σ|λ|²)/‖A‖² on Jordan blocks; exactly 1 in exact arithmetic",
    ));
    Ok(out)
}
