//! Hermitization triangle per shift `z`: the eigenvalue log-potential of
//! the ESD, `f_n(z)` from singular values, its regularized version, and a
//! reference log-potential.

use num_complex::Complex64;

use super::{metric_values, run_trials, timed, trial_stream, z_label, Assertion, ExperimentConfig, FieldRow, Fixture};
use super::{ReferenceLaw, RunOutput, TrialOutcome, TrialRecord};
use crate::error::Result;
use crate::hermitization::girko_reconstruct;
use crate::limits::{circular_log_potential, ds_log_potential};
use crate::measures::{esd_eigen, normalized};
use crate::numerics::det::log_of_product;
use crate::numerics::{squared_singular_values, LogDet};

/// Midpoints and height for the singular-value-route reference.
const MP_POINTS: usize = 20_000;
const MP_ETA: f64 = 1e-7;

pub(crate) fn run(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let mut out = RunOutput::new(cfg.experiment);
    let mut zs = cfg.z_grid.clone();
    if let Some(l) = &cfg.lattice {
        zs.extend(l.points());
    }
    let reference: Vec<f64> = zs
        .iter()
        .map(|&z| match cfg.reference {
            ReferenceLaw::Circular => Ok(circular_log_potential(z)),
            ReferenceLaw::MpDerived => ds_log_potential(z, MP_POINTS, MP_ETA),
        })
        .collect::<Result<_>>()?;

    let last_n = *cfg.n_list.last().expect("n_list is non-empty");
    for &n in &cfg.n_list {
        let fx = Fixture::new(cfg, n)?;
        let eps = (n as f64).powf(cfg.eps_exponent);
        let fields = run_trials(
            &mut out,
            n,
            cfg.trials,
            |t| trial_stream(n, t),
            |t, seed| {
                let a = fx.draw(cfg, &cfg.distributions.x, seed)?;
                let b = normalized(&a)?;
                let (mu, eig_ms) = timed(|| esd_eigen(&a));
                let mu = mu?;
                let mut record = TrialRecord::new(cfg.experiment, n, t, seed);
                let mut rows = Vec::with_capacity(zs.len());
                let mut svd_ms = 0.0;
                for (&z, &refv) in zs.iter().zip(&reference) {
                    let (sq, ms) = timed(|| squared_singular_values(&b.shifted(z)));
                    svd_ms += ms;
                    let sq = sq?;
                    let s: Vec<f64> = sq.iter().map(|x| x.sqrt()).collect();
                    let f_n = log_of_product(&s).map(|x| x / n as f64);
                    let f_reg = sq.iter().map(|&x| (x + eps).ln()).sum::<f64>() / (2 * n) as f64;
                    let label = z_label(z);
                    let (value, gap) = match f_n {
                        LogDet::Finite(v) => (v, (v - refv).abs()),
                        LogDet::MinusInfinity => (f64::NEG_INFINITY, f64::INFINITY),
                    };
                    // Exact zero of det(A/√n − z) also puts an eigenvalue on z.
                    let eigen_route = mu.log_potential(z).unwrap_or(f64::NEG_INFINITY);
                    record.push(format!("f_n@{label}"), value);
                    record.push(format!("f_reg@{label}"), f_reg);
                    record.push(format!("reference@{label}"), refv);
                    record.push(format!("gap@{label}"), gap);
                    record.push(format!("reg_gap@{label}"), (f_reg - value).abs());
                    record.push(format!("eigen_gap@{label}"), (eigen_route - value).abs());
                    rows.push(FieldRow {
                        z,
                        f_n,
                        f_reg,
                        reference: refv,
                        gap,
                    });
                }
                for &[u, v] in &cfg.uv {
                    let g = girko_reconstruct(&mu, u, v, &cfg.quadrature)?;
                    record.push(format!("girko_error@({u},{v})"), (g - mu.characteristic_function(u, v)).norm());
                }
                Ok(TrialOutcome {
                    record,
                    timings: vec![("eigenvalues".into(), eig_ms), ("singular_values".into(), svd_ms)],
                    extra: rows,
                })
            },
        );
        if n == last_n {
            if let Some(Some(rows)) = fields.into_iter().next() {
                out.field = rows;
            }
        }
        push_assertions(cfg, &mut out, n, &zs);
    }
    Ok(out)
}

fn push_assertions(cfg: &ExperimentConfig, out: &mut RunOutput, n: usize, zs: &[Complex64]) {
    let need = cfg.threshold("pass_fraction");
    for &z in zs {
        let label = z_label(z);
        // Singular shifts are skipped from every aggregate.
        let finite: Vec<usize> = metric_values(out, n, &format!("f_n@{label}"))
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_finite())
            .map(|(i, _)| i)
            .collect();
        let skipped = cfg.trials - finite.len();
        for (metric, limit_name) in [("gap", "potential_gap"), ("reg_gap", "regularization_gap")] {
            let limit = cfg.threshold(limit_name);
            let values = metric_values(out, n, &format!("{metric}@{label}"));
            let passing = finite.iter().filter(|&&i| values[i] < limit).count();
            let share = if finite.is_empty() { 0.0 } else { passing as f64 / (cfg.trials - skipped) as f64 };
            out.assertions.push(Assertion::at_least(
                format!("{metric}@{label}[n={n}]"),
                share,
                need,
                format!("share of trials with {metric} < {limit}; {skipped} singular or failed trials skipped"),
            ));
        }
        let eig = metric_values(out, n, &format!("eigen_gap@{label}"));
        let worst = finite.iter().map(|&i| eig[i]).fold(0.0, f64::max);
        out.assertions.push(Assertion::at_most(
            format!("eigen_gap@{label}[n={n}]"),
            worst,
            cfg.threshold("eigen_route_gap"),
            "eigenvalue log-potential against f_n",
        ));
    }
    for &[u, v] in &cfg.uv {
        let name = format!("girko_error@({u},{v})");
        let errs = metric_values(out, n, &name);
        let worst = if errs.len() == cfg.trials { errs.iter().copied().fold(0.0, f64::max) } else { f64::NAN };
        out.assertions.push(Assertion::at_most(
            format!("{name}[n={n}]"),
            worst,
            cfg.threshold("girko_error"),
            "Girko reconstruction against the characteristic function",
        ));
    }
}
