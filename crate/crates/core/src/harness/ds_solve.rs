//! Fixed-point solve of the Dozier–Silverstein equation on a line above
//! the real axis, Stieltjes inversion, and comparison of the recovered law
//! with sampled Gram spectra.

use num_complex::Complex64;

use super::{metric_values, run_trials, timed, trial_stream, Assertion, DsRow, ExperimentConfig, Fixture};
use super::{RunOutput, TrialOutcome, TrialRecord};
use crate::error::Result;
use crate::limits::{invert_stieltjes_on, mp_density, mp_reference, DsProblem, StieltjesSolution};
use crate::measures::{esd_gram, ks_one_sample};

/// Window on which the recovered Marchenko–Pastur density is compared.
const MP_WINDOW: (f64, f64) = (0.1, 3.9);

/// Cumulative trapezoid of the recovered density, linearly interpolated;
/// 0 left of the grid and the total mass right of it.
fn recovered_cdf(sol: &StieltjesSolution) -> impl Fn(f64) -> f64 + '_ {
    let x = &sol.x_grid;
    let mut cum = vec![0.0; x.len()];
    for i in 1..x.len() {
        cum[i] = cum[i - 1] + 0.5 * (sol.density[i] + sol.density[i - 1]) * (x[i] - x[i - 1]);
    }
    move |t: f64| {
        if t <= x[0] {
            return 0.0;
        }
        let k = x.partition_point(|&v| v <= t);
        if k >= x.len() {
            return cum[x.len() - 1];
        }
        let w = (t - x[k - 1]) / (x[k] - x[k - 1]);
        cum[k - 1] + w * (cum[k] - cum[k - 1])
    }
}

pub(crate) fn run(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let mut out = RunOutput::new(cfg.experiment);
    let d = &cfg.ds;
    let problem = DsProblem::new(d.h.clone(), d.c, d.solver)?;
    let step = (d.x_max - d.x_min) / (d.points - 1) as f64;
    let grid: Vec<f64> = (0..d.points).map(|i| d.x_min + i as f64 * step).collect();
    let window = (d.check_window[0], d.check_window[1]);
    let (sol, solve_ms) = timed(|| invert_stieltjes_on(&problem, &grid, &d.eta_schedule, window));
    let sol = sol?;
    out.timings.push(super::Timing {
        experiment: cfg.experiment,
        n: 0,
        trial: 0,
        stage: "invert_stieltjes".into(),
        ms: solve_ms,
    });
    for (i, &x) in sol.x_grid.iter().enumerate() {
        out.ds.push(DsRow {
            x,
            eta: sol.eta,
            m: sol.m_values[i],
            density: sol.density[i],
        });
    }

    let mut summary = TrialRecord::new(cfg.experiment, 0, 0, 0);
    let min_density = sol.density.iter().copied().fold(f64::INFINITY, f64::min);
    summary.push("eta", sol.eta);
    summary.push("level_change", sol.level_change.unwrap_or(f64::NAN));
    summary.push("mass", sol.mass());
    summary.push("min_density", min_density);
    summary.push("multiple_fixed_points", sol.multiple_fixed_points.len() as f64);
    out.assertions.push(Assertion::at_least("min_density", min_density, 0.0, "recovered density is non-negative"));
    if d.check_mass {
        let tol = cfg.threshold("mass_tolerance");
        out.assertions.push(Assertion::at_most(
            "mass",
            (sol.mass() - 1.0).abs(),
            tol,
            format!("|trapezoid mass − 1| on [{}, {}]", d.x_min, d.x_max),
        ));
    }

    // H = δ₀ with c = 1 is the Marchenko–Pastur case, with a closed form.
    if d.c == 1.0 && d.h.atoms().iter().all(|&t| t == 0.0) {
        let mut sweep: f64 = 0.0;
        for k in 0..50 {
            let w = Complex64::new(0.05 + 0.1 * k as f64, 1e-3);
            sweep = sweep.max((problem.solve(w)?.m - mp_reference(w)).norm());
        }
        let density_error = sol
            .x_grid
            .iter()
            .zip(&sol.density)
            .filter(|(&x, _)| x >= MP_WINDOW.0 && x <= MP_WINDOW.1)
            .map(|(&x, &f)| (f - mp_density(x)).abs())
            .fold(0.0, f64::max);
        summary.push("reference_error", sweep);
        summary.push("density_error", density_error);
        out.assertions.push(Assertion::at_most(
            "reference_error",
            sweep,
            cfg.threshold("reference_error"),
            "solver against the quadratic root on 50 points at Im w = 1e-3",
        ));
        out.assertions.push(Assertion::at_most(
            "density_error",
            density_error,
            cfg.threshold("density_error"),
            format!("sup error against the closed-form density on [{}, {}]", MP_WINDOW.0, MP_WINDOW.1),
        ));
    }
    out.records.push(summary);

    // Sampled Gram spectra only match the limit of (1/n)(M + X)(M + X)* when c = 1.
    if d.c == 1.0 {
        let cdf = recovered_cdf(&sol);
        for &n in &cfg.n_list {
            let fx = Fixture::new(cfg, n)?;
            run_trials(
                &mut out,
                n,
                cfg.trials,
                |t| trial_stream(n, t),
                |t, seed| {
                    let a = fx.draw(cfg, &cfg.distributions.x, seed)?;
                    let (nu, ms) = timed(|| esd_gram(&a, Complex64::new(0.0, 0.0)));
                    let mut record = TrialRecord::new(cfg.experiment, n, t, seed);
                    record.push("gram_ks", ks_one_sample(&nu?, &cdf));
                    Ok(TrialOutcome {
                        record,
                        timings: vec![("singular_values".into(), ms)],
                        extra: (),
                    })
                },
            );
            let ks = metric_values(&out, n, "gram_ks");
            let worst = if ks.len() == cfg.trials { ks.iter().copied().fold(0.0, f64::max) } else { f64::NAN };
            out.assertions.push(Assertion::at_most(
                format!("gram_ks[n={n}]"),
                worst,
                cfg.threshold("gram_ks"),
                "KS distance of the Gram ESD at z = 0 to the recovered CDF",
            ));
        }
    }
    Ok(out)
}
