//! Eigenvalue clouds of `(M + X)/√n` against the uniform law on the unit
//! disk around the configured centre.

use super::{run_trials, timed, trial_stream, Assertion, ExperimentConfig, Figure, Fixture, RunOutput, TrialOutcome};
use super::{metric_values, TrialRecord};
use crate::error::Result;
use crate::limits::disk_radial_cdf;
use crate::measures::{esd_eigen, radial_angular_ks};

pub(crate) fn run(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let mut out = RunOutput::new(cfg.experiment);
    let radius = cfg.threshold("disk_radius");
    for &n in &cfg.n_list {
        let fx = Fixture::new(cfg, n)?;
        let clouds = run_trials(
            &mut out,
            n,
            cfg.trials,
            |t| trial_stream(n, t),
            |t, seed| {
                let (a, draw_ms) = timed(|| fx.draw(cfg, &cfg.distributions.x, seed));
                let (mu, eig_ms) = timed(|| esd_eigen(&a?));
                let mu = mu?;
                let (radial, angular) = radial_angular_ks(&mu, disk_radial_cdf, fx.center);
                let inside = mu.atoms().iter().filter(|&&z| (z - fx.center).norm() <= radius).count();
                let mut record = TrialRecord::new(cfg.experiment, n, t, seed);
                record.push("radial_ks", radial);
                record.push("angular_ks", angular);
                record.push("in_disk_fraction", inside as f64 / n as f64);
                record.push("second_moment", mu.second_moment());
                let keep = cfg.figures && t == 0;
                Ok(TrialOutcome {
                    record,
                    timings: vec![("draw".into(), draw_ms), ("eigenvalues".into(), eig_ms)],
                    extra: keep.then(|| mu.atoms().to_vec()),
                })
            },
        );
        if let Some(Some(Some(atoms))) = clouds.into_iter().next() {
            out.figures.push(Figure {
                name: format!("scatter_n{n}"),
                atoms,
                center: fx.center,
            });
        }

        let need = cfg.threshold("ks_pass_fraction");
        for name in ["radial_ks", "angular_ks"] {
            let limit = cfg.threshold(name);
            let passing = metric_values(&out, n, name).iter().filter(|&&v| v < limit).count();
            out.assertions.push(Assertion::at_least(
                format!("{name}[n={n}]"),
                passing as f64 / cfg.trials as f64,
                need,
                format!("share of trials with {name} < {limit}"),
            ));
        }
        let disk = metric_values(&out, n, "in_disk_fraction");
        let worst = if disk.len() == cfg.trials { disk.iter().copied().fold(1.0, f64::min) } else { 0.0 };
        out.assertions.push(Assertion::at_least(
            format!("in_disk_fraction[n={n}]"),
            worst,
            cfg.threshold("in_disk_fraction"),
            format!("smallest share of eigenvalues within {radius} of {}", fx.center),
        ));
    }
    Ok(out)
}
