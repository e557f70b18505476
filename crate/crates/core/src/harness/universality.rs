//! Distances between the ESDs of the same ensemble driven by two entry
//! distributions. Both matrices of a pair draw from the same stream.

use super::{median, metric_values, run_trials, timed, trial_stream, Assertion, ExperimentConfig, Fixture};
use super::{RunOutput, TrialOutcome, TrialRecord};
use crate::error::Result;
use crate::measures::{bl_distance, dilation_esd, esd_eigen, ks_two_sample, TestFunctionDictionary};

pub(crate) fn run(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let mut out = RunOutput::new(cfg.experiment);
    let dict = TestFunctionDictionary::standard();
    let y = cfg.distributions.y.as_ref().expect("validated");
    let mut medians = Vec::new();
    for &n in &cfg.n_list {
        let fx = Fixture::new(cfg, n)?;
        run_trials(
            &mut out,
            n,
            cfg.trials,
            |t| trial_stream(n, t),
            |t, seed| {
                let a = fx.draw(cfg, &cfg.distributions.x, seed)?;
                let b = fx.draw(cfg, y, seed)?;
                let (spectra, eig_ms) = timed(|| -> Result<_> { Ok((esd_eigen(&a)?, esd_eigen(&b)?)) });
                let (mu_a, mu_b) = spectra?;
                let (dil, svd_ms) = timed(|| -> Result<_> { Ok((dilation_esd(&a)?, dilation_esd(&b)?)) });
                let (dil_a, dil_b) = dil?;
                let mut record = TrialRecord::new(cfg.experiment, n, t, seed);
                record.push("bl_distance", bl_distance(&mu_a, &mu_b, &dict));
                record.push("dilation_ks", ks_two_sample(&dil_a, &dil_b));
                Ok(TrialOutcome {
                    record,
                    timings: vec![("eigenvalues".into(), eig_ms), ("singular_values".into(), svd_ms)],
                    extra: (),
                })
            },
        );
        let bl = metric_values(&out, n, "bl_distance");
        let m = if bl.len() == cfg.trials { median(&bl) } else { f64::NAN };
        medians.push((n, m));
        out.assertions.push(Assertion {
            name: format!("median_dilation_ks[n={n}]"),
            passed: true,
            observed: median(&metric_values(&out, n, "dilation_ks")),
            threshold: f64::NAN,
            detail: "reported only".into(),
        });
    }
    let mut sorted = medians.clone();
    sorted.sort_by_key(|&(n, _)| n);
    let rises = sorted.windows(2).filter(|w| !(w[1].1 < w[0].1)).count();
    if sorted.len() > 1 {
        out.assertions.push(Assertion::at_most(
            "median_bl_decreasing",
            rises as f64,
            0.0,
            format!("medians by n: {sorted:?}"),
        ));
    }
    let &(n_max, last) = sorted.last().expect("n_list is non-empty");
    out.assertions.push(Assertion::at_most(
        format!("median_bl_distance[n={n_max}]"),
        last,
        cfg.threshold("bl_distance"),
        "median over trial pairs at the largest n",
    ));
    Ok(out)
}
