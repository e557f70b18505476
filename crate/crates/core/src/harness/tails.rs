//! Least singular values, intermediate singular values, and distances from
//! random rows to a fixed subspace.

use num_complex::Complex64;

use super::{metric_values, run_trials, timed, trial_stream, Assertion, ExperimentConfig, Fixture};
use super::{RunOutput, TrialOutcome, TrialRecord};
use crate::ensembles::{sample_scalar, ScalarDistribution};
use crate::error::Result;
use crate::measures::normalized;
use crate::numerics::{singular_values, smallest_singular_value, OrthonormalBasis};
use crate::RngStream;

/// Stream index of the vectors spanning the fixed subspace `W`.
const SUBSPACE_STREAM: u64 = u64::MAX;

/// Stream index of distance sample `j`; the top bit keeps these apart from
/// matrix trials.
fn distance_stream(n: usize, j: usize) -> u64 {
    (1 << 63) | trial_stream(n, j)
}

/// The indices `i` at which `σ_{n−i}(A/√n)·n/i` is recorded.
fn lowersing_indices(n: usize) -> Vec<usize> {
    let mut v: Vec<usize> = [(n as f64).powf(0.99).floor() as usize, n / 10, n / 4]
        .into_iter()
        .filter(|&i| i >= 1 && i < n)
        .collect();
    v.sort_unstable();
    v.dedup();
    v
}

pub(crate) fn run(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let mut out = RunOutput::new(cfg.experiment);
    for &n in &cfg.n_list {
        let fx = Fixture::new(cfg, n)?;
        let indices = lowersing_indices(n);
        run_trials(
            &mut out,
            n,
            cfg.trials,
            |t| trial_stream(n, t),
            |t, seed| {
                let a = fx.draw(cfg, &cfg.distributions.x, seed)?;
                let (smin, lu_ms) = timed(|| smallest_singular_value(&a));
                let (s, svd_ms) = timed(|| singular_values(&normalized(&a)?));
                let s = s?.values;
                let mut record = TrialRecord::new(cfg.experiment, n, t, seed);
                record.push("sigma_min", smin?);
                for &i in &indices {
                    record.push(format!("lowersing[i={i}]"), s[n - i - 1] * n as f64 / i as f64);
                }
                Ok(TrialOutcome {
                    record,
                    timings: vec![("sigma_min".into(), lu_ms), ("singular_values".into(), svd_ms)],
                    extra: (),
                })
            },
        );
        let floor = (n as f64).powf(-cfg.threshold("lsv_exponent"));
        let smins = metric_values(&out, n, "sigma_min");
        let worst = if smins.len() == cfg.trials { smins.iter().copied().fold(f64::INFINITY, f64::min) } else { 0.0 };
        out.assertions.push(Assertion::at_least(
            format!("sigma_min[n={n}]"),
            worst,
            floor,
            format!("smallest σ_n(A) over {} trials against n^-{}", cfg.trials, cfg.threshold("lsv_exponent")),
        ));
        for &i in &indices {
            let ratios = metric_values(&out, n, &format!("lowersing[i={i}]"));
            let lowest = ratios.iter().copied().fold(f64::INFINITY, f64::min);
            let floor = cfg.threshold("lowersing_floor");
            out.assertions.push(Assertion {
                name: format!("lowersing[n={n},i={i}]"),
                passed: ratios.len() == cfg.trials && lowest > floor,
                observed: lowest,
                threshold: floor,
                detail: "smallest σ_{n−i}(A/√n)·n/i over trials; must exceed the floor".into(),
            });
        }
    }
    distance_experiment(cfg, &mut out)?;
    Ok(out)
}

/// Orthonormal basis of the span of `d` real Gaussian vectors in ℂⁿ.
fn random_subspace(master: u64, n: usize, d: usize) -> Result<OrthonormalBasis> {
    let mut rng = RngStream::new(master, SUBSPACE_STREAM);
    let mut basis = OrthonormalBasis::new();
    while basis.dim() < d {
        let v: Vec<Complex64> = (0..n)
            .map(|_| sample_scalar(&ScalarDistribution::RealGaussian, &mut rng))
            .collect::<Result<_>>()?;
        basis.push(&v);
    }
    Ok(basis)
}

fn distance_experiment(cfg: &ExperimentConfig, out: &mut RunOutput) -> Result<()> {
    let (n, d, count) = (cfg.tails.distance_n, cfg.tails.distance_d, cfg.tails.distance_trials);
    let (basis, ms) = timed(|| random_subspace(cfg.master_seed, n, d));
    let basis = basis?;
    out.timings.push(super::Timing {
        experiment: cfg.experiment,
        n,
        trial: 0,
        stage: "subspace".into(),
        ms,
    });
    let codim = (n - d) as f64;
    let before = out.records.len();
    run_trials(
        out,
        n,
        count,
        |j| distance_stream(n, j),
        |j, seed| {
            let row = row_vector(n, &cfg.distributions.x, &mut RngStream::new(cfg.master_seed, seed))?;
            let dist = basis.distance(&row);
            let mut record = TrialRecord::new(cfg.experiment, n, j, seed);
            record.push("distance", dist);
            record.push("distance_sq_ratio", dist * dist / codim);
            Ok(TrialOutcome {
                record,
                timings: Vec::new(),
                extra: (),
            })
        },
    );
    let dists: Vec<f64> = out.records[before..].iter().filter_map(|r| r.metric("distance")).collect();
    let complete = dists.len() == count;

    let c = cfg.threshold("distance_constant");
    let smallest = dists.iter().copied().fold(f64::INFINITY, f64::min);
    out.assertions.push(Assertion::at_least(
        format!("distance_ratio[n={n},d={d}]"),
        if complete { smallest / codim.sqrt() } else { 0.0 },
        c,
        "smallest dist(X, W)/√(n − d)",
    ));
    let mean_ratio = dists.iter().map(|x| x * x).sum::<f64>() / (dists.len() as f64 * codim);
    out.assertions.push(Assertion::at_most(
        format!("mean_distance_sq[n={n},d={d}]"),
        if complete { (mean_ratio - 1.0).abs() } else { f64::NAN },
        cfg.threshold("mean_distance_tolerance"),
        format!("|mean dist²/(n − d) − 1|; mean ratio {mean_ratio}"),
    ));

    // Concentration about the median, against 4·exp(−r²/8) at scale n^0.1.
    let med = super::median(&dists);
    let scale = (n as f64).powf(0.1);
    for &r in &cfg.tails.talagrand_r {
        let beyond = dists.iter().filter(|&&x| (x - med).abs() >= r * scale).count() as f64 / dists.len().max(1) as f64;
        let envelope = (4.0 * (-r * r / 8.0).exp()).min(1.0);
        out.assertions.push(Assertion::at_most(
            format!("talagrand[r={r}]"),
            beyond,
            envelope,
            format!("share of |dist − median| ≥ {r}·n^0.1 (median {med})"),
        ));
    }
    Ok(())
}

fn row_vector(n: usize, dist: &ScalarDistribution, rng: &mut RngStream) -> Result<Vec<Complex64>> {
    (0..n).map(|_| sample_scalar(dist, rng)).collect()
}
