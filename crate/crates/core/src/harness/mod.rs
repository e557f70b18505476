//! Experiment configs, runners and their file outputs.
//!
//! Every trial draws from `RngStream::new(master_seed, stream)` with a
//! stream index fixed by `(n, trial)`, and results are gathered in
//! `(n, trial)` order, so a run is reproducible regardless of the thread
//! schedule.

mod circular;
mod config;
mod ds_solve;
mod hermitize;
mod lemmas;
mod output;
mod tails;
mod universality;

pub use config::{
    Distributions, DsSection, Experiment, ExperimentConfig, LemmasSection, Mode, ReferenceLaw, SandwichSpec,
    TailsSection, CONFIG_SCHEMA,
};
pub use output::{
    assertions_csv, ds_csv, field_csv, format_value, scatter_svg, timings_csv, trials_csv, write_outputs, Artifact,
    Assertion, DsRow, FieldRow, Figure, Manifest, RunOutput, Timing, TrialFailure, TrialRecord, MANIFEST_SCHEMA,
};

use std::path::Path;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::ensembles::{assemble, build_base_matrix, build_iid_matrix, Assembly, ScalarDistribution};
use crate::error::Result;
use crate::numerics::ComplexMatrix;
use crate::RngStream;

/// Runs the configured experiment in memory.
pub fn execute(config: &ExperimentConfig) -> Result<RunOutput> {
    config.validate()?;
    match config.experiment {
        Experiment::Circular => circular::run(config),
        Experiment::Universality => universality::run(config),
        Experiment::Hermitize => hermitize::run(config),
        Experiment::DsSolve => ds_solve::run(config),
        Experiment::Tails => tails::run(config),
        Experiment::Lemmas => lemmas::run(config),
    }
}

/// Runs the experiment and writes its artifacts and manifest into `dir`.
pub fn run(config: &ExperimentConfig, dir: &Path) -> Result<(RunOutput, Manifest)> {
    let output = execute(config)?;
    let manifest = write_outputs(&output, config, dir)?;
    Ok((output, manifest))
}

/// Stream index of trial `trial` at size `n`.
pub fn trial_stream(n: usize, trial: usize) -> u64 {
    ((n as u64) << 32) | trial as u64
}

/// Deterministic operands for one size: `M`, and `K`, `L` or `C` as the
/// mode requires.
pub(crate) struct Fixture {
    pub n: usize,
    m: ComplexMatrix,
    k: Option<ComplexMatrix>,
    l: Option<ComplexMatrix>,
    c: Option<ComplexMatrix>,
    pub center: Complex64,
}

impl Fixture {
    pub fn new(cfg: &ExperimentConfig, n: usize) -> Result<Self> {
        let m = build_base_matrix(&cfg.base, n)?;
        let (mut k, mut l, mut c) = (None, None, None);
        match cfg.mode {
            Mode::Shift => {}
            Mode::Sandwich => {
                let s = cfg.sandwich.as_ref().expect("validated");
                k = Some(build_base_matrix(&s.k, n)?);
                l = Some(build_base_matrix(&s.l, n)?);
            }
            Mode::HadamardProfile => {
                c = Some(cfg.profile.as_ref().expect("validated").build(n)?);
            }
        }
        let center = cfg.center.unwrap_or_else(|| scalar_center(&m));
        let fixture = Fixture { n, m, k, l, c, center };
        // Checks sizes, invertibility of K and L, and the profile bounds once.
        assemble(&fixture.m, &ComplexMatrix::zeros(n, n), fixture.mode())?;
        Ok(fixture)
    }

    fn mode(&self) -> Assembly<'_> {
        match (&self.k, &self.l, &self.c) {
            (Some(k), Some(l), _) => Assembly::Sandwich { k, l },
            (_, _, Some(c)) => Assembly::HadamardProfile { c },
            _ => Assembly::Shift,
        }
    }

    /// `M + X`, `M + KXL` or `M + C∘X`, without re-checking the operands.
    pub fn assemble(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        match self.mode() {
            Assembly::Shift => self.m.add(x),
            Assembly::Sandwich { k, l } => self.m.add(&k.matmul(x)?.matmul(l)?),
            Assembly::HadamardProfile { c } => self.m.add(&c.hadamard(x)?),
        }
    }

    /// Draws `X` from `dist` on `stream` and assembles.
    pub fn draw(&self, cfg: &ExperimentConfig, dist: &ScalarDistribution, stream: u64) -> Result<ComplexMatrix> {
        let x = build_iid_matrix(self.n, dist, &mut RngStream::new(cfg.master_seed, stream))?;
        self.assemble(&x)
    }
}

/// `c` when `M = √n·c·I`, else 0.
fn scalar_center(m: &ComplexMatrix) -> Complex64 {
    let n = m.rows();
    let d = m[(0, 0)];
    let scalar = (0..n).all(|i| (0..n).all(|j| m[(i, j)] == if i == j { d } else { Complex64::new(0.0, 0.0) }));
    if scalar {
        d / (n as f64).sqrt()
    } else {
        Complex64::new(0.0, 0.0)
    }
}

/// Result of one trial: its record, stage timings, and any extra payload.
pub(crate) struct TrialOutcome<T> {
    pub record: TrialRecord,
    pub timings: Vec<(String, f64)>,
    pub extra: T,
}

/// Runs `trial` for `0..count` in parallel and merges the outcomes into
/// `out` in trial order. Failed trials become [`TrialFailure`]s. Returns
/// the successful extras, indexed by trial.
pub(crate) fn run_trials<T: Send>(
    out: &mut RunOutput,
    n: usize,
    count: usize,
    stream: impl Fn(usize) -> u64 + Sync,
    trial: impl Fn(usize, u64) -> Result<TrialOutcome<T>> + Sync,
) -> Vec<Option<T>> {
    let results: Vec<Result<TrialOutcome<T>>> = (0..count).into_par_iter().map(|t| trial(t, stream(t))).collect();
    let mut extras = Vec::with_capacity(count);
    for (t, r) in results.into_iter().enumerate() {
        match r {
            Ok(o) => {
                for (stage, ms) in o.timings {
                    out.timings.push(Timing {
                        experiment: out.experiment,
                        n,
                        trial: t,
                        stage,
                        ms,
                    });
                }
                out.records.push(o.record);
                extras.push(Some(o.extra));
            }
            Err(e) => {
                out.failures.push(TrialFailure {
                    n,
                    trial: t,
                    seed: stream(t),
                    error: e.to_string(),
                });
                extras.push(None);
            }
        }
    }
    extras
}

/// Runs `f`, returning its value and elapsed milliseconds.
pub(crate) fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed().as_secs_f64() * 1e3)
}

/// Values of metric `name` over the records at size `n`, in trial order.
pub(crate) fn metric_values(out: &RunOutput, n: usize, name: &str) -> Vec<f64> {
    out.records.iter().filter(|r| r.n == n).filter_map(|r| r.metric(name)).collect()
}

/// Median of the finite values; NaN when there are none.
pub(crate) fn median(values: &[f64]) -> f64 {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| x.is_finite()).collect();
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

/// Label for a complex point in metric names, e.g. `0.5+0.5i`.
pub(crate) fn z_label(z: Complex64) -> String {
    format!("{}{:+}i", z.re + 0.0, z.im + 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_distinct_across_sizes_and_trials() {
        assert_ne!(trial_stream(100, 1), trial_stream(101, 1));
        assert_ne!(trial_stream(100, 1), trial_stream(100, 2));
        assert_eq!(trial_stream(1, 0), 1 << 32);
    }

    #[test]
    fn medians() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert!(median(&[f64::NAN]).is_nan());
        assert_eq!(median(&[f64::INFINITY, 1.0]), 1.0);
    }

    #[test]
    fn labels() {
        assert_eq!(z_label(Complex64::new(0.5, 0.5)), "0.5+0.5i");
        assert_eq!(z_label(Complex64::new(2.0, 0.0)), "2+0i");
        assert_eq!(z_label(Complex64::new(-0.0, -1.5)), "0-1.5i");
    }

    #[test]
    fn identity_shift_centres_at_one() {
        let mut cfg = ExperimentConfig::new(Experiment::Circular);
        cfg.base = crate::ensembles::BaseMatrixSpec::TwoBlockDiagonal {
            a: 1.0,
            b: 1.0,
            split: 0.5,
            scale: crate::ensembles::BaseScale::SqrtN,
        };
        assert_eq!(Fixture::new(&cfg, 16).unwrap().center, Complex64::new(1.0, 0.0));
        cfg.base = crate::ensembles::BaseMatrixSpec::Zero;
        assert_eq!(Fixture::new(&cfg, 16).unwrap().center, Complex64::new(0.0, 0.0));
    }
}
