//! In-memory run results and their serialization: CSV tables, SVG scatter
//! plots and the manifest.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::config::{Experiment, ExperimentConfig};
use crate::error::{Error, Result};
use crate::numerics::LogDet;

pub const MANIFEST_SCHEMA: &str = "esdlab.manifest/1";

/// Named scalar results of one trial. `seed` is the stream index the trial
/// drew from, under the run's master seed.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub experiment: Experiment,
    pub n: usize,
    pub trial: usize,
    pub seed: u64,
    pub metrics: Vec<(String, f64)>,
}

impl TrialRecord {
    pub fn new(experiment: Experiment, n: usize, trial: usize, seed: u64) -> Self {
        TrialRecord {
            experiment,
            n,
            trial,
            seed,
            metrics: Vec::new(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, value: f64) {
        self.metrics.push((name.into(), value));
    }

    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics.iter().find(|(k, _)| k == name).map(|&(_, v)| v)
    }
}

/// Wall-clock time of one stage of one trial. Kept apart from the trial
/// records so that those stay reproducible byte for byte.
#[derive(Debug, Clone, PartialEq)]
pub struct Timing {
    pub experiment: Experiment,
    pub n: usize,
    pub trial: usize,
    pub stage: String,
    pub ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub observed: f64,
    pub threshold: f64,
    pub detail: String,
}

impl Assertion {
    pub fn at_most(name: impl Into<String>, observed: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Assertion {
            name: name.into(),
            passed: observed <= threshold,
            observed,
            threshold,
            detail: detail.into(),
        }
    }

    pub fn at_least(name: impl Into<String>, observed: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Assertion {
            name: name.into(),
            passed: observed >= threshold,
            observed,
            threshold,
            detail: detail.into(),
        }
    }
}

/// A trial whose kernel failed; the batch carries on without it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialFailure {
    pub n: usize,
    pub trial: usize,
    pub seed: u64,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldRow {
    pub z: Complex64,
    pub f_n: LogDet,
    pub f_reg: f64,
    pub reference: f64,
    /// `|f_n − reference|`; infinite when `f_n` is.
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DsRow {
    pub x: f64,
    pub eta: f64,
    pub m: Complex64,
    pub density: f64,
}

/// Eigenvalue cloud with the unit circle drawn around `center`.
#[derive(Debug, Clone, PartialEq)]
pub struct Figure {
    pub name: String,
    pub atoms: Vec<Complex64>,
    pub center: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub experiment: Experiment,
    pub records: Vec<TrialRecord>,
    pub timings: Vec<Timing>,
    pub assertions: Vec<Assertion>,
    pub failures: Vec<TrialFailure>,
    pub field: Vec<FieldRow>,
    pub ds: Vec<DsRow>,
    pub figures: Vec<Figure>,
}

impl RunOutput {
    pub fn new(experiment: Experiment) -> Self {
        RunOutput {
            experiment,
            records: Vec::new(),
            timings: Vec::new(),
            assertions: Vec::new(),
            failures: Vec::new(),
            field: Vec::new(),
            ds: Vec::new(),
            figures: Vec::new(),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failures.is_empty() && self.assertions.iter().all(|a| a.passed)
    }

    /// 0 when everything passed, 3 when any trial hit a numerical failure,
    /// else 1.
    pub fn exit_code(&self) -> i32 {
        if !self.failures.is_empty() {
            3
        } else if self.assertions.iter().all(|a| a.passed) {
            0
        } else {
            1
        }
    }
}

/// 17 significant digits; non-finite values print as `inf`, `-inf`, `NaN`.
pub fn format_value(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_text(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn trials_csv(records: &[TrialRecord]) -> String {
    let mut out = String::from("experiment,n,trial,seed,metric,value\n");
    for r in records {
        for (name, value) in &r.metrics {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.experiment,
                r.n,
                r.trial,
                r.seed,
                csv_text(name),
                format_value(*value)
            );
        }
    }
    out
}

pub fn timings_csv(timings: &[Timing]) -> String {
    let mut out = String::from("experiment,n,trial,stage,ms\n");
    for t in timings {
        let _ = writeln!(out, "{},{},{},{},{:.3}", t.experiment, t.n, t.trial, csv_text(&t.stage), t.ms);
    }
    out
}

pub fn field_csv(rows: &[FieldRow]) -> String {
    let mut out = String::from("re_z,im_z,f_n,f_reg,reference,gap\n");
    for r in rows {
        let f_n = r.f_n.finite().unwrap_or(f64::NEG_INFINITY);
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            format_value(r.z.re),
            format_value(r.z.im),
            format_value(f_n),
            format_value(r.f_reg),
            format_value(r.reference),
            format_value(r.gap)
        );
    }
    out
}

pub fn ds_csv(rows: &[DsRow]) -> String {
    let mut out = String::from("x,eta,re_m,im_m,density\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            format_value(r.x),
            format_value(r.eta),
            format_value(r.m.re),
            format_value(r.m.im),
            format_value(r.density)
        );
    }
    out
}

pub fn assertions_csv(assertions: &[Assertion]) -> String {
    let mut out = String::from("assertion,passed,observed,threshold\n");
    for a in assertions {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            csv_text(&a.name),
            a.passed,
            format_value(a.observed),
            format_value(a.threshold)
        );
    }
    out
}

/// Static SVG on the square `[−2.5, 2.5]²` at 100 px per unit: one 1 px
/// dot per atom, both axes, and the unit circle around `center`. The
/// imaginary axis points up.
pub fn scatter_svg(atoms: &[Complex64], center: Complex64) -> String {
    // Adding 0.0 turns −0 into +0 so the origin prints without a sign.
    let x = |v: f64| v + 0.0;
    let y = |v: f64| -v + 0.0;
    let mut out = String::new();
    out.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"500\" height=\"500\" viewBox=\"-2.5 -2.5 5 5\">\n",
    );
    out.push_str("<rect x=\"-2.5\" y=\"-2.5\" width=\"5\" height=\"5\" fill=\"white\"/>\n");
    out.push_str("<g stroke=\"#888\" stroke-width=\"0.01\">\n");
    out.push_str("<line x1=\"-2.5\" y1=\"0\" x2=\"2.5\" y2=\"0\"/>\n");
    out.push_str("<line x1=\"0\" y1=\"-2.5\" x2=\"0\" y2=\"2.5\"/>\n");
    out.push_str("</g>\n");
    out.push_str("<g fill=\"black\">\n");
    for z in atoms {
        let _ = writeln!(out, "<circle cx=\"{:.5}\" cy=\"{:.5}\" r=\"0.01\"/>", x(z.re), y(z.im));
    }
    out.push_str("</g>\n");
    let _ = writeln!(
        out,
        "<circle cx=\"{:.5}\" cy=\"{:.5}\" r=\"1\" fill=\"none\" stroke=\"red\" stroke-width=\"0.01\"/>",
        x(center.re),
        y(center.im)
    );
    out.push_str("</svg>\n");
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Artifact {
    pub file: String,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub schema: &'static str,
    pub version: &'static str,
    pub experiment: Experiment,
    pub passed: bool,
    pub exit_code: i32,
    pub config: ExperimentConfig,
    pub artifacts: Vec<Artifact>,
    pub assertions: Vec<Assertion>,
    pub failures: Vec<TrialFailure>,
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<Artifact> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
    let digest = Sha256::digest(contents.as_bytes());
    Ok(Artifact {
        file: name.to_string(),
        bytes: contents.len(),
        sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
    })
}

/// Writes every artifact of `output` into `dir` (created if missing), then
/// `manifest.json` listing them with their hashes.
pub fn write_outputs(output: &RunOutput, config: &ExperimentConfig, dir: &Path) -> Result<Manifest> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut artifacts = vec![
        write_file(dir, "trials.csv", &trials_csv(&output.records))?,
        write_file(dir, "assertions.csv", &assertions_csv(&output.assertions))?,
        write_file(dir, "timings.csv", &timings_csv(&output.timings))?,
    ];
    if output.experiment == Experiment::Hermitize {
        artifacts.push(write_file(dir, "field.csv", &field_csv(&output.field))?);
    }
    if output.experiment == Experiment::DsSolve {
        artifacts.push(write_file(dir, "ds.csv", &ds_csv(&output.ds))?);
    }
    for fig in &output.figures {
        artifacts.push(write_file(dir, &format!("{}.svg", fig.name), &scatter_svg(&fig.atoms, fig.center))?);
    }
    let manifest = Manifest {
        schema: MANIFEST_SCHEMA,
        version: env!("CARGO_PKG_VERSION"),
        experiment: output.experiment,
        passed: output.all_passed(),
        exit_code: output.exit_code(),
        config: config.clone(),
        artifacts,
        assertions: output.assertions.clone(),
        failures: output.failures.clone(),
    };
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    let path: PathBuf = dir.join("manifest.json");
    fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    Ok(manifest)
}
