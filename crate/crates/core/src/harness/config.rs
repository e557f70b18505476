//! Strict JSON experiment configuration. Unknown keys anywhere are
//! rejected, and a parsed config re-serializes to an equal config.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ensembles::{BaseMatrixSpec, ProfileSpec, ScalarDistribution};
use crate::error::{Error, Result};
use crate::hermitization::{LatticeSpec, QuadratureSpec, DEFAULT_EPS_EXPONENT};
use crate::limits::{MeasureH, SolverOptions, DEFAULT_ETA_SCHEDULE};

pub const CONFIG_SCHEMA: &str = "esdlab.config/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Circular,
    Universality,
    Hermitize,
    DsSolve,
    Tails,
    Lemmas,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Experiment::Circular,
        Experiment::Universality,
        Experiment::Hermitize,
        Experiment::DsSolve,
        Experiment::Tails,
        Experiment::Lemmas,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Circular => "circular",
            Experiment::Universality => "universality",
            Experiment::Hermitize => "hermitize",
            Experiment::DsSolve => "ds-solve",
            Experiment::Tails => "tails",
            Experiment::Lemmas => "lemmas",
        }
    }

    /// Tunable thresholds and their defaults.
    pub fn default_thresholds(self) -> &'static [(&'static str, f64)] {
        match self {
            Experiment::Circular => &[
                ("radial_ks", 0.05),
                ("angular_ks", 0.05),
                ("ks_pass_fraction", 0.9),
                ("disk_radius", 1.05),
                ("in_disk_fraction", 0.99),
            ],
            Experiment::Universality => &[("bl_distance", 0.1)],
            Experiment::Hermitize => &[
                ("potential_gap", 0.05),
                ("regularization_gap", 0.02),
                ("pass_fraction", 0.9),
                ("eigen_route_gap", 1e-8),
                ("girko_error", 1e-3),
            ],
            Experiment::DsSolve => &[
                ("reference_error", 1e-8),
                ("density_error", 1e-2),
                ("mass_tolerance", 0.02),
                ("gram_ks", 0.05),
            ],
            Experiment::Tails => &[
                ("lsv_exponent", 10.0),
                ("lowersing_floor", 0.0),
                ("distance_constant", 0.5),
                ("mean_distance_tolerance", 0.05),
            ],
            Experiment::Lemmas => &[
                ("negative_second_moment", 1e-9),
                ("determinant_identity", 1e-6),
                ("inequality_slack", 1e-8),
                ("normal_equality", 1e-10),
            ],
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::config(format!("unknown experiment {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Shift,
    Sandwich,
    HadamardProfile,
}

/// Reference log-potential for the hermitization check.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceLaw {
    #[default]
    Circular,
    /// `½∫log x dν_z` with `ν_z` solved from the fixed-point equation.
    MpDerived,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Distributions {
    pub x: ScalarDistribution,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<ScalarDistribution>,
}

impl Default for Distributions {
    fn default() -> Self {
        Distributions {
            x: ScalarDistribution::Bernoulli,
            y: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SandwichSpec {
    pub k: BaseMatrixSpec,
    pub l: BaseMatrixSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DsSection {
    pub h: MeasureH,
    pub c: f64,
    /// Inclusive grid `x_min, …, x_max` with `points` points.
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
    pub eta_schedule: Vec<f64>,
    /// Grid points where the last two η levels must agree.
    pub check_window: [f64; 2],
    pub solver: SolverOptions,
    /// Assert the trapezoid mass of the recovered density.
    pub check_mass: bool,
}

impl Default for DsSection {
    fn default() -> Self {
        DsSection {
            h: MeasureH::dirac(0.0).expect("δ₀ is a valid H"),
            c: 1.0,
            x_min: 0.0,
            x_max: 4.0,
            points: 1601,
            eta_schedule: DEFAULT_ETA_SCHEDULE.to_vec(),
            check_window: [0.1, 3.9],
            solver: SolverOptions::default(),
            check_mass: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TailsSection {
    pub distance_n: usize,
    pub distance_d: usize,
    pub distance_trials: usize,
    pub talagrand_r: Vec<f64>,
}

impl Default for TailsSection {
    fn default() -> Self {
        TailsSection {
            distance_n: 2000,
            distance_d: 1000,
            distance_trials: 200,
            talagrand_r: vec![1.0, 2.0, 3.0, 4.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LemmasSection {
    pub cases: usize,
    pub max_size: usize,
}

impl Default for LemmasSection {
    fn default() -> Self {
        LemmasSection {
            cases: 500,
            max_size: 30,
        }
    }
}

fn default_n_list() -> Vec<usize> {
    vec![250, 500, 1000]
}

fn default_trials() -> usize {
    10
}

fn default_eps_exponent() -> f64 {
    DEFAULT_EPS_EXPONENT
}

fn default_true() -> bool {
    true
}

fn default_output_dir() -> String {
    "esdlab-out".to_string()
}

fn default_z_grid() -> Vec<Complex64> {
    vec![
        Complex64::new(0.0, 0.0),
        Complex64::new(0.5, 0.0),
        Complex64::new(0.5, 0.5),
        Complex64::new(2.0, 0.0),
    ]
}

/// One experiment run. Sections that do not apply to `experiment` are
/// ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema: String,
    pub experiment: Experiment,
    #[serde(default = "default_n_list")]
    pub n_list: Vec<usize>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default)]
    pub distributions: Distributions,
    #[serde(default = "zero_base")]
    pub base: BaseMatrixSpec,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sandwich: Option<SandwichSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<ProfileSpec>,
    /// Overrides the eigenvalue-cloud centre; by default it is `c` when
    /// `M = √n·c·I`, else 0.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Complex64>,
    #[serde(default = "default_z_grid")]
    pub z_grid: Vec<Complex64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeSpec>,
    #[serde(default)]
    pub uv: Vec<[f64; 2]>,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    #[serde(default)]
    pub reference: ReferenceLaw,
    #[serde(default = "default_eps_exponent")]
    pub eps_exponent: f64,
    #[serde(default)]
    pub ds: DsSection,
    #[serde(default)]
    pub tails: TailsSection,
    #[serde(default)]
    pub lemmas: LemmasSection,
    #[serde(default = "default_true")]
    pub figures: bool,
    #[serde(default = "default_output_dir")]
    pub output_dir: String,
    #[serde(default)]
    pub thresholds: BTreeMap<String, f64>,
}

fn zero_base() -> BaseMatrixSpec {
    BaseMatrixSpec::Zero
}

impl ExperimentConfig {
    /// A config with every default filled in.
    pub fn new(experiment: Experiment) -> Self {
        serde_json::from_value(serde_json::json!({
            "schema": CONFIG_SCHEMA,
            "experiment": experiment,
        }))
        .expect("defaults parse")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::config(format!("invalid configuration: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn threshold(&self, name: &str) -> f64 {
        if let Some(&v) = self.thresholds.get(name) {
            return v;
        }
        self.experiment
            .default_thresholds()
            .iter()
            .find(|(k, _)| *k == name)
            .map(|&(_, v)| v)
            .unwrap_or_else(|| panic!("no threshold named {name} for {}", self.experiment))
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != CONFIG_SCHEMA {
            return Err(Error::config(format!("schema must be {CONFIG_SCHEMA:?}, got {:?}", self.schema)));
        }
        let known = self.experiment.default_thresholds();
        for (k, v) in &self.thresholds {
            if !known.iter().any(|(name, _)| name == k) {
                let names: Vec<&str> = known.iter().map(|(n, _)| *n).collect();
                return Err(Error::config(format!(
                    "unknown threshold {k:?} for {}; expected one of {names:?}",
                    self.experiment
                )));
            }
            if !v.is_finite() {
                return Err(Error::config(format!("threshold {k} must be finite")));
            }
        }
        self.distributions.x.validate()?;
        if let Some(y) = &self.distributions.y {
            y.validate()?;
        }
        let needs_sizes = !matches!(self.experiment, Experiment::DsSolve | Experiment::Lemmas);
        if needs_sizes && (self.n_list.is_empty() || self.trials == 0) {
            return Err(Error::config("n_list and trials must be non-empty"));
        }
        if self.n_list.iter().any(|&n| n == 0 || n > u32::MAX as usize) {
            return Err(Error::config("every n in n_list must be in 1..2³²"));
        }
        if self.trials > u32::MAX as usize {
            return Err(Error::config("trials must be below 2³²"));
        }
        for &n in &self.n_list {
            self.base.validate(n)?;
            if let Some(s) = &self.sandwich {
                s.k.validate(n)?;
                s.l.validate(n)?;
            }
        }
        match self.mode {
            Mode::Sandwich if self.sandwich.is_none() => {
                return Err(Error::config("mode sandwich needs a \"sandwich\" section with k and l"))
            }
            Mode::HadamardProfile if self.profile.is_none() => {
                return Err(Error::config("mode hadamard_profile needs a \"profile\" section"))
            }
            _ => {}
        }
        if self.experiment == Experiment::Universality && self.distributions.y.is_none() {
            return Err(Error::config("universality needs distributions.y"));
        }
        if self.experiment == Experiment::Hermitize {
            if !(self.eps_exponent < 0.0) {
                return Err(Error::config("eps_exponent must be negative so ε_n decays"));
            }
            if self.z_grid.is_empty() && self.lattice.is_none() {
                return Err(Error::config("hermitize needs z_grid or lattice"));
            }
            if let Some(l) = &self.lattice {
                l.validate()?;
            }
            self.quadrature.validate()?;
            for &[u, v] in &self.uv {
                if u == 0.0 || !(v > 0.0) {
                    return Err(Error::config(format!("uv pair ({u}, {v}) needs u ≠ 0 and v > 0")));
                }
            }
        }
        if self.experiment == Experiment::DsSolve {
            let d = &self.ds;
            if d.points < 2 || !(d.x_max > d.x_min) || !(d.x_min >= 0.0) {
                return Err(Error::config("ds grid needs 0 ≤ x_min < x_max and at least 2 points"));
            }
        }
        if self.experiment == Experiment::Tails {
            let t = &self.tails;
            if t.distance_d >= t.distance_n || t.distance_trials == 0 {
                return Err(Error::config("tails needs distance_d < distance_n and distance_trials ≥ 1"));
            }
        }
        if self.experiment == Experiment::Lemmas && (self.lemmas.cases == 0 || self.lemmas.max_size < 2) {
            return Err(Error::config("lemmas needs cases ≥ 1 and max_size ≥ 2"));
        }
        Ok(())
    }
}
