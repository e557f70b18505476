//! Command-line front end: `esdlab <experiment> --config <file.json>`.
//!
//! Exit codes: 0 all assertions passed, 1 an assertion failed, 2
//! configuration or I/O error, 3 numerical failure.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use esdlab::harness::{self, Experiment, ExperimentConfig};
use esdlab::Error;

#[derive(Parser)]
#[command(name = "esdlab", version, about = "Spectral laboratory for non-Hermitian random matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalue clouds against the uniform law on the unit disk.
    Circular(RunArgs),
    /// ESD distances between two entry distributions.
    Universality(RunArgs),
    /// Log-determinant field against a reference log-potential.
    Hermitize(RunArgs),
    /// Fixed-point solve and Stieltjes inversion.
    DsSolve(RunArgs),
    /// Least singular values and distances to subspaces.
    Tails(RunArgs),
    /// Linear-algebra identity and inequality sweep.
    Lemmas(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON experiment configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output_dir` in the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Master seed; overrides `master_seed` in the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; the ESDLAB_THREADS environment variable wins.
    #[arg(long)]
    threads: Option<usize>,
}

impl Command {
    fn split(self) -> (Experiment, RunArgs) {
        match self {
            Command::Circular(a) => (Experiment::Circular, a),
            Command::Universality(a) => (Experiment::Universality, a),
            Command::Hermitize(a) => (Experiment::Hermitize, a),
            Command::DsSolve(a) => (Experiment::DsSolve, a),
            Command::Tails(a) => (Experiment::Tails, a),
            Command::Lemmas(a) => (Experiment::Lemmas, a),
        }
    }
}

fn thread_count(flag: Option<usize>) -> Result<Option<usize>, Error> {
    match std::env::var("ESDLAB_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&k| k > 0)
            .map(Some)
            .ok_or_else(|| Error::config(format!("ESDLAB_THREADS must be a positive integer, got {v:?}"))),
        Err(_) => match flag {
            Some(0) => Err(Error::config("--threads must be positive")),
            other => Ok(other),
        },
    }
}

fn main_inner(experiment: Experiment, args: RunArgs) -> Result<i32, Error> {
    if let Some(k) = thread_count(args.threads)? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| Error::config(format!("thread pool: {e}")))?;
    }
    let mut cfg = ExperimentConfig::from_path(&args.config)?;
    if cfg.experiment != experiment {
        return Err(Error::config(format!(
            "config is for {:?} but the command is {:?}",
            cfg.experiment.name(),
            experiment.name()
        )));
    }
    if let Some(seed) = args.seed {
        cfg.master_seed = seed;
    }
    if let Some(out) = &args.out {
        cfg.output_dir = out.to_string_lossy().into_owned();
    }
    let dir = PathBuf::from(&cfg.output_dir);
    let (output, manifest) = harness::run(&cfg, &dir)?;
    // A closed stdout (e.g. piped into `head`) must not turn a finished run
    // into a panic, so write errors are ignored.
    let mut stdout = std::io::stdout().lock();
    for a in &output.assertions {
        let _ = writeln!(
            stdout,
            "{} {} observed={} threshold={} ({})",
            if a.passed { "PASS" } else { "FAIL" },
            a.name,
            a.observed,
            a.threshold,
            a.detail
        );
    }
    for f in &output.failures {
        let _ = writeln!(stdout, "ERROR n={} trial={} seed={}: {}", f.n, f.trial, f.seed, f.error);
    }
    let _ = writeln!(stdout, "wrote {} artifacts to {}", manifest.artifacts.len() + 1, dir.display());
    Ok(output.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (experiment, args) = cli.command.split();
    let code = match main_inner(experiment, args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("esdlab: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
