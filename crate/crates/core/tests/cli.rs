use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_esdlab");

fn write_config(dir: &Path, json: &str) -> std::path::PathBuf {
    let p = dir.join("config.json");
    std::fs::write(&p, json).unwrap();
    p
}

fn esdlab(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.args(args).env_remove("ESDLAB_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

const SMALL_CIRCULAR: &str = r#"{
  "schema": "esdlab.config/1",
  "experiment": "circular",
  "n_list": [50],
  "trials": 2,
  "master_seed": 17,
  "distributions": {"x": {"kind": "bernoulli"}}
}"#;

fn run_to(dir: &Path, sub: &str, config: &Path, extra: &[&str], env: &[(&str, &str)]) -> Output {
    let mut args = vec![sub, "--config", config.to_str().unwrap(), "--out", dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    esdlab(&args, env)
}

fn read(dir: &Path, file: &str) -> Vec<u8> {
    std::fs::read(dir.join(file)).unwrap_or_else(|e| panic!("{file}: {e}"))
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL_CIRCULAR);
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let oa = run_to(&a, "circular", &cfg, &[], &[]);
    let ob = run_to(&b, "circular", &cfg, &[], &[]);
    assert!(matches!(code(&oa), 0 | 1), "{}", String::from_utf8_lossy(&oa.stderr));
    assert_eq!(code(&oa), code(&ob));
    for f in ["trials.csv", "assertions.csv", "scatter_n50.svg"] {
        assert_eq!(read(&a, f), read(&b, f), "{f} differs");
    }
    assert!(a.join("manifest.json").exists() && a.join("timings.csv").exists());
    let trials = String::from_utf8(read(&a, "trials.csv")).unwrap();
    // Long format: one row per (trial, metric).
    assert_eq!(trials.lines().count(), 1 + 2 * 4, "{trials}");
}

#[test]
fn thread_count_does_not_change_results() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL_CIRCULAR);
    let (a, b, c) = (tmp.path().join("a"), tmp.path().join("b"), tmp.path().join("c"));
    run_to(&a, "circular", &cfg, &["--threads", "1"], &[]);
    run_to(&b, "circular", &cfg, &["--threads", "3"], &[]);
    run_to(&c, "circular", &cfg, &[], &[("ESDLAB_THREADS", "2")]);
    for f in ["trials.csv", "assertions.csv"] {
        assert_eq!(read(&a, f), read(&b, f), "{f}");
        assert_eq!(read(&a, f), read(&c, f), "{f}");
    }
}

#[test]
fn seed_flag_overrides_the_config() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL_CIRCULAR);
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    run_to(&a, "circular", &cfg, &[], &[]);
    run_to(&b, "circular", &cfg, &["--seed", "18"], &[]);
    assert_ne!(read(&a, "trials.csv"), read(&b, "trials.csv"));
}

#[test]
fn passing_run_exits_zero_and_prints_pass_lines() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{"schema": "esdlab.config/1", "experiment": "lemmas", "lemmas": {"cases": 40, "max_size": 8}}"#,
    );
    let o = run_to(&tmp.path().join("out"), "lemmas", &cfg, &[], &[]);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert_eq!(code(&o), 0, "{stdout}");
    assert!(stdout.lines().any(|l| l.starts_with("PASS ")));
    assert!(!stdout.contains("FAIL "));
}

#[test]
fn failed_assertion_exits_one() {
    let tmp = tempfile::tempdir().unwrap();
    let json = SMALL_CIRCULAR.replace("\"trials\": 2,", "\"trials\": 2, \"thresholds\": {\"radial_ks\": 0.0},");
    let cfg = write_config(tmp.path(), &json);
    let o = run_to(&tmp.path().join("out"), "circular", &cfg, &[], &[]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL "));
}

#[test]
fn configuration_errors_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let cfg = write_config(tmp.path(), SMALL_CIRCULAR);
    // Subcommand and config disagree.
    assert_eq!(code(&run_to(&out, "lemmas", &cfg, &[], &[])), 2);
    // Bad thread settings.
    assert_eq!(code(&run_to(&out, "circular", &cfg, &["--threads", "0"], &[])), 2);
    assert_eq!(code(&run_to(&out, "circular", &cfg, &[], &[("ESDLAB_THREADS", "many")])), 2);
    // Missing file.
    let missing = tmp.path().join("nope.json");
    assert_eq!(code(&run_to(&out, "circular", &missing, &[], &[])), 2);
    // Unknown key, unknown threshold, bad distribution parameter.
    for bad in [
        SMALL_CIRCULAR.replace("\"trials\": 2,", "\"trials\": 2, \"colour\": 1,"),
        SMALL_CIRCULAR.replace("\"trials\": 2,", "\"trials\": 2, \"thresholds\": {\"bogus\": 1.0},"),
        SMALL_CIRCULAR.replace(r#"{"kind": "bernoulli"}"#, r#"{"kind": "pareto_symmetrized", "alpha": 2.0}"#),
    ] {
        let p = write_config(tmp.path(), &bad);
        let o = run_to(&out, "circular", &p, &[], &[]);
        assert_eq!(code(&o), 2, "{bad}\n{}", String::from_utf8_lossy(&o.stderr));
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("esdlab: "));
    }
}

#[test]
fn help_lists_every_experiment() {
    let o = esdlab(&["--help"], &[]);
    let text = String::from_utf8_lossy(&o.stdout);
    for sub in ["circular", "universality", "hermitize", "ds-solve", "tails", "lemmas"] {
        assert!(text.contains(sub), "{sub}");
    }
}
