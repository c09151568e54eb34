use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use eprsim_cli::ExperimentReport;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_eprsim"))
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_config(name: &str, dir: &Path, extra: &[&str]) -> Output {
    let cfg = config(name);
    let mut args = vec!["run", cfg.to_str().unwrap(), "--out-dir", dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

#[test]
fn json_report_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_config("paper-figure1.cfg", dir.path(), &["--trials", "20000"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("paper-figure1.json")).unwrap();
    let report: ExperimentReport = serde_json::from_str(&text).unwrap();
    let again: ExperimentReport = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(report, again);
    assert_eq!(report.summary(), again.summary());
    assert_eq!(report.to_json(), text);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with(&report.summary()));
}

#[test]
fn csv_and_json_carry_the_same_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_config("eight-partition.cfg", dir.path(), &["--trials", "5000"]);
    assert_eq!(out.status.code(), Some(0));
    let report: ExperimentReport =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("eight-partition.json")).unwrap()).unwrap();
    let csv = std::fs::read_to_string(dir.path().join("eight-partition.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("scenario_id,theta_ab_deg,theta_bob_deg,e_mc,e_stderr,e_exact,n")
    );
    for (line, s) in lines.zip(&report.scenarios) {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f[0].parse::<u32>().unwrap(), s.scenario_id);
        assert_eq!(f[1].parse::<f64>().unwrap(), s.theta_ab_deg);
        assert_eq!(f[2].parse::<f64>().unwrap(), s.theta_bob_deg);
        assert_eq!(f[3].parse::<f64>().unwrap(), s.e_mc);
        assert_eq!(f[4].parse::<f64>().unwrap(), s.e_stderr);
        assert_eq!(f[5].parse::<f64>().ok(), s.e_exact);
        assert_eq!(f[6].parse::<u64>().unwrap(), s.n);
        for field in f[1..6].iter().filter(|f| f.parse::<f64>().is_ok_and(|v| v != 0.0)) {
            let mantissa = field.split('e').next().unwrap();
            let digits = mantissa.trim_start_matches('-').replace('.', "");
            assert_eq!(digits.trim_start_matches('0').len(), 12, "{field}");
        }
    }
}

#[test]
fn same_seed_same_bytes_for_any_worker_count() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run_config("bell-assumptions.cfg", a.path(), &["--trials", "30000", "--workers", "1"]);
    run_config("bell-assumptions.cfg", b.path(), &["--trials", "30000", "--workers", "4"]);
    for file in ["bell-assumptions.json", "bell-assumptions.csv"] {
        assert_eq!(
            std::fs::read(a.path().join(file)).unwrap(),
            std::fs::read(b.path().join(file)).unwrap()
        );
    }
    let c = tempfile::tempdir().unwrap();
    run_config("bell-assumptions.cfg", c.path(), &["--trials", "30000", "--seed", "2"]);
    assert_ne!(
        std::fs::read(a.path().join("bell-assumptions.json")).unwrap(),
        std::fs::read(c.path().join("bell-assumptions.json")).unwrap()
    );
}

#[test]
fn zero_trials_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(config("paper-figure1.cfg"))
        .unwrap()
        .replace("trials = 1000000", "trials = 0");
    let path = dir.path().join("zero.cfg");
    std::fs::write(&path, text).unwrap();
    let out = run(&["run", path.to_str().unwrap(), "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("config error"));

    let out = run_config("paper-figure1.cfg", dir.path(), &["--trials", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["run", "/nonexistent/config.cfg"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "derivation", "--model", "nope"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "derivation", "--model", "factual"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "appendix-d", "--grid", "1"]).status.code(), Some(1));
}

#[test]
fn square_sweep_reports_the_corner() {
    let out = run(&["verify", "appendix-d", "--grid", "2", "--random", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("0 violations, worst margin 0.000000 at (0, π)"));

    let out = run(&["verify", "appendix-d", "--grid", "64", "--random", "100", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["combined"]["violations"], 0);
    assert_eq!(v["grid"]["nodes"], 64 * 64);
}

#[test]
fn derivation_verdicts() {
    let out = run(&["verify", "derivation", "--model", "bell-constrained", "-n", "20000"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("all three assumptions hold on every sampled record"));

    let out = run(&["verify", "derivation", "--model", "eight-partition", "--cell", "5", "-n", "2000"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("first assumption (A₁ = A₂) flagged"));

    let out = run(&["verify", "derivation", "--model", "eight-partition", "--cell", "2", "-n", "2000"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("third assumption (B₂ = B₃) flagged"));

    let out = run(&["verify", "derivation", "--model", "eight-partition", "--cell", "9"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn invariant_suite_passes() {
    let out = run(&["verify", "invariants"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(!text.contains("FAIL"));
}

#[test]
fn sweep_writes_a_table() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("sweep.csv");
    let out = run(&[
        "sweep",
        "--model",
        "qm",
        "--theta-ab-range",
        "0:180:30",
        "--theta-ac-range",
        "0:180:90deg",
        "--out",
        file.to_str().unwrap(),
        "--trials",
        "1000",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let table = std::fs::read_to_string(&file).unwrap();
    assert_eq!(table.lines().count(), 1 + 7 * 3);
    for line in table.lines().skip(1) {
        let margin: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(margin >= -1e-12, "{line}");
    }

    let bad = run(&[
        "sweep", "--model", "qm", "--theta-ab-range", "0:10", "--theta-ac-range", "0:10:5", "--out", "x.csv",
    ]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn json_flag_prints_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_config("factual.cfg", dir.path(), &["--trials", "1000", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: ExperimentReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.model, "factual");
    assert_eq!(report.scenarios.len(), 3);
}
