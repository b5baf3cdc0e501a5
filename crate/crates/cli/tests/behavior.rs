//! CLI behavior: exit codes, file schemas, config-file merging and the
//! documented error paths.

use std::path::Path;
use std::process::Command;

fn run_in(dir: &Path, args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_cohthermo"))
        .args(args)
        .env("COHTHERMO_OUT", dir)
        .output()
        .expect("binary must run")
}

fn stdout(out: &std::process::Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &std::process::Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn verify_passes_with_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["verify-identities", "--trials", "8", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report = std::fs::read_to_string(dir.path().join("verify_identities.json")).unwrap();
    assert!(report.contains("\"pass\": true"));
}

#[test]
fn verify_csv_format_has_header_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["verify-identities", "--trials", "4", "--format", "csv"],
    );
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("verify_identities.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("trials,seed,"));
    assert_eq!(lines.count(), 1);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    // Malformed grid: negative duration.
    let out = run_in(dir.path(), &["jc-evolve", "--t-max=-1.0"]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));

    // Unknown flag goes through clap.
    let out = run_in(dir.path(), &["jc-evolve", "--frequency", "1.0"]);
    assert_eq!(out.status.code(), Some(2));

    // Detuned closed-form request.
    let out = run_in(dir.path(), &["jc-evolve", "--omega", "1.0", "--omega-a", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("resonance"));

    // Invalid population.
    let out = run_in(dir.path(), &["micromaser", "--p-e", "1.5"]);
    assert_eq!(out.status.code(), Some(2));

    // xi-target and mu are mutually exclusive.
    let out = run_in(
        dir.path(),
        &["micromaser", "--xi-target", "0.01", "--mu-re", "0.05"],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_is_used_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("run.json");
    std::fs::write(
        &cfg_path,
        r#"{"trials": 6, "seed": 9, "format": "csv"}"#,
    )
    .unwrap();
    let out = run_in(
        dir.path(),
        &[
            "verify-identities",
            "--config",
            cfg_path.to_str().unwrap(),
            "--trials",
            "4",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("verify_identities.csv")).unwrap();
    // Flag trials=4 overrides file trials=6; file seed=9 survives.
    assert!(csv.lines().nth(1).unwrap().starts_with("4,9,"));
}

#[test]
fn config_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("bad.json");
    std::fs::write(&cfg_path, r#"{"trils": 6}"#).unwrap();
    let out = run_in(
        dir.path(),
        &["verify-identities", "--config", cfg_path.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown field"));
}

#[test]
fn jc_evolve_demo_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["jc-evolve", "--points", "21"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let max_dp: f64 = text
        .split("max |Δp_e| = ")
        .nth(1)
        .and_then(|s| s.split(',').next())
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!(max_dp < 1e-8, "printed diff {max_dp}");
    let csv = std::fs::read_to_string(dir.path().join("jc_evolve.csv")).unwrap();
    assert!(csv.starts_with(
        "t,p_e_exact,p_e_closed,p_e_short,|mu|_exact,|mu|_closed,|mu|_short,xi_exact\n"
    ));
    assert_eq!(csv.lines().count(), 22);
    // First row reproduces the inputs at t = 0.
    let first = csv.lines().nth(1).unwrap();
    let cols: Vec<f64> = first.split(',').map(|x| x.parse().unwrap()).collect();
    assert!((cols[0] - 0.0).abs() < 1e-15);
    assert!((cols[1] - 0.3).abs() < 1e-10);
}

#[test]
fn micromaser_empty_run_flags_undefined_gap() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["micromaser", "--n-atoms", "0"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("gap undefined"));
    let summary = std::fs::read_to_string(dir.path().join("micromaser_summary.json")).unwrap();
    assert!(summary.contains("\"relative_gap\": null"));
    let csv = std::fs::read_to_string(dir.path().join("micromaser.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1, "header only");
}

#[test]
fn micromaser_updating_mode_adds_drift_column() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "micromaser",
            "--n-atoms",
            "3",
            "--mode",
            "updating-field",
            "--p-e",
            "0.4",
            "--mu-re",
            "0.0",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("micromaser.csv")).unwrap();
    assert!(csv.lines().next().unwrap().ends_with(",field_drift"));
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn micromaser_reference_run_gap_within_ten_percent() {
    let dir = tempfile::tempdir().unwrap();
    // gτ = 0.02 with g = 0.05 → rate = 2.5; βω = 1; ξ_a(0) = 0.01.
    let out = run_in(
        dir.path(),
        &[
            "micromaser",
            "--g",
            "0.05",
            "--rate",
            "2.5",
            "--n-atoms",
            "100",
            "--xi-target",
            "0.01",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let summary = std::fs::read_to_string(dir.path().join("micromaser_summary.json")).unwrap();
    let gap: f64 = summary
        .split("\"relative_gap\": ")
        .nth(1)
        .and_then(|s| s.split([',', '\n']).next())
        .unwrap()
        .parse()
        .unwrap();
    assert!(gap <= 0.10, "gap {gap}");
}

#[test]
fn engine_sweep_single_classical_point_is_carnot() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["engine-sweep", "--mode", "cycle", "--t-h", "1.0", "--t-c", "0.6"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("engine_sweep.csv")).unwrap();
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    let eta: f64 = row[7].parse().unwrap();
    let eta_c: f64 = row[8].parse().unwrap();
    assert_eq!(eta, eta_c);
    assert!((eta - 0.4).abs() < 1e-15);
}

#[test]
fn engine_sweep_photon_monotone_to_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "engine-sweep",
            "--mode",
            "photon",
            "--eta-c",
            "0.5",
            "--gamma",
            "1.0",
            "--xi-h",
            "1.0",
            "--t-hot",
            "0:100:21",
            "--ds-l",
            "1.0",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("engine_sweep.csv")).unwrap();
    let etas: Vec<f64> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(5).unwrap().parse().unwrap())
        .collect();
    assert_eq!(etas[0], 0.5);
    for w in etas.windows(2) {
        assert!(w[1] > w[0], "η must increase with the coherence budget");
    }
    let last = *etas.last().unwrap();
    assert!(last > 0.99 && last < 1.0);
}

#[test]
fn engine_sweep_equal_temperature_outputs_work() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "engine-sweep",
            "--mode",
            "cycle",
            "--t-h",
            "0.8",
            "--t-c",
            "0.8",
            "--dc-h",
            "-0.03:-0.01:3",
            "--dc-c",
            "-0.02",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("engine_sweep.csv")).unwrap();
    for line in csv.lines().skip(1) {
        let row: Vec<&str> = line.split(',').collect();
        let eta: f64 = row[7].parse().unwrap();
        let eta_c: f64 = row[8].parse().unwrap();
        let w: f64 = row[9].parse().unwrap();
        assert_eq!(eta_c, 0.0);
        assert!(eta > 0.0);
        assert!(w > 0.0);
    }
}

#[test]
fn engine_sweep_rejects_invalid_rows() {
    let dir = tempfile::tempdir().unwrap();
    // T_c above T_h violates the cycle invariants.
    let out = run_in(
        dir.path(),
        &["engine-sweep", "--mode", "cycle", "--t-h", "0.5", "--t-c", "0.9"],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("T_h >= T_c"));
}

#[test]
fn out_flag_overrides_default_name() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["jc-evolve", "--points", "2", "--out", "custom.csv"],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("custom.csv").exists());
    assert!(!dir.path().join("jc_evolve.csv").exists());
}
