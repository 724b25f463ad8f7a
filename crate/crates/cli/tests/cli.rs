//! End-to-end tests of the `heliq` binary: exit codes, formats, determinism.

use std::process::{Command, Output};

fn heliq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heliq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn negativity_sweep_is_flat_at_full_mixing() {
    let out = heliq(&[
        "sweep",
        "--measure",
        "negativity",
        "--omega",
        "0.1:2.0:0.1",
        "--p",
        "1",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("omega,p,qr2,measure,value"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 20);
    for row in rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 5);
        assert_eq!(fields[3], "negativity");
        let value: f64 = fields[4].parse().unwrap();
        assert!((value - 1.0).abs() < 1e-8, "row: {row}");
    }
}

#[test]
fn geo2_sweep_follows_half_p_squared() {
    let out = heliq(&[
        "sweep",
        "--measure",
        "geo2",
        "--omega",
        "0.5",
        "--p",
        "0:1:0.1",
        "--grid-theta",
        "31",
        "--grid-phi",
        "8",
    ]);
    assert!(out.status.success());
    for row in stdout(&out).lines().skip(1) {
        let fields: Vec<&str> = row.split(',').collect();
        let p: f64 = fields[1].parse().unwrap();
        let value: f64 = fields[4].parse().unwrap();
        assert!((value - p * p / 2.0).abs() < 1e-9, "row: {row}");
    }
}

#[test]
fn discord_sweep_matches_formula_even_on_a_coarse_grid() {
    let out = heliq(&[
        "sweep",
        "--measure",
        "discord",
        "--omega",
        "0.5",
        "--p",
        "0.5",
        "--qr2",
        "0:1:0.5",
        "--grid-theta",
        "7",
        "--grid-phi",
        "4",
        "--refine",
        "1",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 3, "qr2 inner sweep");
    for row in rows {
        let value: f64 = row.split(',').nth(4).unwrap().parse().unwrap();
        assert!((value - 0.262483184).abs() < 1e-4, "row: {row}");
    }
}

#[test]
fn sweep_output_is_deterministic() {
    let args = [
        "sweep",
        "--measure",
        "log_negativity",
        "--omega",
        "0.1:1.0:0.1",
        "--p",
        "0:1:0.25",
    ];
    let first = heliq(&args);
    let second = heliq(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn sweep_json_format_carries_all_fields() {
    let out = heliq(&[
        "sweep",
        "--measure",
        "negativity",
        "--omega",
        "0.5",
        "--p",
        "0:1:0.5",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for row in rows {
        assert!(row["omega"].is_number());
        assert!(row["p"].is_number());
        assert!(row["qr2"].is_number());
        assert_eq!(row["measure"], "negativity");
        assert!(row["value"].is_number());
    }
}

#[test]
fn sweep_writes_output_file() {
    let dir = std::env::temp_dir().join("heliq-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("neg.csv");
    let out = heliq(&[
        "sweep",
        "--measure",
        "negativity",
        "--omega",
        "0.5",
        "--p",
        "1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.starts_with("omega,p,qr2,measure,value\n"));
    assert_eq!(written.lines().count(), 2);
}

#[test]
fn empty_range_is_a_usage_error() {
    let out = heliq(&[
        "sweep",
        "--measure",
        "negativity",
        "--omega",
        "2.0:1.0:0.1",
        "--p",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = heliq(&[
        "sweep",
        "--measure",
        "negativity",
        "--omega",
        "0.1:1.0:-0.1",
        "--p",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tripartite_measures_reject_mode_superposition() {
    let out = heliq(&[
        "sweep",
        "--measure",
        "pi_tangle",
        "--omega",
        "0.5",
        "--p",
        "1",
        "--qr2",
        "0.5",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_measure_is_a_usage_error() {
    let out = heliq(&["sweep", "--measure", "entropy", "--omega", "0.5", "--p", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn state_prints_the_x_matrix() {
    let out = heliq(&["state", "bipartite", "--p", "0.5", "--omega", "0.5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("A+\u{2191},B-\u{2191}"));
    assert!(text.contains("0.375000"), "diagonal (1+p)/4:\n{text}");
    assert!(text.contains("0.250000"), "coupling p/2:\n{text}");
    assert!(text.contains("trace          = 1.000000"));

    let out = heliq(&["state", "bipartite", "--p", "0"]);
    let text = stdout(&out);
    assert!(text.contains("0.250000"));
    assert!(!text.contains("0.375000"));
}

#[test]
fn state_tripartite_has_ghz_weights_at_full_mixing() {
    let out = heliq(&["state", "tripartite", "--p", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("0.500000"), "{text}");
    assert!(text.contains("C-\u{2191}"));
}

#[test]
fn state_rejects_bad_parameters() {
    let out = heliq(&["state", "bipartite", "--p", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = heliq(&["state", "unruh", "--qr2", "-0.1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_passes_and_reports_every_check() {
    let out = heliq(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "verification must pass");
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let checks = report.as_array().unwrap();
    assert!(checks.len() >= 20);
    for check in checks {
        assert!(check["id"].is_string());
        assert!(check["expected"].is_number());
        assert!(check["observed"].is_number());
        assert!(check["tolerance"].is_number());
        assert_eq!(check["pass"], true);
    }
    let ids: Vec<&str> = checks.iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert!(ids.contains(&"pi_tangle_flatness"));
    assert!(ids.contains(&"qr_independence_discord"));
    let pi = checks
        .iter()
        .find(|c| c["id"] == "pi_tangle_flatness")
        .unwrap();
    assert_eq!(pi["expected"], 1.0);
}
