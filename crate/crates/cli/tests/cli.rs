//! End-to-end checks of the command-line interface.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bipartite-walk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn temp_path(name: &str) -> PathBuf {
    let mut path = std::env::temp_dir();
    path.push(format!("bipartite-walk-test-{}-{name}", std::process::id()));
    path
}

#[test]
fn simulate_writes_a_curve_with_the_expected_peak() {
    let out = temp_path("curve.csv");
    let output = run(&[
        "simulate",
        "--m",
        "100",
        "--n",
        "100",
        "--layout",
        "opposite",
        "--steps",
        "60",
        "--quiet",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let text = fs::read_to_string(&out).unwrap();
    fs::remove_file(&out).ok();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "step,fidelity,source");
    let mut best = (0usize, f64::NEG_INFINITY);
    for line in lines {
        let mut fields = line.split(',');
        let step: usize = fields.next().unwrap().parse().unwrap();
        let fidelity: f64 = fields.next().unwrap().parse().unwrap();
        assert_eq!(fields.next().unwrap(), "full_simulation");
        if fidelity > best.1 {
            best = (step, fidelity);
        }
    }
    assert_eq!(best.0, 23);
}

#[test]
fn analyze_reports_the_fig2_numbers() {
    let output = run(&[
        "analyze", "--m", "100", "--n", "50", "--layout", "opposite", "--quiet",
    ]);
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.contains("\"T_opt\":19"));
    assert!(text.contains("\"F_max_analytic\":8.8738674364349"));
    assert!(text.contains("\"peak_step\":19"));
}

#[test]
fn analyze_csv_format_is_key_value() {
    let output = run(&[
        "analyze", "--m", "5", "--n", "1", "--layout", "same", "--quiet", "--format", "csv",
    ]);
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.starts_with("key,value\nm,5\nn,1\nlayout,same\n"));
    assert!(text.contains("T_opt,4"));
    assert!(!text.contains("omega"));
}

#[test]
fn analyze_rejects_sizes_outside_the_analytic_layer() {
    let output = run(&[
        "analyze", "--m", "3", "--n", "1", "--layout", "opposite", "--quiet",
    ]);
    assert_eq!(output.status.code(), Some(2));
    let text = String::from_utf8(output.stderr).unwrap();
    assert!(
        text.contains("simulate"),
        "stderr should point at the simulator: {text}"
    );
}

#[test]
fn sweep_grid_is_symmetric_with_unit_diagonal() {
    let output = run(&["sweep", "--m", "2:6", "--n", "2:6", "--quiet"]);
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().map(|l| l.split(',').collect()).collect();
    assert_eq!(rows[0], vec!["m", "2", "3", "4", "5", "6"]);
    let value = |i: usize, j: usize| rows[1 + i][1 + j].parse::<f64>().unwrap();
    for i in 0..5 {
        assert_eq!(value(i, i), 1.0);
        for j in 0..5 {
            assert_eq!(value(i, j), value(j, i));
        }
    }
}

#[test]
fn sweep_rejects_sizes_below_two() {
    let output = run(&["sweep", "--m", "1:4", "--n", "2:4"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn unknown_flags_and_missing_arguments_exit_two() {
    assert_eq!(run(&["simulate", "--n", "4"]).status.code(), Some(2));
    assert_eq!(
        run(&["simulate", "--m", "4", "--n", "4", "--frobnicate"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["simulate", "--m", "0", "--n", "4"]).status.code(),
        Some(2)
    );
}

#[test]
fn unwritable_output_path_is_an_argument_error() {
    let output = run(&[
        "analyze",
        "--m",
        "4",
        "--n",
        "4",
        "--quiet",
        "--out",
        "/nonexistent-dir/report.json",
    ]);
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8(output.stderr)
        .unwrap()
        .contains("cannot write"));
}

#[test]
fn identical_invocations_produce_identical_bytes() {
    let args = [
        "simulate", "--m", "7", "--n", "4", "--layout", "same", "--steps", "40", "--quiet",
    ];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);

    let args = ["verify", "--max-product", "6", "--steps", "8", "--quiet"];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn simulate_can_snapshot_the_final_state() {
    let out = temp_path("state.csv");
    let output = run(&[
        "simulate",
        "--m",
        "2",
        "--n",
        "1",
        "--layout",
        "same",
        "--steps",
        "1",
        "--quiet",
        "--state-out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let text = fs::read_to_string(&out).unwrap();
    fs::remove_file(&out).ok();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "part,position,coin,re,im");
    // One step of K_{2,1} leaves amplitude -1 on the part-2 state (1,1).
    assert_eq!(lines[3], "2,1,1,-1.0000000000000000e0,0.0000000000000000e0");
}

#[test]
fn verify_small_battery_exits_zero_and_reports_json() {
    let out = temp_path("verify.json");
    let output = run(&[
        "verify",
        "--max-product",
        "9",
        "--steps",
        "10",
        "--quiet",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let text = fs::read_to_string(&out).unwrap();
    fs::remove_file(&out).ok();
    assert!(text.contains("\"all_passed\":true"));
    assert!(text.contains("\"name\":\"oracle_equivalence\""));
}
