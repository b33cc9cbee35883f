//! Black-box tests of the command-line surface: exit codes, messages, and
//! the files each command leaves behind.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use ssa_autogroup::{derive_rng, generate_series, Scenario, SignalKind};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ssa-autogroup"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write_series_csv(path: &Path, values: &[f64]) {
    let mut body = String::from("t,value\n");
    for (t, v) in values.iter().enumerate() {
        body.push_str(&format!("{},{v}\n", t + 1));
    }
    fs::write(path, body).unwrap();
}

#[test]
fn missing_input_flag_is_a_usage_error() {
    let out = run(&["analyze", "--out-dir", "/tmp/unused"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--input"));
}

#[test]
fn analyze_selects_the_harmonic_pair_and_writes_reports() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("f1.csv");
    let mut rng = derive_rng(99, &[]);
    let series = generate_series(&Scenario::new(SignalKind::F1, 5.0), &mut rng).unwrap();
    write_series_csv(&input, series.values());

    let out_dir = tmp.path().join("report");
    let out = run(&[
        "analyze",
        "--input",
        input.to_str().unwrap(),
        "--value-col",
        "value",
        "--window",
        "25",
        "--seed",
        "4242",
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("g_hat = 2"));

    let kv = fs::read_to_string(out_dir.join("grouping.kv")).unwrap();
    assert!(kv.contains("g_hat=2"));
    assert!(kv.contains("correction=holm"));

    let recon = fs::read_to_string(out_dir.join("reconstruction.csv")).unwrap();
    let mut lines = recon.lines();
    assert_eq!(lines.next(), Some("t,original,signal,residual"));
    assert_eq!(lines.count(), 50);

    // d = 25 components → 25 columns in the correlation matrix.
    let wcorr = fs::read_to_string(out_dir.join("wcorr.csv")).unwrap();
    assert_eq!(wcorr.lines().next().unwrap().split(',').count(), 25);
    assert_eq!(wcorr.lines().count(), 26);
}

#[test]
fn simulate_rejects_zero_replicates() {
    let out = run(&[
        "simulate",
        "--signals",
        "f1",
        "--snr",
        "5",
        "--reps",
        "0",
        "--out",
        "/tmp/unused.csv",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("replication count"));
}

#[test]
fn wcorr_of_a_constant_series_is_the_one_by_one_unit_matrix() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("constant.csv");
    write_series_csv(&input, &[3.5; 12]);
    let matrix = tmp.path().join("w.csv");

    let out = run(&[
        "wcorr",
        "--input",
        input.to_str().unwrap(),
        "--value-col",
        "value",
        "--window",
        "4",
        "--out",
        matrix.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("1x1"));
    assert_eq!(
        fs::read_to_string(&matrix).unwrap(),
        "c1\n1.0000000000000000e0\n"
    );
}

#[test]
fn wcorr_of_a_zero_series_is_a_numerical_failure() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("zero.csv");
    write_series_csv(&input, &[0.0; 12]);

    let out = run(&[
        "wcorr",
        "--input",
        input.to_str().unwrap(),
        "--value-col",
        "value",
        "--window",
        "4",
        "--out",
        tmp.path().join("w.csv").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("degenerate component"));
}

#[test]
fn missing_file_is_an_input_error() {
    let out = run(&[
        "analyze",
        "--input",
        "/nonexistent/series.csv",
        "--out-dir",
        "/tmp/unused",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("file not found"));
}

#[test]
fn unparseable_cell_reports_its_row() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("bad.csv");
    fs::write(&input, "t,value\n1,1.0\n2,oops\n3,3.0\n").unwrap();

    let out = run(&[
        "analyze",
        "--input",
        input.to_str().unwrap(),
        "--value-col",
        "value",
        "--out-dir",
        tmp.path().join("r").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let msg = stderr(&out);
    assert!(msg.contains("row 2") && msg.contains("oops"), "got: {msg}");
}

#[test]
fn bootstrap_count_below_the_floor_is_rejected() {
    let out = run(&[
        "analyze",
        "--input",
        "/tmp/unused.csv",
        "--B",
        "50",
        "--out-dir",
        "/tmp/unused",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("at least 99"));
}

#[test]
fn block_size_below_two_is_rejected() {
    let out = run(&[
        "analyze",
        "--input",
        "/tmp/unused.csv",
        "--ell",
        "1",
        "--out-dir",
        "/tmp/unused",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("at least 2"));
}

#[test]
fn window_larger_than_half_the_series_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("short.csv");
    write_series_csv(&input, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);

    let out = run(&[
        "analyze",
        "--input",
        input.to_str().unwrap(),
        "--value-col",
        "value",
        "--window",
        "4",
        "--out-dir",
        tmp.path().join("r").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("out of range"));
}
