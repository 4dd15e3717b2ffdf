use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use paircorr_core::diagnostics::ConvergenceSweep;
use paircorr_core::io::{parse_integer_sequence, parse_point_set};
use paircorr_core::PairCorrResult;
use serde_json::Value;

fn paircorr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_paircorr"))
        .args(args)
        .env_remove("PAIRCORR_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn header_config(text: &str) -> Value {
    let first = text.lines().next().unwrap();
    serde_json::from_str(first.strip_prefix("# ").expect("config comment")).unwrap()
}

#[test]
fn uniform_pair_correlation_rows() {
    let text = stdout(&paircorr(&[
        "paircorr", "--dim", "2", "--n", "1000", "--seed", "1", "--gen", "uniform", "--s", "0.5,1,2",
    ]));
    let cfg = header_config(&text);
    assert_eq!(cfg["seed"], 1);
    assert_eq!(cfg["n"], 1000);
    assert_eq!(cfg["format"], "csv");
    let rows = PairCorrResult::read_csv_rows(text.as_bytes()).unwrap();
    assert_eq!(rows.len(), 3);
    for (row, want) in rows.iter().zip([1.0, 4.0, 16.0]) {
        assert_eq!(row.poisson_ref, want);
        assert!((row.f - want).abs() < 0.15 * want, "F({}) = {}", row.s, row.f);
        assert_eq!(row.count as f64 / 1000.0, row.f);
    }
}

#[test]
fn energy_of_squares_is_between_trivial_bounds() {
    let text = stdout(&paircorr(&["energy", "--family", "squares", "--n", "100"]));
    let v: Value = serde_json::from_str(&text).unwrap();
    let e = v["result"]["energy"].as_u64().unwrap();
    assert!((10_000..=1_000_000).contains(&e));
    assert_eq!(v["result"]["N"], 100);
    assert_eq!(v["config"]["family"], "squares");
}

#[test]
fn witness_reports_sandwich_flags() {
    let text = stdout(&paircorr(&[
        "witness", "--alpha", "1.41421356237,1.73205080757", "--qmax", "100000",
    ]));
    let v: Value = serde_json::from_str(&text).unwrap();
    let w = &v["result"];
    for flag in ["sandwich_ok", "b_gt_one", "n_ge_blq", "all_lag_pairs_match"] {
        assert_eq!(w[flag], true, "{flag}");
    }
    let lo = w["sandwich_lo"].as_f64().unwrap();
    let hi = w["sandwich_hi"].as_f64().unwrap();
    assert!(lo <= hi);
    let n = w["N"].as_u64().unwrap();
    let lag = w["lag"].as_u64().unwrap();
    assert!(w["pair_count_at_lag"].as_u64().unwrap() >= n - lag);
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = ["paircorr", "--dim", "3", "--n", "2000", "--seed", "9", "--s", "0.5,1.5"];
    assert_eq!(stdout(&paircorr(&args)), stdout(&paircorr(&args)));
    let args = ["converge", "--gen", "kronecker", "--n", "500", "--s", "0.5,1"];
    assert_eq!(stdout(&paircorr(&args)), stdout(&paircorr(&args)));
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["paircorr", "--n", "5000", "--seed", "3", "--s", "0.25,1,3"];
    let base = stdout(&paircorr(&args));
    let out = Command::new(env!("CARGO_BIN_EXE_paircorr"))
        .args(args)
        .env("PAIRCORR_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(stdout(&out), base);
}

#[test]
fn generated_points_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pts.csv");
    let p = path.to_str().unwrap();
    let out = paircorr(&["generate", "--gen", "kronecker", "--dim", "3", "--n", "200", "--alpha", "sqrt2,sqrt3,sqrt5", "--out", p]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(&path).unwrap();
    let pts = parse_point_set(&text, "pts").unwrap();
    assert_eq!(pts.len(), 200);
    assert_eq!(pts.dim(), 3);
    assert_eq!(header_config(&text)["generator"], "kronecker");

    // Feeding the file back gives the same counts as generating in place.
    let from_file = stdout(&paircorr(&["paircorr", "--in", p, "--s", "1,2"]));
    let in_place = stdout(&paircorr(&[
        "paircorr", "--gen", "kronecker", "--dim", "3", "--n", "200", "--alpha", "sqrt2,sqrt3,sqrt5", "--s", "1,2",
    ]));
    let a = PairCorrResult::read_csv_rows(from_file.as_bytes()).unwrap();
    let b = PairCorrResult::read_csv_rows(in_place.as_bytes()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn converge_csv_parses() {
    let text = stdout(&paircorr(&["converge", "--gen", "halton", "--n", "2000", "--s", "0.5,1"]));
    let rows = ConvergenceSweep::read_csv_rows(text.as_bytes()).unwrap();
    assert!(!rows.is_empty());
    assert_eq!(rows.last().unwrap().n, 2000);
    for r in &rows {
        assert!((r.abs_dev - (r.f - r.poisson_ref).abs()).abs() < 1e-12);
    }
}

#[test]
fn energy_reads_integer_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("seq.txt");
    fs::write(&path, "1\n2\n4\n8\n16\n").unwrap();
    assert_eq!(parse_integer_sequence(&fs::read_to_string(&path).unwrap(), "seq").unwrap().len(), 5);
    let text = stdout(&paircorr(&["energy", "--family", "file", "--in", path.to_str().unwrap(), "--n", "5"]));
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["result"]["energy"], 2 * 25 - 5);
}

#[test]
fn approx_lists_hits() {
    let text = stdout(&paircorr(&["approx", "--qmax", "1000", "--format", "csv"]));
    let mut lines = text.lines().skip(1);
    assert_eq!(lines.next(), Some("q,theta"));
    let qs: Vec<u64> = lines.map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert!(qs.contains(&41));
    assert!(qs.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn discrepancy_json() {
    let text = stdout(&paircorr(&["discrepancy", "--gen", "halton", "--n", "10000", "--grid-k", "100"]));
    let v: Value = serde_json::from_str(&text).unwrap();
    assert!(v["result"]["discrepancy"].as_f64().unwrap() < 0.01);
}

fn code(args: &[&str]) -> Option<i32> {
    paircorr(args).status.code()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["--help"]), Some(0));
    assert_eq!(code(&["bogus"]), Some(1));
    assert_eq!(code(&["paircorr", "--dim", "0"]), Some(1));
    assert_eq!(code(&["paircorr", "--s", "1,-2"]), Some(1));
    assert_eq!(code(&["paircorr", "--s", "1,nan"]), Some(1));
    assert_eq!(code(&["paircorr", "--gen", "kronecker", "--dim", "3", "--alpha", "sqrt2"]), Some(1));
    assert_eq!(code(&["energy", "--family", "lacunary", "--n", "100"]), Some(1));
    assert_eq!(code(&["witness", "--format", "csv"]), Some(1));
    assert_eq!(code(&["paircorr", "--trials", "3", "--gen", "halton"]), Some(1));

    let missing = Path::new("/nonexistent/paircorr/points.csv");
    assert_eq!(code(&["paircorr", "--in", missing.to_str().unwrap()]), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "0.1,0.2\n0.3\n").unwrap();
    let out = paircorr(&["paircorr", "--in", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let dup = dir.path().join("dup.txt");
    fs::write(&dup, "1\n3\n3\n").unwrap();
    assert_eq!(code(&["energy", "--family", "file", "--in", dup.to_str().unwrap(), "--n", "3"]), Some(1));
}

#[test]
fn monte_carlo_table() {
    let text = stdout(&paircorr(&["paircorr", "--trials", "8", "--n", "400", "--s", "0.5,1", "--format", "json"]));
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["result"]["trials"], 8);
    let mean = v["result"]["mean"].as_array().unwrap();
    assert_eq!(mean.len(), 2);
    assert!((mean[1].as_f64().unwrap() - 4.0).abs() < 0.5);
}
