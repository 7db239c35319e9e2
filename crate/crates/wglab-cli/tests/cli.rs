//! End-to-end checks of the binary: artifact determinism, exit codes, cache
//! behavior. Everything runs the real executable.

use std::path::Path;
use std::process::{Command, Output};

fn wglab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wglab"))
        .args(args)
        .env_remove("WG_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn wglab_env(args: &[&str], key: &str, value: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wglab"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

#[test]
fn exponents_reproduce_remark_values() {
    let out = wglab(&["exponents", "--k-lo", "6", "--k-hi", "7", "--forms", "f236k", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("f236k,6,1,54"));
    assert!(text.contains("bruedern,1,288"));
    assert!(text.contains("f236k,7,1,81"));
    assert!(text.contains("bruedern,1,392"));
}

#[test]
fn exponents_empty_range_is_header_only() {
    let out = wglab(&["exponents", "--k-lo", "6", "--k-hi", "5", "--forms", "f236k", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    // Header comments and the column line, no data rows.
    let data_rows = text.lines().filter(|l| !l.starts_with('#') && !l.starts_with("form,")).count();
    assert_eq!(data_rows, 0);
}

#[test]
fn reruns_are_byte_identical() {
    let args = ["exceptions", "--form", "f235k", "--k", "5", "--n", "20000", "--seed", "9"];
    let first = wglab(&args);
    let second = wglab(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn worker_count_does_not_change_artifacts() {
    let base = ["exceptions", "--form", "f236k", "--k", "6", "--n", "50000", "--seed", "3"];
    let one = wglab(&[&base[..], &["--workers", "1"]].concat());
    let eight = wglab(&[&base[..], &["--workers", "8"]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, eight.stdout);
}

#[test]
fn parity_mismatch_exits_2() {
    let out = wglab(&["exceptions", "--form", "f236k", "--k", "6", "--n", "1000", "--parity", "odd"]);
    assert_eq!(out.status.code(), Some(2));
    let out = wglab(&["exceptions", "--form", "f3333k", "--k", "4", "--n", "1000", "--parity", "odd"]);
    assert!(out.status.success());
}

#[test]
fn capacity_overflow_exits_3() {
    let out = wglab(&["exceptions", "--form", "f236k", "--k", "6", "--n", "2000000000"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn invalid_form_exits_2() {
    let out = wglab(&["repcount", "--form", "f999", "--k", "6", "--n", "140"]);
    assert_eq!(out.status.code(), Some(2));
    // k below the form's nondecreasing minimum.
    let out = wglab(&["repcount", "--form", "f236k", "--k", "5", "--n", "140"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn repcount_and_witness_basics() {
    let out = wglab(&["repcount", "--form", "f236k", "--k", "6", "--n", "140"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["data"]["count"].as_u64().unwrap() >= 1);

    let out = wglab(&["witness", "--form", "f236k", "--k", "6", "--n", "140"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(
        v["data"]["witness"]["primes"].as_array().unwrap().len(),
        4
    );

    let out = wglab(&["witness", "--form", "f236k", "--k", "6", "--n", "4"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["data"]["witness"].is_null());
}

#[test]
fn parseval_reports_pass() {
    let out = wglab(&["parseval", "--k", "2", "--n", "100", "--samples", "256"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["data"]["pass"], "PASS");
    // (ln 7)^2
    let m = v["data"]["moment"].as_f64().unwrap();
    assert!((m - 3.7865663081964716).abs() < 1e-9);
}

#[test]
fn moment_undersampled_exits_2() {
    let out = wglab(&["moment", "--k", "2", "--m", "1", "--n", "512", "--samples", "1024"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn arcs_measures_partition() {
    let out = wglab(&["arcs", "--n", "1048576", "--k", "2", "--samples", "10000"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let sum = v["data"]["measure_sum"].as_f64().unwrap();
    assert!((sum - 1.0).abs() < 1e-12);
    let s = &v["data"]["sampled"];
    let total = s["major"].as_u64().unwrap()
        + s["intermediate"].as_u64().unwrap()
        + s["minor"].as_u64().unwrap();
    assert_eq!(total, 10000);
}

#[test]
fn meanvalue_partition_ok() {
    let out = wglab(&["meanvalue", "--lemma", "l26", "--k", "4", "--x", "2", "--n", "4096"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["data"]["partition_ok"], true);
}

#[test]
fn expsum_csv_grid() {
    let out = wglab(&[
        "expsum", "--k", "2", "--n", "4096", "--samples", "16", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# tool=wglab"));
    assert!(text.contains("alpha,re,im,abs,class"));
    // 16 data rows after the header block and column line.
    let rows = text.lines().filter(|l| !l.starts_with('#') && !l.starts_with("alpha")).count();
    assert_eq!(rows, 16);
}

#[test]
fn cache_dir_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["repcount", "--form", "f244k", "--k", "4", "--n", "10000"];
    let cold = wglab_env(&args, "WG_CACHE_DIR", dir.path());
    assert!(cold.status.success());
    assert!(
        std::fs::read_dir(dir.path()).unwrap().count() > 0,
        "cache directory should be populated"
    );
    let warm = wglab_env(&args, "WG_CACHE_DIR", dir.path());
    assert_eq!(cold.stdout, warm.stdout);
}

#[test]
fn out_flag_writes_file_and_bin_out() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("report.json");
    let bin_path = dir.path().join("exceptions.bin");
    let out = wglab(&[
        "exceptions",
        "--form",
        "f236k",
        "--k",
        "6",
        "--n",
        "300",
        "--out",
        json_path.to_str().unwrap(),
        "--bin-out",
        bin_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    let count = report["data"]["exceptional_count"].as_u64().unwrap();
    let bin = std::fs::read(&bin_path).unwrap();
    assert_eq!(bin.len() as u64, 8 * count);
    // First exceptional even target is 2.
    assert_eq!(u64::from_le_bytes(bin[0..8].try_into().unwrap()), 2);
}
