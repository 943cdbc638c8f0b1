use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polar-spectrum"))
        .args(args)
        .env_remove("POLAR_SPECTRUM_THREADS")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn construct_picks_most_reliable_rows() {
    let v = json(&["construct", "--m", "3", "--k", "4"]);
    assert_eq!(v["info"], serde_json::json!([4, 6, 7, 8]));
    assert_eq!(v["decreasing"], true);
    assert_eq!(v["config"]["command"], "construct");
}

#[test]
fn construct_from_zero_based_sequence() {
    let seq = scratch("seq.txt", "0 1 2 4 3 5 6 7\n");
    let v = json(&[
        "construct",
        "--m",
        "3",
        "--k",
        "3",
        "--sequence",
        seq.to_str().unwrap(),
        "--zero-based",
    ]);
    assert_eq!(v["info"], serde_json::json!([6, 7, 8]));
}

#[test]
fn dump_table_rows() {
    let out = run(&[
        "dump-table",
        "--m",
        "3",
        "--monomial",
        "x2*x3",
        "--a-max",
        "4",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "weight,0,1,2,3,4");
    assert_eq!(lines[3], "2,16,12,9,6,4");
}

#[test]
fn minwt_wang_liu_small_example() {
    let v = json(&[
        "minwt",
        "--m",
        "3",
        "--monomials",
        "x1*x2,x2",
        "--pattern",
        "wl",
        "--i",
        "2",
    ]);
    assert_eq!(v["result"]["d_min"], 2);
    assert_eq!(v["result"]["count"], "2");
    assert!(v["mother"].is_null());
}

#[test]
fn minwt_qup_reports_exactness() {
    let v = json(&[
        "minwt",
        "--m",
        "3",
        "--info",
        "4,5,6,7,8",
        "--pattern",
        "qup",
        "--i",
        "3",
    ]);
    assert_eq!(v["result"]["exact"], false);
    assert_eq!(v["result"]["count"], "4");
}

#[test]
fn invalid_input_exits_one() {
    let out = run(&[
        "minwt",
        "--m",
        "3",
        "--info",
        "1",
        "--pattern",
        "qup",
        "--i",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not decreasing"));
}

#[test]
fn cap_exceeded_exits_two() {
    let out = run(&["check", "--max-m", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_passes_small_sweep() {
    let v = json(&["check", "--max-m", "3"]);
    assert_eq!(v["passed"], true);
    assert!(v["coset"]["compared"].as_u64().unwrap() > 0);
}

#[test]
fn union_bound_from_minwt_output_is_monotone() {
    let v = json(&[
        "minwt",
        "--m",
        "4",
        "--info",
        "8,12,14,15,16",
        "--pattern",
        "qup",
        "--i",
        "2",
    ]);
    let path = scratch("minwt.json", &v.to_string());
    let b = json(&[
        "union-bound",
        "--spectrum",
        path.to_str().unwrap(),
        "--snr",
        "0,1,2,3,4,5",
        "--rate",
        "0.35",
    ]);
    let bounds: Vec<f64> = b["curve"]["points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["bound"].as_f64().unwrap())
        .collect();
    assert_eq!(bounds.len(), 6);
    assert!(bounds.windows(2).all(|w| w[1] <= w[0]), "{bounds:?}");
}

#[test]
fn avg_spectrum_csv_and_thread_count_agree() {
    let args = [
        "avg-spectrum",
        "--m",
        "4",
        "--info",
        "10,12,14,15,16",
        "--pattern",
        "qup",
        "--i",
        "3",
        "--csv",
    ];
    let one = Command::new(env!("CARGO_BIN_EXE_polar-spectrum"))
        .args(args)
        .env("POLAR_SPECTRUM_THREADS", "1")
        .output()
        .unwrap();
    let many = run(&args);
    assert!(one.status.success() && many.status.success());
    assert_eq!(one.stdout, many.stdout);
    let text = String::from_utf8(one.stdout).unwrap();
    assert!(text.starts_with("weight,num,exp2,approx\n"));
}

#[test]
fn coset_spectrum_unit_last() {
    let v = json(&["coset-spectrum", "--m", "2", "--unit-last", "1"]);
    // First input bit fixed to one, the other three free.
    let total: u64 = v["spectrum"]
        .as_object()
        .unwrap()
        .values()
        .map(|c| c.as_str().unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 8);
}
