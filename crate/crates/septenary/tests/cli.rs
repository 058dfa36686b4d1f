use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_septenary");

fn septenary(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("SEPTENARY_SEED").output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn corr_column(csv_text: &str) -> Vec<f64> {
    let mut rd = csv::Reader::from_reader(csv_text.as_bytes());
    let last = rd.headers().unwrap().len() - 1;
    rd.records().map(|r| r.unwrap()[last].parse().unwrap()).collect()
}

#[test]
fn single_fixed_trial_is_perfectly_anticorrelated() {
    let o = septenary(&["epr", "--trials", "1", "--fixed-angles", "30,30", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("k,lambda,phi_a,phi_b,A,B,corr\n"));
    assert_eq!(corr_column(&text), vec![-1.0]);
}

#[test]
fn zero_trials_exits_with_usage_code() {
    assert_eq!(code(&septenary(&["epr", "--trials", "0"])), 2);
    assert_eq!(code(&septenary(&["ghz", "--fixed-angles", "1,2,3,4", "--random"])), 2);
    assert_eq!(code(&septenary(&["nonsense"])), 2);
}

#[test]
fn validation_failures_exit_with_four() {
    assert_eq!(code(&septenary(&["epr", "--trials", "10", "--bin-deg", "0"])), 4);
    assert_eq!(code(&septenary(&["epr", "--trials", "10", "--fixed-angles", "1,2,3"])), 4);
}

#[test]
fn unwritable_output_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing").join("out.csv");
    assert_eq!(code(&septenary(&["epr", "--trials", "10", "--out", bad.to_str().unwrap()])), 3);
}

fn files(dir: &Path, tag: &str, extra: &[&str]) -> (Vec<u8>, Vec<u8>, String) {
    let (csv, js, svg) =
        (dir.join(format!("{tag}.csv")), dir.join(format!("{tag}.json")), dir.join(format!("{tag}.svg")));
    let mut args = vec![
        "ghz",
        "--trials",
        "20000",
        "--seed",
        "7",
        "--random",
        "--out",
        csv.to_str().unwrap(),
        "--summary",
        js.to_str().unwrap(),
        "--plot",
        svg.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    assert_eq!(code(&septenary(&args)), 0);
    (std::fs::read(csv).unwrap(), std::fs::read(js).unwrap(), std::fs::read_to_string(svg).unwrap())
}

#[test]
fn repeated_runs_write_identical_files_for_any_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let a = files(dir.path(), "a", &["--threads", "1"]);
    let b = files(dir.path(), "b", &["--threads", "4"]);
    let c = files(dir.path(), "c", &[]);
    assert_eq!(a, b);
    assert_eq!(a, c);

    let summary: Value = serde_json::from_slice(&a.1).unwrap();
    assert_eq!(summary["trials"], 20000);
    assert_eq!(summary["seed"], 7);
    assert_eq!(summary["seed_source"], "flag");
    assert_eq!(summary["bin_width_deg"], 5.0);
    let bins = summary["bins"].as_array().unwrap();
    assert_eq!(bins.iter().map(|b| b["count"].as_u64().unwrap()).sum::<u64>(), 20000);
    for b in bins {
        let angle = b["angle_deg"].as_f64().unwrap().to_radians();
        // 5 degree bins: the centre value differs from the bin mean by at most sin(2.5°) plus noise
        assert!((b["mean_corr"].as_f64().unwrap() + angle.cos()).abs() < 0.06);
    }
    assert!(summary["ave_outcomes"]["D"].is_number());
    assert_eq!(a.2.matches("<circle").count(), bins.len());

    let rows = corr_column(std::str::from_utf8(&a.0).unwrap());
    assert_eq!(rows.len(), 20000);
    assert!(rows.iter().any(|&c| c > 0.0) && rows.iter().any(|&c| c < 0.0));
}

#[test]
fn fixed_ghz_quadruples_give_definite_products() {
    for (angles, want) in [("0,0,0,0", -1.0), ("20,40,35,25", -1.0), ("180,0,0,0", 1.0), ("90,90,0,0", 1.0)] {
        let o = septenary(&["ghz", "--trials", "200", "--fixed-angles", angles, "--format", "csv"]);
        assert_eq!(code(&o), 0, "{angles}");
        assert!(corr_column(&stdout(&o)).iter().all(|c| (c - want).abs() < 1e-12), "{angles}");
    }
}

#[test]
fn seed_can_come_from_the_environment() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut cmd = Command::new(BIN);
        cmd.args(["epr", "--trials", "50", "--format", "json"]).args(extra).env_remove("SEPTENARY_SEED");
        if let Some(v) = env {
            cmd.env("SEPTENARY_SEED", v);
        }
        json(&cmd.output().unwrap())
    };
    let from_env = run(Some("123"), &[]);
    assert_eq!(from_env["seed"], 123);
    assert_eq!(from_env["seed_source"], "env");
    let flag = run(Some("123"), &["--seed", "5"]);
    assert_eq!(flag["seed"], 5);
    assert_eq!(flag["seed_source"], "flag");
    let default = run(None, &[]);
    assert_eq!(default["seed_source"], "default");
    assert_eq!(run(Some("123"), &[])["mean_corr"], from_env["mean_corr"]);
}

#[test]
fn check_reports_every_suite() {
    let o = septenary(&["check", "--samples", "2000"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["all_passed"], true);
    let names: Vec<&str> = r["suites"].as_array().unwrap().iter().map(|s| s["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["table", "associativity", "norm_composition", "conservation", "s7_closure"]);
}

#[test]
fn zero_tolerance_fails_floating_suites_only() {
    let o = septenary(&["check", "--samples", "2000", "--tol", "0"]);
    assert_eq!(code(&o), 1);
    let r = json(&o);
    assert_eq!(r["all_passed"], false);
    for s in r["suites"].as_array().unwrap() {
        assert_eq!(s["passed"], s["name"] == "table", "{s}");
    }
}

#[test]
fn one_sample_still_runs_every_suite() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let o = septenary(&["check", "--samples", "1", "--report", report.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let r: Value = serde_json::from_slice(&std::fs::read(report).unwrap()).unwrap();
    assert_eq!(r, json(&o));
    assert_eq!(r["suites"].as_array().unwrap().len(), 5);
}

#[test]
fn analytic_queries() {
    let o = septenary(&["analytic", "epr", "--theta", "60"]);
    assert_eq!(code(&o), 0);
    assert!((stdout(&o).trim().parse::<f64>().unwrap() + 0.5).abs() < 1e-15);

    let o = septenary(&["analytic", "ghz", "--thetas", "90,90,90,90", "--phis", "0,0,0,0", "--format", "json"]);
    assert_eq!(code(&o), 0);
    assert!((json(&o)["expectation"].as_f64().unwrap() + 1.0).abs() < 1e-15);

    let o = septenary(&["analytic", "chsh", "--angles", "0,90,45,-45"]);
    assert!((stdout(&o).trim().parse::<f64>().unwrap() + 2.0 * 2f64.sqrt()).abs() < 1e-12);

    assert_eq!(code(&septenary(&["analytic", "epr"])), 2);
}

#[test]
fn chsh_scan_finds_the_tsirelson_value() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("table.csv");
    let o = septenary(&["chsh", "--grid-deg", "5", "--format", "json", "--table", table.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    let max = r["max_abs_s"].as_f64().unwrap();
    assert!((max - 2.8284).abs() < 1e-4, "{max}");
    let mut rd = csv::Reader::from_path(table).unwrap();
    assert_eq!(rd.records().count(), 72 * 72);
}

#[test]
fn simulated_chsh_scan_runs() {
    let o = septenary(&["chsh", "--grid-deg", "45", "--simulated", "--trials", "20", "--format", "json"]);
    assert_eq!(code(&o), 0);
    assert!((json(&o)["max_abs_s"].as_f64().unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-9);
}
