use std::fs;
use std::process::Command;

use ross_spectra::cli::{exit_code, run};
use ross_spectra::plot::{emit_samples, samples_csv};
use ross_spectra::report::ReportBuilder;
use serde_json::Value;

fn args(s: &str) -> Vec<String> {
    std::iter::once("ross-spectra").chain(s.split_whitespace()).map(String::from).collect()
}

fn read_curve(path: &std::path::Path) -> Vec<(f64, f64)> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r,value"));
    lines
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect()
}

#[test]
fn verify_gap_writes_fifty_rows() {
    let out = run(args("verify-gap --k 2 --n 2 --r-min 0.1 --r-max 5 --step 0.1 --format csv"));
    assert_eq!(out.code, 0, "{}", out.stderr);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "R,lambda1,lambda2,sphere_lambda1,margin");
    assert_eq!(lines.len(), 51);
    for l in &lines[1..] {
        let margin: f64 = l.rsplit(',').next().unwrap().parse().unwrap();
        assert!(margin >= -1e-8);
    }
}

#[test]
fn ppw_annulus_reports_nonnegative_margin() {
    let out = run(args("ppw-annulus --k 2 --n 2 --r-in 0.2 --r-out 1.0"));
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["tool"]["name"], "ross-spectra");
    assert!(v["result"]["margin"].as_f64().unwrap() >= 0.0);
}

#[test]
fn domain_and_usage_errors_exit_two() {
    for bad in [
        "ball-spectrum --k 2 --n 2 --radius -1",
        "ball-spectrum --k 3 --n 2 --radius 1",
        "ball-spectrum --k 2 --n 2 --radius 1 --compact --tol 1e-6 --grid 10 --space KP --bogus",
        "radius-for-lambda1 --k 2 --n 2 --lambda 4",
        "verify-gap --k 2 --n 2 --r-min 1 --r-max 0.5 --step 0.1",
        "ppw-annulus --k 2 --n 2 --r-in 1 --r-out 1",
        "no-such-command",
    ] {
        let out = run(args(bad));
        assert_eq!(out.code, 2, "{bad}: {}", out.stdout);
        assert!(!out.stderr.is_empty());
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn failed_check_means_exit_one() {
    let mut ok = ReportBuilder::new("fine", 0.0);
    ok.observe(1.0, &[]);
    let mut bad = ReportBuilder::new("broken", 1e-8);
    bad.observe(-1.0, &[]);
    assert_eq!(exit_code(&[ok.clone().finish()]), 0);
    assert_eq!(exit_code(&[ok.finish(), bad.finish()]), 1);
}

#[test]
fn json_keys_are_sorted_and_output_is_stable() {
    let a = run(args("ball-spectrum --k 2 --n 2 --radius 1"));
    let b = run(args("ball-spectrum --k 2 --n 2 --radius 1"));
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_str(&a.stdout).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn out_flag_writes_file_and_plot_data_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("ball.json");
    let plots = dir.path().join("curves");
    let out = run(vec![
        "ross-spectra".to_string(),
        "ball-spectrum".into(),
        "--k".into(),
        "4".into(),
        "--n".into(),
        "2".into(),
        "--radius".into(),
        "1.5".into(),
        "--out".into(),
        out_path.display().to_string(),
        "--plot-data".into(),
        plots.display().to_string(),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(v["command"], "ball-spectrum");
    let g1 = read_curve(&plots.join("g1.csv"));
    assert!(g1.len() > 100);
    assert!(g1.iter().all(|&(_, v)| v >= 0.0));
}

#[test]
fn appendix_curves_show_positivity_and_the_root() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(vec![
        "ross-spectra".to_string(),
        "verify-appendix".into(),
        "--k".into(),
        "2".into(),
        "--n".into(),
        "2".into(),
        "--grid".into(),
        "350".into(),
        "--plot-data".into(),
        dir.path().display().to_string(),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let g = read_curve(&dir.path().join("group4_g.csv"));
    assert_eq!(g.len(), 351);
    assert!(g.iter().all(|&(_, v)| v > 0.0));
    let cross = read_curve(&dir.path().join("a1b1_cross_b2.csv"));
    let changes: Vec<f64> = cross.windows(2).filter(|w| (w[0].1 > 0.0) != (w[1].1 > 0.0)).map(|w| w[1].0).collect();
    assert_eq!(changes.len(), 1, "{changes:?}");
    assert!((changes[0] - 1.57).abs() < 0.05);
}

#[test]
fn empty_curve_is_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.csv");
    emit_samples(&[], &path).unwrap();
    assert_eq!(fs::read_to_string(&path).unwrap(), "r,value\n");
    assert_eq!(samples_csv(&[]), "r,value\n");
    assert!(emit_samples(&[(1.0, f64::NAN)], &path).is_err());
    assert!(emit_samples(&[(1.0, 1.0)], &dir.path().join("missing/x.csv")).is_err());
}

#[test]
fn binary_sets_exit_status() {
    let bin = env!("CARGO_BIN_EXE_ross-spectra");
    let ok = Command::new(bin).args(args("radius-for-lambda1 --k 2 --n 2 --lambda 20")[1..].iter()).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert!(v["result"]["radius"].as_f64().unwrap() > 0.0);
    let bad = Command::new(bin).args(["ball-spectrum", "--k", "2", "--n", "2", "--radius", "-1"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let threads = Command::new(bin).env("ROSS_SPECTRA_THREADS", "0").args(["suite"]).output().unwrap();
    assert_eq!(threads.status.code(), Some(2));
}
