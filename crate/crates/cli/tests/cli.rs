use std::path::Path;
use std::process::{Command, Output};

use zs_toda::{execute, Report, Settings, Suite, Task, EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zs-toda")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> u8 {
    o.status.code().expect("exited normally") as u8
}

fn read_report(path: &Path) -> Report {
    Report::from_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn json_round_trip_preserves_records() {
    let cfg = Settings {
        n: Some(3),
        ..Settings::default()
    };
    let mut report = execute(Task::Verify(Suite::Tau), &cfg).unwrap();
    report.wall_time_s = Some(0.125);
    assert!(!report.records.is_empty());
    let back = Report::from_json(&report.to_json().unwrap()).unwrap();
    assert_eq!(back, report);
}

#[test]
fn numeric_report_round_trips_exactly() {
    let cfg = Settings {
        gamma: Some(vec![0.7]),
        x: Some(vec![-0.3]),
        ..Settings::default()
    };
    let report = execute(Task::Eval(zs_toda::EvalTarget::Wave), &cfg).unwrap();
    let back = Report::from_json(&report.to_json().unwrap()).unwrap();
    assert_eq!(back, report);
    assert_eq!(back.records[0].re, report.records[0].re);
}

#[test]
fn empty_report_is_valid_json() {
    let report = Report::new("verify serre", Settings::default());
    let json = report.to_json().unwrap();
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["records"].as_array().unwrap().len(), 0);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["all_pass"], true);
}

#[test]
fn wave_scan_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let o = bin(&["eval", "wave", "--n", "1", "--scan", "-2,2,9", "--format", "csv", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), EXIT_OK, "{}", String::from_utf8_lossy(&o.stderr));
    let mut rdr = csv::Reader::from_path(&out).unwrap();
    assert_eq!(rdr.headers().unwrap(), vec!["x1", "re", "im", "err"]);
    let rows: Vec<Vec<f64>> = rdr
        .records()
        .map(|r| r.unwrap().iter().map(|f| f.parse::<f64>().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 9);
    for pair in rows.windows(2) {
        assert!(pair[1][0] > pair[0][0]);
    }
    assert_eq!(rows[0][0], -2.0);
    assert_eq!(rows[8][0], 2.0);
    for r in &rows {
        assert!(r[2].abs() <= r[3], "Im {} exceeds error {}", r[2], r[3]);
    }
}

#[test]
fn rank_two_scan_has_two_position_columns() {
    let o = bin(&["eval", "wave", "--rank", "2", "--x", "0,-0.4", "--scan", "0,0.5,2", "--format", "csv"]);
    assert_eq!(code(&o), EXIT_OK);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x1,x2,re,im,err"));
    assert_eq!(lines.count(), 2);
}

#[test]
fn serre_exit_codes() {
    let o = bin(&["verify", "serre", "--n", "5"]);
    assert_eq!(code(&o), EXIT_OK);
    let report = Report::from_json(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert!(report.all_pass && !report.records.is_empty());

    let o = bin(&["verify", "serre", "--n", "2"]);
    assert_eq!(code(&o), EXIT_USAGE);
    assert!(String::from_utf8_lossy(&o.stderr).contains("outside the supported range"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&bin(&["verify", "nonsense"])), EXIT_USAGE);
    assert_eq!(code(&bin(&["eval", "wave", "--gamma", "0.7", "--x", "0,1"])), EXIT_USAGE);
    assert_eq!(code(&bin(&["eval", "wave", "--route", "sideways"])), EXIT_USAGE);
    assert_eq!(code(&bin(&["check", "a8", "--format", "xml"])), EXIT_USAGE);
    assert_eq!(code(&bin(&["eval", "wave", "--grid-L", "10.05", "--grid-step", "0.1"])), EXIT_USAGE);
    assert_eq!(code(&bin(&["check", "gustafson", "--lower", "0.3:-0.6"])), EXIT_USAGE);
}

#[test]
fn failing_checks_exit_one_with_the_record() {
    let o = bin(&["check", "toda", "--gamma", "0.7", "--x", "0.1", "--tol", "1e-20"]);
    assert_eq!(code(&o), EXIT_CHECK_FAILED);
    let report = Report::from_json(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert!(!report.all_pass);
    assert!(report.records.iter().any(|r| !r.pass));
}

#[test]
fn toda_rank_one_example() {
    let o = bin(&["check", "toda", "--rank", "1", "--gamma", "0.7", "--c", "1.0", "--x", "-0.3"]);
    assert_eq!(code(&o), EXIT_OK);
    let report = Report::from_json(&String::from_utf8(o.stdout).unwrap()).unwrap();
    let r = &report.records[0];
    assert!(r.residual.unwrap() < 1e-4);
    assert!(r.expected.contains("0.74"), "{}", r.expected);
    assert!(report.grid.is_some());
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "n = 4\nformat = \"json\"\nno_timing = true\n").unwrap();
    let out = dir.path().join("a.json");
    let o = bin(&["verify", "tau", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), EXIT_OK);
    let r = read_report(&out);
    assert_eq!(r.config.n, Some(4));
    assert_eq!(r.wall_time_s, None);

    let o = bin(&["verify", "tau", "--config", cfg.to_str().unwrap(), "--n", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), EXIT_OK);
    assert_eq!(read_report(&out).config.n, Some(3));

    std::fs::write(&cfg, "rank = 4\n").unwrap();
    assert_eq!(code(&bin(&["verify", "tau", "--config", cfg.to_str().unwrap()])), EXIT_USAGE);
}

#[test]
fn reports_are_deterministic_without_timing() {
    for args in [
        &["check", "a8", "--m", "4", "--samples", "20", "--seed", "9", "--no-timing"][..],
        &["eval", "wave", "--gamma", "0.7", "--x", "0.4", "--no-timing"][..],
    ] {
        let a = bin(args);
        let b = bin(args);
        assert_eq!(code(&a), EXIT_OK);
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn route_comparison_at_rank_two() {
    let o = bin(&["compare", "routes", "--rank", "2", "--gamma", "0.6,1.1", "--x", "0.2,-0.4"]);
    assert_eq!(code(&o), EXIT_OK, "{}", String::from_utf8_lossy(&o.stdout));
    let report = Report::from_json(&String::from_utf8(o.stdout).unwrap()).unwrap();
    let diffs: Vec<_> = report.records.iter().filter_map(|r| r.residual).collect();
    assert_eq!(diffs.len(), 3);
    assert!(diffs.iter().all(|d| *d < 1e-3));
}
