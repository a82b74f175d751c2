use std::fs;
use std::process::{Command, Output};

use orlicz_core::suite::Report;

fn orlicz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orlicz")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn passing_check_exits_zero() {
    let o = orlicz(&["run", "--checks", "distance_axioms,exact_tail"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r: Report = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.summary.total, 2);
    assert!(r.all_passed());
}

#[test]
fn csv_report_has_header_and_rows() {
    let o = orlicz(&["run", "--checks", "young_validity", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("check_id,paper_ref,computed,oracle,tolerance,verdict"));
    let row = lines.next().unwrap();
    assert!(row.starts_with("young_validity,"));
    assert!(row.ends_with(",pass"));
}

#[test]
fn unknown_check_is_a_config_error() {
    let o = orlicz(&["run", "--checks", "bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
}

#[test]
fn malformed_config_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(&cfg, r#"{"alpha": 0.5, "nonsense": 1}"#).unwrap();
    let o = orlicz(&["run", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    fs::write(&cfg, r#"{"alpha": 1.5}"#).unwrap();
    assert_eq!(orlicz(&["run", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn missing_config_file_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = orlicz(&["run", dir.path().join("absent.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn impossible_tolerance_fails() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(&cfg, r#"{"checks": ["eq19"], "tolerances": {"eq19_slope": 1e-6}, "format": "csv"}"#).unwrap();
    let o = orlicz(&["run", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).lines().nth(1).unwrap().ends_with(",fail"));
}

#[test]
fn report_written_to_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = orlicz(&["run", "--checks", "distance_axioms", "--format", "csv", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 2);
}

#[test]
fn curves_have_expected_rows() {
    for (name, rows) in [("sup_tail", 31), ("sup_lp", 8), ("eq22_integral", 11)] {
        let o = orlicz(&["curve", name]);
        assert_eq!(o.status.code(), Some(0), "{name}");
        let text = stdout(&o);
        assert_eq!(text.lines().next(), Some("abscissa,value"));
        assert_eq!(text.lines().count(), rows + 1, "{name}");
    }
    assert_eq!(orlicz(&["curve", "nope"]).status.code(), Some(2));
}

#[test]
fn checks_lists_every_id() {
    let o = orlicz(&["checks"]);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 21);
    assert!(text.lines().any(|l| l == "mc_moments"));
}

#[test]
fn seed_override_is_deterministic() {
    let a = orlicz(&["run", "--checks", "mc_symmetrization", "--seed", "7"]);
    let b = orlicz(&["run", "--checks", "mc_symmetrization", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
}
