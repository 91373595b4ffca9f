use g2heights::constants::FrozenConstants;
use g2heights::family::count_family;
use g2heights::Execution;
use std::path::Path;
use std::process::{Command, Output};

fn g2h(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_g2h"))
        .arg("--output-dir")
        .arg(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn records(path: &Path) -> Vec<serde_json::Value> {
    std::fs::read_to_string(path).unwrap().lines().skip(1).map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn enumerate_matches_family_count_and_resumes() {
    let d = tempfile::tempdir().unwrap();
    assert!(g2h(d.path(), &["--T", "1", "enumerate"]).status.success());
    let f = d.path().join("curves.jsonl");
    assert_eq!(records(&f).len() as u64, count_family(1.0, Execution::Sequential).1);

    let e = tempfile::tempdir().unwrap();
    assert!(g2h(e.path(), &["--T", "0.5", "enumerate"]).status.success());
    assert_eq!(std::fs::read_to_string(e.path().join("curves.jsonl")).unwrap().lines().count(), 1);

    // Interrupt a T = 2 run after a few hundred lines, with a torn last line.
    let g = tempfile::tempdir().unwrap();
    assert!(g2h(g.path(), &["--T", "2", "enumerate"]).status.success());
    let full = std::fs::read_to_string(g.path().join("curves.jsonl")).unwrap();
    assert_eq!(full.lines().count() as u64 - 1, count_family(2.0, Execution::Sequential).1);
    let cut: String = full.lines().take(300).map(|l| format!("{l}\n")).collect::<String>() + "{\"a\":[\"1";
    std::fs::write(g.path().join("curves.jsonl"), cut).unwrap();
    assert!(g2h(g.path(), &["--T", "2", "enumerate"]).status.success());
    assert_eq!(std::fs::read_to_string(g.path().join("curves.jsonl")).unwrap(), full);
}

#[test]
fn survey_is_deterministic_and_sees_known_points() {
    let d = tempfile::tempdir().unwrap();
    assert!(g2h(d.path(), &["--T", "1", "--e-max", "2", "--s-max", "20", "survey"]).status.success());
    let first = std::fs::read(d.path().join("summary.csv")).unwrap();
    let lines = std::fs::read(d.path().join("survey.jsonl")).unwrap();
    assert!(g2h(d.path(), &["--T", "1", "--e-max", "2", "--s-max", "20", "survey"]).status.success());
    assert_eq!(std::fs::read(d.path().join("summary.csv")).unwrap(), first);
    assert_eq!(std::fs::read(d.path().join("survey.jsonl")).unwrap(), lines);

    let rows = records(&d.path().join("survey.jsonl"));
    let x5 = rows.iter().find(|r| r["a"] == serde_json::json!(["0", "0", "0", "1"])).unwrap();
    assert!(x5["points"].as_u64().unwrap() >= 4);
    let csv = String::from_utf8(first).unwrap();
    assert!(csv.starts_with("# config_hash="));
    let avg: f64 = csv.lines().nth(2).unwrap().split(',').nth(2).unwrap().parse().unwrap();
    assert!(avg >= 1.0);
}

#[test]
fn verify_reports_and_exit_codes() {
    let d = tempfile::tempdir().unwrap();
    let ok = g2h(d.path(), &["--theta-enabled", "verify", "--curve", "0,0,0,1"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.path().join("verify_report.json")).unwrap()).unwrap();
    let secs = report["sections"].as_array().unwrap();
    assert!(secs.iter().any(|s| s["name"] == "gap_pairs" && s["status"] == "vacuous"));
    assert!(report["config_hash"].is_string());

    let bad = g2h(d.path(), &["verify", "--curve", "0,0,0,1", "--expect-checksums", "[[23,-80,208],[40,80,392],[32,-208,376],[41,48,425]]"]);
    assert_eq!(bad.status.code(), Some(2));

    let exhausted = g2h(d.path(), &["--target-error", "1e-300", "heights", "--curve", "0,0,-1,1"]);
    assert_eq!(exhausted.status.code(), Some(3), "{}", String::from_utf8_lossy(&exhausted.stderr));
}

#[test]
fn calibrate_needs_a_corpus_and_writes_valid_constants() {
    let d = tempfile::tempdir().unwrap();
    let missing = g2h(d.path(), &["calibrate"]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("not found"));

    assert!(g2h(d.path(), &["--T", "1", "enumerate"]).status.success());
    assert!(g2h(d.path(), &["calibrate", "--corpus-size", "2"]).status.success());
    let c: FrozenConstants = serde_json::from_str(&std::fs::read_to_string(d.path().join("frozen_constants.json")).unwrap()).unwrap();
    assert!(c.c_xi > 0.0 && c.c_arch > 0.0 && c.i3_ratio > 0.0 && !c.provenance.is_empty());
    assert!(d.path().join("riemann_baseline.json").exists());
}

#[test]
fn packing_and_gap_run() {
    let d = tempfile::tempdir().unwrap();
    let out = g2h(d.path(), &["packing"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("1.887") && text.contains("0.7406"));
    let gap = g2h(d.path(), &["--e-max", "2", "--s-max", "30", "gap", "--curve=-1,0,0,1"]);
    assert_eq!(gap.status.code(), Some(0));
    assert!(d.path().join("gap_report.json").exists());
}
