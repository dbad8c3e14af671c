use std::process::Command;

use modlie::report::Report;

fn modlie(args: &[&str]) -> (i32, Vec<Report>) {
    let out = Command::new(env!("CARGO_BIN_EXE_modlie")).args(args).env_remove("MODLIE_SEED").output().unwrap();
    let reports = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| Report::from_json_line(l).expect("every stdout line is a report"))
        .collect();
    (out.status.code().unwrap(), reports)
}

#[test]
fn simples_for_sl2() {
    let (code, reports) = modlie(&["simples", "--type", "A1", "--p", "5", "--chi", "1,1", "--lambda", "0", "--seed", "7"]);
    assert_eq!(code, 0);
    assert!(reports.iter().all(|r| r.passed() && r.seed == 7));
    assert_eq!(reports[0].outputs["count"], 2);
}

#[test]
fn springer_poincare() {
    let (code, reports) = modlie(&["springer", "--partition", "2,1"]);
    assert_eq!(code, 0);
    assert_eq!(reports[0].outputs["total"], 3);
}

#[test]
fn translation_expectations() {
    let base = ["translate", "--type", "A1", "--p", "5", "--chi", "1,1", "--lambda", "0", "--to", "3"];
    let (code, _) = modlie(&[&base[..], &["--expect-dim", "5"]].concat());
    assert_eq!(code, 0);
    let (code, reports) = modlie(&[&base[..], &["--expect-dim", "6"]].concat());
    assert_eq!(code, 1);
    assert!(!reports[0].passed());
}

#[test]
fn usage_errors() {
    assert_eq!(modlie(&["simples", "--p", "2", "--chi", "1,1", "--lambda", "0"]).0, 2);
    assert_eq!(modlie(&["simples", "--p", "6", "--chi", "1,1", "--lambda", "0"]).0, 2);
    assert_eq!(modlie(&["simples", "--p", "5", "--chi", "1,1,1", "--lambda", "0"]).0, 2);
    assert_eq!(modlie(&["bogus"]).0, 2);
}

#[test]
fn seed_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_modlie"))
        .args(["weylalg", "--n", "1", "--p", "3", "--samples", "20"])
        .env("MODLIE_SEED", "41")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let line = String::from_utf8(out.stdout).unwrap();
    let r = Report::from_json_line(line.lines().next().unwrap()).unwrap();
    assert_eq!(r.seed, 41);
}

#[test]
fn output_file_appends() {
    let dir = std::env::temp_dir().join(format!("modlie-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.jsonl");
    let p = path.to_str().unwrap();
    for _ in 0..2 {
        assert_eq!(modlie(&["--out", p, "springer", "--partition", "3"]).0, 0);
    }
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 2);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn deterministic_apart_from_timing() {
    let run = || {
        let (_, mut r) = modlie(&["frobid", "--type", "A2", "--p", "5", "--radius", "1", "--seed", "3"]);
        r.iter_mut().for_each(|r| r.elapsed_ms = 0);
        r
    };
    assert_eq!(run(), run());
}
