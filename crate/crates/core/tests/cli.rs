mod common;

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ltlqm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ltlqm")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON report")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Writes a generated sample into `dir` and returns (pos, neg).
fn gen(dir: &Path, preset: &str, len: usize) -> (String, String) {
    let (pos, neg) = (dir.join(format!("{preset}.pos")), dir.join(format!("{preset}.neg")));
    let len = len.to_string();
    let o = ltlqm(&["gen", "--preset", preset, "--length", &len, "--seed", "1", "--out-pos", s(&pos), "--out-neg", s(&neg)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    (s(&pos).to_string(), s(&neg).to_string())
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&ltlqm(&["--help"])), 0);
    assert_eq!(code(&ltlqm(&["frobnicate"])), 1);
    assert_eq!(code(&ltlqm(&["mine"])), 1);
    assert_eq!(code(&ltlqm(&["gen", "--preset", "absence1", "--formula", "G p", "--length", "3", "--out-pos", "x"])), 1);
    assert_eq!(code(&ltlqm(&["mine", "--pos", "/nonexistent/file"])), 1);
}

#[test]
fn bad_inputs_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.txt");
    std::fs::write(&empty, "").unwrap();
    let o = ltlqm(&["mine", "--pos", s(&empty)]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("no traces"));

    let blank = dir.path().join("blank.txt");
    std::fs::write(&blank, "p\n\np\n").unwrap();
    let o = ltlqm(&["mine", "--pos", s(&blank)]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    let (pos, _) = gen(dir.path(), "absence1", 5);
    let prio = dir.path().join("prio.txt");
    std::fs::write(&prio, "p ten\n").unwrap();
    assert_eq!(code(&ltlqm(&["mine", "--pos", &pos, "--priority", s(&prio)])), 1);
    assert_eq!(code(&ltlqm(&["mine", "--pos", &pos, "--delta", "1.5"])), 1);
    assert_eq!(code(&ltlqm(&["gen", "--formula", "G p & F !p", "--length", "4", "--out-pos", s(&dir.path().join("x"))])), 1);
}

#[test]
fn gen_writes_the_requested_traces() {
    let dir = tempfile::tempdir().unwrap();
    let (pos, neg) = gen(dir.path(), "response1", 100);
    let count = |p: &str| std::fs::read_to_string(p).unwrap().lines().filter(|l| *l == "--").count() + 1;
    assert_eq!(count(&pos), 20);
    assert_eq!(count(&neg), 1);
    let text = std::fs::read_to_string(&pos).unwrap();
    assert_eq!(text.lines().filter(|l| *l != "--").count(), 2000);
}

#[test]
fn mine_reports_text_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let (pos, neg) = gen(dir.path(), "universality1", 50);
    let o = ltlqm(&["mine", "--pos", &pos, "--neg", &neg]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("  1. G p  score="), "{}", stdout(&o));

    let o = ltlqm(&["mine", "--pos", &pos, "--depth", "3", "--top", "3", "--json"]);
    let v = json(&o);
    assert_eq!(v["schema"], "ltlqm-report/1");
    assert_eq!(v["mode"], "mine");
    // nesting G adds evidence, so G G p outranks G p once it is reachable
    let top: Vec<&str> = v["results"].as_array().unwrap().iter().map(|r| r["formula"].as_str().unwrap()).collect();
    assert_eq!(top.len(), 3);
    assert_eq!(top[0], "G G p");
    assert!(top.contains(&"G p"));
    assert_eq!(v["params"]["delta"], "4/5");
    assert!(v.get("wall_time_sec").is_none());

    let o = ltlqm(&["mine", "--pos", &pos, "--depth", "1", "--json", "--timing"]);
    let v = json(&o);
    assert!(v["wall_time_sec"].as_f64().unwrap() >= 0.0);
    for r in v["results"].as_array().unwrap() {
        let f = ltlqm::formula::parse_formula(r["formula"].as_str().unwrap()).unwrap();
        assert_eq!(f.depth(), 0);
    }
}

#[test]
fn reported_formulas_recheck_as_consistent() {
    let dir = tempfile::tempdir().unwrap();
    let (pos, neg) = gen(dir.path(), "absence2", 30);
    let v = json(&ltlqm(&["mine", "--pos", &pos, "--neg", &neg, "--depth", "3", "--top", "20", "--json"]));
    let sample = ltlqm::sample::load_sample(Path::new(&pos), Some(Path::new(&neg))).unwrap();
    for r in v["results"].as_array().unwrap() {
        let f = ltlqm::formula::parse_formula(r["formula"].as_str().unwrap()).unwrap();
        assert!(ltlqm::formula::consistent(&f, &sample), "{f}");
    }
}

#[test]
fn level_cap_can_be_raised() {
    let dir = tempfile::tempdir().unwrap();
    let (pos, neg) = gen(dir.path(), "response1", 50);
    let o = ltlqm(&["mine", "--pos", &pos, "--neg", &neg, "--depth", "4"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap"));
    let o = ltlqm(&["mine", "--pos", &pos, "--neg", &neg, "--depth", "4", "--level-cap", "200000", "--top", "1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("  1. G (!p | F s)  score="), "{}", stdout(&o));
}

#[test]
fn different_inputs_change_the_digest() {
    let dir = tempfile::tempdir().unwrap();
    let (pos, neg) = gen(dir.path(), "existence1", 20);
    let a = json(&ltlqm(&["mine", "--pos", &pos, "--neg", &neg, "--json"]));
    let b = json(&ltlqm(&["mine", "--pos", &pos, "--json"]));
    let c = json(&ltlqm(&["mine", "--pos", &pos, "--neg", &neg, "--r", "1/2", "--json"]));
    assert_ne!(a["inputs_digest"], b["inputs_digest"]);
    assert_ne!(a["inputs_digest"], c["inputs_digest"]);
}

#[test]
fn eval_table() {
    let o = ltlqm(&["eval", "--presets", "universality1,existence1", "--lengths", "30", "--seeds", "1,2", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r["verdict"] == "exact"));
    let o = ltlqm(&["eval", "--presets", "nosuch", "--lengths", "30"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn solver_exit_codes() {
    if common::solver().is_none() {
        eprintln!("skipped: no SMT solver found");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let (pos, neg) = gen(dir.path(), "universality1", 15);
    let o = ltlqm(&["match", "--pos", &pos, "--neg", &neg, "--pattern", "G ?x", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["solver_status"], "optimal");
    assert_eq!(v["results"][0]["formula"], "G p");

    let o = ltlqm(&["match", "--pos", &pos, "--pattern", "G !?x"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("status: unsat"));

    let o = ltlqm(&["synth", "--pos", &pos, "--depth", "1", "--solver", "/nonexistent/z3"]);
    assert_eq!(code(&o), 4);

    let o = ltlqm(&["match", "--pos", &pos, "--pattern", "G X ?x"]);
    assert_eq!(code(&o), 1);

    let (pos, neg) = gen(dir.path(), "response2", 150);
    let o = ltlqm(&["synth", "--pos", &pos, "--neg", &neg, "--depth", "3", "--timeout", "1"]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("status: timeout"));
}
