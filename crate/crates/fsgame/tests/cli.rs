use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use tempfile::TempDir;

const EMPTY: &str = r#"{"worlds": ["e"], "point": "e"}"#;
const SINGLETON_OF_EMPTY: &str = r#"{"worlds": ["s", "e"], "edges": [["s", "e"]], "point": "s"}"#;
const DOUBLE: &str = r#"{"worlds": ["d", "s", "e"], "edges": [["d", "s"], ["s", "e"]], "point": "d"}"#;
// the single member of 𝔼₁: a root above the points of M_∅ and M_{∅}
const E1: &str = r#"{"worlds": ["r", "s", "e"], "edges": [["r", "e"], ["r", "s"], ["s", "e"]], "point": "r"}"#;

fn fsgame(args: &[&str]) -> Output {
    fsgame_with(args, "", &[])
}

fn fsgame_with(args: &[&str], stdin: &str, env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fsgame"));
    cmd.args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    cmd.env_remove("FSGAME_MEMO_LIMIT");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

struct Files(TempDir);

impl Files {
    fn new() -> Self {
        Files(tempfile::tempdir().unwrap())
    }

    fn write(&self, name: &str, text: &str) -> String {
        let path = self.0.path().join(name);
        fs::write(&path, text).unwrap();
        path.display().to_string()
    }

    fn dir(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }

    fn position(&self, name: &str, m: u32, k: u32, left: &[&str], right: &[&str]) -> String {
        let text = format!(r#"{{"m": {m}, "k": {k}, "left": [{}], "right": [{}]}}"#, left.join(","), right.join(","));
        self.write(name, &text)
    }

    /// Stdout of `gen` without `--out`: a JSON array of models.
    fn generated(&self, name: &str, args: &[&str]) -> String {
        let out = fsgame(args);
        assert!(out.status.success());
        self.write(name, &String::from_utf8(out.stdout).unwrap())
    }
}

#[test]
fn eval_examples() {
    let f = Files::new();
    let empty = f.write("m_empty.json", EMPTY);
    let e1 = f.write("e1.json", E1);
    assert_eq!(json(&fsgame(&["eval", &empty, "[]F"]))["holds"], true);
    assert_eq!(json(&fsgame(&["eval", &e1, "[][]F | []<>T"]))["holds"], false);
    let traced = json(&fsgame(&["eval", &e1, "<>[]F", "--trace"]));
    assert_eq!(traced["holds"], true);
    let trace = traced["trace"].as_array().unwrap();
    assert_eq!(trace.last().unwrap()["worlds"], serde_json::json!(["r", "s"]));
    assert_eq!(trace.first().unwrap()["worlds"], serde_json::json!([]));
}

#[test]
fn malformed_formula_is_an_input_error() {
    let f = Files::new();
    let empty = f.write("m_empty.json", EMPTY);
    let out = fsgame(&["eval", &empty, "[]("]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("syntax error"));
    assert!(out.stdout.is_empty());
}

#[test]
fn bad_files_are_input_errors() {
    let f = Files::new();
    let broken = f.write("broken.json", r#"{"worlds": ["a"], "point": "zz"}"#);
    assert_eq!(code(&fsgame(&["eval", &broken, "T"])), 2);
    assert_eq!(code(&fsgame(&["eval", "/nonexistent/model.json", "T"])), 2);
    assert_eq!(code(&fsgame(&["solve"])), 2);
    let unknown_prop = f.write("m_empty.json", EMPTY);
    assert_eq!(code(&fsgame(&["eval", &unknown_prop, "p"])), 2);
}

#[test]
fn bisim_examples() {
    let f = Files::new();
    let empty = f.write("m_empty.json", EMPTY);
    let single = f.write("m_single.json", SINGLETON_OF_EMPTY);
    let double = f.write("m_double.json", DOUBLE);
    let r = json(&fsgame(&["bisim", &empty, &single, "--depth", "1"]));
    assert_eq!(r["verdict"], "not 1-bisimilar");
    let r = json(&fsgame(&["bisim", &empty, &single, "--depth", "0"]));
    assert_eq!(r["verdict"], "0-bisimilar");
    let r = json(&fsgame(&["bisim", &double, &double, "--depth", "3", "--witness"]));
    assert_eq!(r["verdict"], "3-bisimilar");
    assert_eq!(r["witness"].as_array().unwrap().len(), 4);
    assert!(r["witness"][3].as_array().unwrap().contains(&serde_json::json!(["d", "d"])));
    assert_eq!(json(&fsgame(&["bisim", &single, &double]))["verdict"], "not bisimilar");
}

#[test]
fn solve_examples() {
    let f = Files::new();
    let pos = f.position("p1.json", 1, 0, &[EMPTY], &[SINGLETON_OF_EMPTY]);
    let v = json(&fsgame(&["solve", &pos]));
    assert_eq!(v["winner"], "S");
    assert_eq!(v["formula"], "[]F");
    assert_eq!((v["ms"].as_u64(), v["cs"].as_u64()), (Some(1), Some(0)));

    let pos = f.position("p2.json", 0, 2, &[EMPTY], &[SINGLETON_OF_EMPTY]);
    assert_eq!(json(&fsgame(&["solve", &pos]))["winner"], "D");

    let vv1 = f.generated("vv1.json", &["gen", "--vv", "1"]);
    let ee1 = f.generated("ee1.json", &["gen", "--ee", "1"]);
    let v = json(&fsgame(&["solve", "--left", &vv1, "--right", &ee1, "--m", "3", "--k", "0"]));
    assert_eq!(v["winner"], "D");
    assert_eq!(v["formula"], Value::Null);
    let v = json(&fsgame(&["solve", "--left", &vv1, "--right", &ee1, "--m", "4", "--k", "1", "--no-cutoff"]));
    assert_eq!(v["winner"], "S");
}

#[test]
fn budget_refusals_exit_with_one() {
    let f = Files::new();
    let vv2 = f.generated("vv2.json", &["gen", "--vv", "2"]);
    let ee2 = f.generated("ee2.json", &["gen", "--ee", "2"]);
    let args = ["solve", "--left", &vv2, "--right", &ee2, "--m", "3", "--k", "1"];
    assert_eq!(json(&fsgame(&args))["winner"], "D");
    let flag: Vec<&str> = args.iter().copied().chain(["--node-limit", "10"]).collect();
    let out = fsgame(&flag);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("limit of 10"));
    assert_eq!(code(&fsgame_with(&args, "", &[("FSGAME_MEMO_LIMIT", "10")])), 1);
    assert_eq!(code(&fsgame_with(&args, "", &[("FSGAME_MEMO_LIMIT", "lots")])), 2);
}

#[test]
fn minimal_examples() {
    let f = Files::new();
    let empty = f.write("a.json", EMPTY);
    let single = f.write("b.json", SINGLETON_OF_EMPTY);
    let r = json(&fsgame(&["minimal", &empty, &single, "--max-size", "3"]));
    let frontier = r["frontier"].as_array().unwrap();
    assert!(frontier.iter().any(|e| e["m"] == 1 && e["k"] == 0 && e["formula"] == "[]F"));
    assert!(frontier.iter().all(|e| e["m"] != 0));

    let r = json(&fsgame(&["minimal", &empty, &empty, "--max-size", "4"]));
    assert!(r["frontier"].as_array().unwrap().is_empty());

    let vv1 = f.generated("vv1.json", &["gen", "--vv", "1"]);
    let ee1 = f.generated("ee1.json", &["gen", "--ee", "1"]);
    let r = json(&fsgame(&["minimal", &vv1, &ee1, "--max-size", "5"]));
    let frontier = r["frontier"].as_array().unwrap();
    assert!(!frontier.is_empty());
    for e in frontier {
        assert!(e["k"].as_u64().unwrap() >= 1);
        let formula = e["formula"].as_str().unwrap();
        let members = fs::read_to_string(&vv1).unwrap();
        for (i, m) in serde_json::from_str::<Vec<Value>>(&members).unwrap().iter().enumerate() {
            let file = f.write(&format!("vv1_{i}.json"), &m.to_string());
            assert_eq!(json(&fsgame(&["eval", &file, formula]))["holds"], true);
        }
        let e1 = f.write("e1.json", E1);
        assert_eq!(json(&fsgame(&["eval", &e1, formula]))["holds"], false);
    }
}

#[test]
fn gen_examples() {
    let f = Files::new();
    let dir = f.dir("vv2");
    let r = json(&fsgame(&["gen", "--vv", "2", "--out", dir.to_str().unwrap()]));
    assert_eq!(r["count"], 4);
    let files: Vec<_> = fs::read_dir(&dir).unwrap().collect();
    assert_eq!(files.len(), 4);
    for file in r["files"].as_array().unwrap() {
        let path = Path::new(file.as_str().unwrap());
        assert_eq!(json(&fsgame(&["eval", path.to_str().unwrap(), "<>T & []<>T | <>T & [][]F"]))["holds"], true);
    }

    let phi = json(&fsgame(&["gen", "--phi", "1"]));
    assert_eq!(phi["size"], 17);
    assert!(phi["size_strict"].as_u64().unwrap() < 17);
    assert!(!phi["formula"].as_str().unwrap().is_empty());

    assert_eq!(json(&fsgame(&["gen", "--ee", "2"])).as_array().unwrap().len(), 6);
    assert_eq!(json(&fsgame(&["gen", "--level", "3"])).as_array().unwrap().len(), 4);

    let out = fsgame(&["gen", "--level", "5"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--allow-level-5"));
    assert_eq!(code(&fsgame(&["gen", "--ee", "4"])), 1);
    assert_eq!(code(&fsgame(&["gen", "--phi", "0"])), 2);
}

#[test]
fn experiment_smoke_and_determinism() {
    let r = fsgame(&["experiment", "--n", "1"]);
    let report = json(&r);
    assert_eq!(report["fo_size_phi"]["atoms_counted"], 17);
    assert_eq!(report["phi_separates"], true);
    assert_eq!(report["wall_ms"], Value::Null);
    for cell in report["cells"].as_array().unwrap() {
        if cell["k"] == 0 {
            assert_eq!(cell["verdict"]["winner"], "D");
        }
    }
    let frontier = report["frontier"].as_array().unwrap();
    assert!(!frontier.is_empty() && frontier.iter().all(|e| e["k"].as_u64().unwrap() >= 1));
    assert_eq!(fsgame(&["experiment", "--n", "1"]).stdout, r.stdout);
    assert_eq!(fsgame(&["experiment", "--n", "1", "--threads", "3"]).stdout, r.stdout);
    assert!(json(&fsgame(&["experiment", "--n", "1", "--timings"]))["wall_ms"].is_u64());
}

#[test]
fn experiment_grid_at_level_two_and_certificate_at_level_three() {
    let report = json(&fsgame(&["experiment", "--n", "2", "--frontier-budget", "0"]));
    let cells = report["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 8);
    for cell in cells {
        assert_eq!(cell["verdict"]["winner"], "D");
        assert_eq!(cell["certified_d"], true);
    }
    assert_eq!(report["certificate"]["chi"], 4);

    let report = json(&fsgame(&["experiment", "--n", "3"]));
    assert!(report["cells"].as_array().unwrap().is_empty());
    assert_eq!(report["certificate"]["chi"], 16);
    assert_eq!(report["certificate"]["max_k"], 3);
    assert_eq!(code(&fsgame(&["experiment", "--n", "4"])), 1);
}

#[test]
fn play_examples() {
    let f = Files::new();
    let pos = f.position("p.json", 1, 0, &[EMPTY], &[SINGLETON_OF_EMPTY]);
    let out = fsgame(&["play", &pos, "--as", "D"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.matches("S plays").count(), 1);
    assert!(text.contains("game over: S wins"));

    let vv1 = f.generated("vv1.json", &["gen", "--vv", "1"]);
    let ee1 = f.generated("ee1.json", &["gen", "--ee", "1"]);
    let models = |p: &str| fs::read_to_string(p).unwrap().trim().trim_start_matches('[').trim_end_matches(']').to_string();
    let pos = f.write("q.json", &format!(r#"{{"m": 1, "k": 0, "left": [{}], "right": [{}]}}"#, models(&vv1), models(&ee1)));
    let out = fsgame_with(&["play", &pos, "--as", "S"], "bogus\nrsucc 0\n", &[]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("try again"));
    assert!(text.contains("game over: D wins"), "{text}");

    let out = fsgame_with(&["play", &pos, "--as", "S"], "quit\n", &[]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8(out.stdout).unwrap().contains("game over: quit"));
}
