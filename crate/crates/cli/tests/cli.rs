use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const EX5: &str = "# five voters, five candidates\n5 5\n1 2 3 4 5\n1 2 3 4 5\n4 1 5 3 2\n4 1 5 3 2\n3 5 2 4 1\n";

fn greedyvote(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_greedyvote")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn ex5(dir: &TempDir) -> String {
    write(dir, "ex5.toc", EX5).to_str().unwrap().to_string()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn exact_dodgson_of_c() {
    let dir = TempDir::new().unwrap();
    let out = greedyvote(&["score", &ex5(&dir), "--candidate", "3", "--rule", "dodgson", "--mode", "exact"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "4\n");
}

#[test]
fn greedy_witness_is_printed() {
    let dir = TempDir::new().unwrap();
    let out = greedyvote(&["score", &ex5(&dir), "--candidate", "3", "--witness"]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("4"));
    let witness = greedyvote::parse_witness(&lines.collect::<Vec<_>>().join("\n")).unwrap();
    assert_eq!(witness.len(), 4);
}

#[test]
fn json_report() {
    let dir = TempDir::new().unwrap();
    let out = greedyvote(&["score", &ex5(&dir), "--candidate", "4", "--rule", "young", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["score"], 2);
    assert_eq!(v["engine"], "queue");
    assert_eq!(v["witness"].as_array().unwrap().len(), 2);
}

#[test]
fn young_exact_winners() {
    // a and d both have exact Young score 2
    let dir = TempDir::new().unwrap();
    let file = ex5(&dir);
    let out = greedyvote(&["winner", &file, "--rule", "young", "--mode", "exact"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "1 4\n");
    let out = greedyvote(&["winner", &file, "--rule", "young", "--mode", "exact", "--tiebreak", "lex"]);
    assert_eq!(stdout(&out), "1\n");
}

#[test]
fn tideman_weak() {
    let dir = TempDir::new().unwrap();
    let out = greedyvote(&["tideman", &ex5(&dir), "--candidate", "3", "--convention", "weak"]);
    assert_eq!(stdout(&out), "3\n");
}

#[test]
fn rank_lists_ties_and_unscorable_last() {
    let dir = TempDir::new().unwrap();
    let out = greedyvote(&["rank", &ex5(&dir), "--rule", "young"]);
    assert_eq!(stdout(&out), "2\t1 4\n4\t3\nUNSCORABLE\t2 5\n");
}

#[test]
fn compare_json() {
    let dir = TempDir::new().unwrap();
    let out = greedyvote(&["compare", &ex5(&dir), "--rule", "dodgson", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["winners_equal"], true);
    assert_eq!(v["max_ratio"], 1.0);
}

#[test]
fn soc_input() {
    let dir = TempDir::new().unwrap();
    let file = write(
        &dir,
        "ex5.soc",
        "# NUMBER ALTERNATIVES: 5\n# NUMBER VOTERS: 5\n2: 1,2,3,4,5\n2: 4,1,5,3,2\n1: 3,5,2,4,1\n",
    );
    let out = greedyvote(&["score", s(&file), "--candidate", "3", "--mode", "exact"]);
    assert_eq!(stdout(&out), "4\n");
}

#[test]
fn unscorable_exit_code() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "edge.toc", "2 3\n2 1\n2 1\n2 1\n");
    let out = greedyvote(&["score", s(&file), "--candidate", "1", "--rule", "young"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stdout(&out), "UNSCORABLE\n");
    let out = greedyvote(&["score", s(&file), "--candidate", "1", "--rule", "young", "--convention", "weak"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn errors_are_json_on_stderr() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.toc", "3 2\n1 2 3\n1 2\n");
    let out = greedyvote(&["score", s(&bad), "--candidate", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(v["error"]["kind"], "parse");
    assert!(v["error"]["message"].as_str().unwrap().contains("line 3"));

    let out = greedyvote(&["score", &ex5(&dir), "--candidate", "9"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(v["error"]["kind"], "unknown_candidate");
}

#[test]
fn usage_errors() {
    let dir = TempDir::new().unwrap();
    let file = ex5(&dir);
    let unknown = greedyvote(&["score", &file, "--candidate", "1", "--bogus"]);
    assert_eq!(unknown.status.code(), Some(2));
    let conflict = greedyvote(&["score", &file, "--candidate", "1", "--mode", "exact", "--engine", "naive"]);
    assert_eq!(conflict.status.code(), Some(2));
    let bad_rule = greedyvote(&["rank", &file, "--rule", "borda"]);
    assert_eq!(bad_rule.status.code(), Some(2));
}

#[test]
fn gen_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.toc");
    greedyvote(&["gen", "--m", "4", "--n", "6", "--seed", "11", "--out", s(&a)]);
    let b = greedyvote(&["gen", "--m", "4", "--n", "6", "--seed", "11"]);
    assert_eq!(fs::read_to_string(&a).unwrap(), stdout(&b));
    assert!(stdout(&b).starts_with("4 6\n"));
}

#[test]
fn bench_writes_csv_and_summary() {
    let dir = TempDir::new().unwrap();
    ex5(&dir);
    let config = write(
        &dir,
        "bench.toml",
        "rule = \"dodgson\"\nprofiles = [\"ex5.toc\"]\ncsv = \"out.csv\"\nsummary = \"summary.json\"\n",
    );
    let out = greedyvote(&["bench", "--config", s(&config)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("out.csv")).unwrap();
    assert_eq!(csv.lines().count(), 6);
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["bound_violations"], 0);
    assert_eq!(summary["max_ratio"], 1.0);
}
