use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn pursuit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pursuit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = pursuit(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn solve_document_shape() {
    let doc = json(&["solve", "--family", "cycle:4"]);
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["command"], "solve");
    assert_eq!(doc["params"]["family"], "cycle:4");
    assert_eq!(doc["results"]["verdict"], "KillerWin");
    assert_eq!(json(&["solve", "--g6", "Bw"])["results"]["verdict"], "CopWin");
}

#[test]
fn gambler_time_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("p2.el");
    let dist = dir.path().join("half.json");
    fs::write(&graph, "2 1\n0 1\n").unwrap();
    fs::write(&dist, r#"{"p": [0.5, 0.5]}"#).unwrap();
    let doc = json(&["gambler-time", "--graph", graph.to_str().unwrap(), "--dist", dist.to_str().unwrap()]);
    assert_eq!(doc["results"]["values"], serde_json::json!([2.0, 2.0]));

    let delays = dir.path().join("delays.txt");
    fs::write(&delays, "0 1 3\n").unwrap();
    let doc = json(&[
        "gambler-time",
        "--graph",
        graph.to_str().unwrap(),
        "--dist",
        dist.to_str().unwrap(),
        "--delays",
        delays.to_str().unwrap(),
    ]);
    assert_eq!(doc["results"]["values"], serde_json::json!([2.0, 2.0]));
}

#[test]
fn evade_and_multicop() {
    let dir = tempfile::tempdir().unwrap();
    let dist = dir.path().join("d.txt");
    fs::write(&dist, "0.5\n0.5\n").unwrap();
    let doc = json(&["evade", "--family", "path:2", "--dist", dist.to_str().unwrap(), "--m", "3"]);
    assert_eq!(doc["results"]["values"], serde_json::json!([0.125, 0.125]));

    let layers = dir.path().join("layers.json");
    fs::write(&layers, r#"{"layers": [[0.0, 1.0], [1.0, 0.0]]}"#).unwrap();
    let doc = json(&["evade", "--family", "path:2", "--dist", layers.to_str().unwrap(), "--m", "2"]);
    assert_eq!(doc["results"]["values"][0], 0.0);

    let uniform = dir.path().join("u.json");
    fs::write(&uniform, r#"{"p": [0.25, 0.25, 0.25, 0.25]}"#).unwrap();
    let doc = json(&["multicop", "--family", "star:3", "--dist", uniform.to_str().unwrap(), "--cops", "2"]);
    let states = doc["results"]["states"].as_array().unwrap();
    assert_eq!(states.len(), 16);
    assert_eq!(states[0]["cops"], serde_json::json!([0, 0]));
    assert!((states[0]["value"].as_f64().unwrap() - 2.5).abs() < 1e-12);
}

#[test]
fn random_killer_with_given_distribution() {
    let dir = tempfile::tempdir().unwrap();
    let dist = dir.path().join("d.json");
    fs::write(&dist, r#"{"p": [0.5, 0.5]}"#).unwrap();
    let doc = json(&["random-killer", "--family", "path:2", "--dist", dist.to_str().unwrap()]);
    assert_eq!(doc["results"]["game_value"], 0.5);
    assert_eq!(doc["results"]["outcome"]["lose"], 0.5);
}

#[test]
fn csv_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("edges.csv");
    let status = pursuit(&["generate", "--family", "path:3", "--format", "csv", "--out", out.to_str().unwrap()]);
    assert!(status.status.success());
    assert_eq!(fs::read_to_string(&out).unwrap(), "u,v\n0,1\n1,2\n");
}

#[test]
fn experiments_are_reproducible() {
    let args = ["random-experiment", "--n", "8", "--c", "0.5", "--samples", "20", "--seed", "3"];
    let first = pursuit(&args);
    let second = pursuit(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let doc: Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(doc["results"]["cases"].as_array().unwrap().len(), 20);
    assert_eq!(json(&["enumerate", "--n", "4"])["results"]["checks"][0]["passed"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(pursuit(&["solve", "--g6", "B"]).status.code(), Some(2));
    assert_eq!(pursuit(&["solve", "--family", "nonsense:1"]).status.code(), Some(2));
    assert_eq!(pursuit(&["solve"]).status.code(), Some(2));
    assert_eq!(pursuit(&["enumerate", "--n", "9"]).status.code(), Some(2));
    // an isolated vertex leaves the forced-move game undefined
    assert_eq!(pursuit(&["solve", "--g6", "B_"]).status.code(), Some(3));
}
