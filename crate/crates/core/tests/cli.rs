use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn adeg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adeg"))
        .args(args)
        .env_remove("ADEG_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn analyze_reports_every_measure() {
    let out = adeg(&["analyze", "MAJ3"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    assert_eq!(v["exact_degree"]["degree"], 3);
    assert_eq!(v["approx_degree"]["degree"], 1);
    assert_eq!(v["approx_degree"]["certified"], true);
    assert_eq!(v["sign_degree"]["degree"], 1);
    assert!((v["spectral"]["lambda"].as_f64().unwrap() - 2.0).abs() < 1e-9);
}

#[test]
fn exit_codes() {
    assert_eq!(adeg(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(adeg(&["analyze", "FOO2"]).status.code(), Some(1));
    assert_eq!(
        adeg(&["analyze", "MAJ3", "--eps", "0.3"]).status.code(),
        Some(1)
    );
    // XOR2^5 has arity 32, over the table cap.
    assert_eq!(adeg(&["analyze", "XOR2^5"]).status.code(), Some(2));
    assert_eq!(adeg(&["--help"]).status.code(), Some(0));
}

#[test]
fn dual_and_gates() {
    let v = json(&adeg(&["dual", "XOR2", "--degree", "2"]));
    assert_eq!(v["outcome"], "witness");
    assert_eq!(v["correlation"], "1/2");
    let v = json(&adeg(&["dual", "AND2", "--degree", "2", "--eps", "1/4"]));
    assert_eq!(v["outcome"], "refutation");

    let out = adeg(&["simulate-gates", "MAJ3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["circuits"].as_array().unwrap().len(), 2);
    assert_eq!(v["circuits"][0]["circuit"]["verified"], true);
    assert_eq!(adeg(&["simulate-gates", "XOR3"]).status.code(), Some(1));
}

#[test]
fn census_and_tables_to_files() {
    let dir = tempfile::tempdir().unwrap();
    let census = dir.path().join("census.csv");
    let out = adeg(&["census", "--arity", "2", "--out", census.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&census).unwrap();
    assert!(text.starts_with("# manifest: "));
    assert_eq!(text.lines().count(), 2 + 6);

    let pairs = dir.path().join("pairs.txt");
    fs::write(&pairs, "# two rows\nAND2 | XOR2\nMAJ3 | OR2\n").unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let out = adeg(&[
            "compose-table",
            "--pairs",
            pairs.to_str().unwrap(),
            "--no-runtime",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        fs::read_to_string(path).unwrap()
    };
    let a = run("a.csv");
    assert_eq!(a, run("b.csv"));
    assert!(a
        .lines()
        .nth(2)
        .unwrap()
        .starts_with("AND2,XOR2,4,2,2,1,2,2,"));
}

#[test]
fn amplify_and_majority() {
    let out = adeg(&[
        "amplify", "--outer", "AND2", "--inner", "XOR2", "--middle", "maj", "--t", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["e_mu1"], "1/1");

    let v = json(&adeg(&[
        "maj-projection",
        "--n",
        "3",
        "--base",
        "maj3",
        "--seed",
        "5",
    ]));
    assert_eq!(v["depth"], 1);
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_adeg"))
            .args(args)
            .env("ADEG_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let first = run(&["analyze", "AND2 o OR2"]);
    assert_eq!(first.status.code(), Some(0));
    let entries = fs::read_dir(dir.path()).unwrap().count();
    assert!(entries > 0);
    let second = run(&["analyze", "AND2 o OR2"]);
    assert_eq!(first.stdout, second.stdout);
    fs::write(dir.path().join("junk.json"), "{").unwrap();
    let v: Value = serde_json::from_slice(&run(&["cache", "gc"]).stdout).unwrap();
    assert_eq!(v["removed"], 1);
    assert_eq!(v["kept"], entries);
}
