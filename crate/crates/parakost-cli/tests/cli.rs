use std::path::Path;
use std::process::{Command, Output};

use parakost::feff::{path_f_module, EmbeddingMaps, Source};
use parakost::gla::Mat;
use parakost::kostant::{ChainContext, Cochain};
use parakost::ratlin::{Rational, SparseVec};
use serde_json::{json, Value};

fn parakost(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parakost")).args(args).output().expect("binary runs")
}

fn to_json(c: &Cochain) -> Value {
    let g = c.context().algebra();
    let m = g.m();
    let values: Vec<Value> = c
        .context()
        .tuples(c.degree())
        .iter()
        .zip(c.values())
        .filter(|(_, x)| !x.is_zero())
        .map(|(t, x)| {
            let rows: Vec<Vec<String>> = (0..m).map(|r| (0..m).map(|col| x.get(r, col).to_string()).collect()).collect();
            json!({"indices": t, "matrix": rows})
        })
        .collect();
    json!({"algebra": {"type": "sl", "m": m}, "grading": {"blocks": g.blocks()}, "degree": c.degree(), "values": values})
}

fn from_json(v: &Value) -> Cochain {
    let blocks: Vec<usize> = serde_json::from_value(v["grading"]["blocks"].clone()).unwrap();
    let m: usize = blocks.iter().sum();
    let ctx = ChainContext::new(&blocks);
    let mut c = Cochain::zero(&ctx, v["degree"].as_u64().unwrap() as usize);
    for e in v["values"].as_array().unwrap() {
        let ix: Vec<usize> = serde_json::from_value(e["indices"].clone()).unwrap();
        let mut x = Mat::zeros(m, m);
        for (r, row) in e["matrix"].as_array().unwrap().iter().enumerate() {
            for (col, s) in row.as_array().unwrap().iter().enumerate() {
                x.set(r, col, s.as_str().unwrap().parse::<Rational>().unwrap());
            }
        }
        c.set(&ix, x);
    }
    c
}

fn write(path: &Path, v: &Value) {
    std::fs::write(path, serde_json::to_string_pretty(v).unwrap()).unwrap();
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--check", "ag-costar", "--n-min", "3", "--n-max", "3", "--trials", "5", "--seed", "7"];
    let a = parakost(&args);
    let b = parakost(&[&args[..], &["--jobs", "1"]].concat());
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let line: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(line["check"], "ag-costar");
    assert_eq!(line["status"], "PASS");
    assert_eq!(line["details"]["samples"], "5");
    assert!(line["wall_time_ms"].is_null());
}

#[test]
fn verify_reports_one_line_per_cell() {
    let o = parakost(&["verify", "--check", "hodge", "--n-min", "2", "--n-max", "3", "--timings"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let lines: Vec<Value> =
        String::from_utf8(o.stdout).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["details"]["path.total"], "150");
    assert!(lines[1]["wall_time_ms"].is_u64());
}

#[test]
fn verify_text_table() {
    let o = parakost(&["verify", "--check", "jacobi", "--n-min", "2", "--n-max", "2", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    let out = String::from_utf8(o.stdout).unwrap();
    assert!(out.lines().next().unwrap().starts_with("check"));
    assert!(out.contains("PASS"));
}

#[test]
fn failing_suite_exits_one() {
    let o = parakost(&["verify", "--check", "memberships", "--n-min", "2", "--n-max", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let line: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(line["status"], "FAIL");
    assert!(line["counterexample"].is_string());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(parakost(&["verify", "--check", "nope"]).status.code(), Some(2));
    assert_eq!(parakost(&["verify", "--check", "hodge", "--n-min", "4", "--n-max", "3"]).status.code(), Some(2));
    assert_eq!(parakost(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn costar_of_zero_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let (input, output) = (dir.path().join("in.json"), dir.path().join("out.json"));
    write(&input, &json!({"algebra": {"type": "sl", "m": 5}, "grading": {"blocks": [2, 3]}, "degree": 2, "values": []}));
    let o = parakost(&["costar", "--input", input.to_str().unwrap(), "--output", output.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = read(&output);
    assert_eq!(out["degree"], 1);
    assert_eq!(out["values"], json!([]));
}

#[test]
fn costar_of_simple_element() {
    // Z_0 ∧ Z_1 ⊗ A with Z_0 = E_12, Z_1 = E_13, A = E_11 − E_22 (1-based);
    // stored on the increasing tuple with the 1/2 normalization.
    let dir = tempfile::tempdir().unwrap();
    let (input, output) = (dir.path().join("in.json"), dir.path().join("out.json"));
    let z = || vec!["0"; 4];
    let a = vec![vec!["1/2", "0", "0", "0"], vec!["0", "-1/2", "0", "0"], z(), z()];
    write(
        &input,
        &json!({"algebra": {"type": "sl", "m": 4}, "grading": {"blocks": [1, 1, 2]}, "degree": 2,
                "values": [{"indices": [0, 1], "matrix": a}]}),
    );
    let o = parakost(&["costar", "--input", input.to_str().unwrap(), "--output", output.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let row = |v: [&'static str; 4]| v.to_vec();
    let want = json!([
        {"indices": [0], "matrix": [row(["0", "0", "-1", "0"]), z(), z(), z()]},
        {"indices": [1], "matrix": [row(["0", "2", "0", "0"]), z(), z(), z()]},
    ]);
    assert_eq!(read(&output)["values"], want);
}

#[test]
fn costar_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let (input, output) = (dir.path().join("in.json"), dir.path().join("out.json"));
    let run = |v: &str| {
        std::fs::write(&input, v).unwrap();
        parakost(&["costar", "--input", input.to_str().unwrap(), "--output", output.to_str().unwrap()])
    };

    let o = run(r#"{"algebra": {"type": "sl", "m": 3}, "grading": {"blocks": [1, 2]}, "degree": 0, "values": []}"#);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("degree"));

    let o = run("{\n\"algebra\": {\"type\": \"sl\", \"m\": 4},\n\"grading\": {\"blocks\": [1, 2]},\n\"degree\": 1, \"values\": []}");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("in.json:3:"), "{}", stderr(&o));

    let o = run("{\"algebra\": {\"type\": \"sl\", \"m\": 3}, \"grading\": {\"blocks\": [1, 2]}, \"degree\": 1, \"values\": [\n\
                 {\"indices\": [5], \"matrix\": [[\"0\",\"0\",\"0\"],[\"0\",\"0\",\"0\"],[\"0\",\"0\",\"0\"]]}]}");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("in.json:2:") && stderr(&o).contains("out of range"), "{}", stderr(&o));

    let o = run("{\"algebra\": {\"type\": \"sl\", \"m\": 3}, \"grading\": {\"blocks\": [1, 2]}, \"degree\": 2, \"values\": [\n\
                 {\"indices\": [1, 0], \"matrix\": [[\"0\",\"0\",\"0\"],[\"0\",\"0\",\"0\"],[\"0\",\"0\",\"0\"]]}]}");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("increasing"));

    let o = run("{\"algebra\": {\"type\": \"sl\", \"m\": 3}, \"grading\": {\"blocks\": [1, 2]}, \"degree\": 1, \"values\": [\n\
                 {\"indices\": [1], \"matrix\": [[\"1/0\",\"0\",\"0\"],[\"0\",\"0\",\"0\"],[\"0\",\"0\",\"0\"]]}]}");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not a rational"));

    let o = run("{ not json");
    assert_eq!(o.status.code(), Some(2));
    assert!(!output.exists());
}

#[test]
fn transfer_of_zero_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let (input, output) = (dir.path().join("in.json"), dir.path().join("out.json"));
    write(&input, &json!({"algebra": {"type": "sl", "m": 5}, "grading": {"blocks": [1, 1, 3]}, "degree": 2, "values": []}));
    let o = parakost(&["transfer", "--input", input.to_str().unwrap(), "--source", "path", "--output", output.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = read(&output);
    assert_eq!(out["grading"]["blocks"], json!([2, 4]));
    assert_eq!(out["values"], json!([]));
}

#[test]
fn transfer_rejects_grading_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let (input, output) = (dir.path().join("in.json"), dir.path().join("out.json"));
    write(&input, &json!({"algebra": {"type": "sl", "m": 5}, "grading": {"blocks": [1, 1, 3]}, "degree": 2, "values": []}));
    let o = parakost(&["transfer", "--input", input.to_str().unwrap(), "--source", "ag", "--output", output.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("grading"));
}

#[test]
fn transfer_kills_ker_pi_and_matches_library() {
    let n = 2;
    let maps = EmbeddingMaps::build(n, Source::Path).unwrap();
    let ctx = maps.source_context().clone();
    let module = path_f_module(&ctx);
    let mut phi = Cochain::zero(&ctx, 2);
    for (i, b) in module.basis_cochains(&ctx).enumerate().step_by(7) {
        phi = phi.add_scaled(&Rational::new(i as i64 + 1, 3), &b);
    }
    assert!(!phi.is_zero());

    let dir = tempfile::tempdir().unwrap();
    let (input, output) = (dir.path().join("in.json"), dir.path().join("out.json"));
    write(&input, &to_json(&phi));
    let o = parakost(&["transfer", "--input", input.to_str().unwrap(), "--source", "path", "--output", output.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let got = from_json(&read(&output));
    assert_eq!(got, maps.transfer(&phi));
    assert!(!got.is_zero());

    let tgt = maps.target_context();
    assert_eq!(maps.pi_kernel().dim(), 1);
    let k = maps.pi_kernel().basis()[0].clone();
    for j in 0..tgt.dim_q() {
        assert!(got.eval(&[k.clone(), SparseVec::unit(j)]).is_zero());
    }
}
