use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn curvlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvlab")).args(args).env_remove("CURVLAB_SEED").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const PENTAGON: &str = r#"{"n":2,"points":[[1,0],[0.30901699437494745,0.9510565162951535],
[-0.8090169943749473,0.5877852522924732],[-0.8090169943749476,-0.587785252292473],
[0.30901699437494723,-0.9510565162951536]]}"#;

#[test]
fn curv_reports_catalog_values() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "c.json", r#"{"kind":"clifford_torus","N":2}"#);
    let out = curvlab(&["curv", &spec, "--points", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["curv"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-6);
    assert_eq!(v["status"], "OK");
    assert!(v["meta"]["seed"].is_u64());

    let spec = write(dir.path(), "v.json", r#"{"kind":"veronese","m":2}"#);
    let v = json(&curvlab(&["curv", &spec, "--points", "10"]));
    assert!((v["curv"].as_f64().unwrap() - 1.1547).abs() < 1e-4);
}

#[test]
fn curv_csv_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "s.json", r#"{"kind":"round_sphere","n":2,"R":2.0}"#);
    let target = dir.path().join("r.csv");
    let out = curvlab(&["curv", &spec, "--points", "5", "--format", "csv", "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(target).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("curv,"));
    let curv: f64 = lines.next().unwrap().split(',').next().unwrap().parse().unwrap();
    assert!((curv - 0.5).abs() < 1e-9);
}

#[test]
fn malformed_spec_exits_with_parse_code() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "bad.json", "{\"kind\": \"clifford_torus\",\n \"N\": }");
    let out = curvlab(&["curv", &spec]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(curvlab(&["curv", "/nonexistent/spec.json"]).status.code(), Some(1));
    assert_eq!(curvlab(&["curv", &spec, "--bogus"]).status.code(), Some(1));
}

#[test]
fn identical_seed_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "c.json", r#"{"kind":"clifford_torus","N":4}"#);
    let args = ["curv", &spec, "--points", "3", "--directions", "2000", "--seed", "7", "--no-meta"];
    let a = curvlab(&args);
    let b = curvlab(&args);
    assert_eq!(a.stdout, b.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_curvlab"))
        .args(["curv", &spec, "--points", "3", "--directions", "2000", "--no-meta"])
        .env("CURVLAB_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(a.stdout, env.stdout);
}

#[test]
fn design_verify_and_torus() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "pentagon.json", PENTAGON);
    let out = curvlab(&["design", "verify", &file]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["ok"], true);

    let square = write(dir.path(), "square.json", r#"{"n":2,"points":[[1,0],[0,1],[-1,0],[0,-1]]}"#);
    assert_eq!(curvlab(&["design", "verify", &square]).status.code(), Some(5));

    let out = curvlab(&["design", "torus", &file, "--curv", "--points", "10"]);
    assert_eq!(out.status.code(), Some(0));
    assert!((json(&out)["curv"].as_f64().unwrap() - 1.5f64.sqrt()).abs() < 1e-6);
    assert_eq!(curvlab(&["design", "torus", &square]).status.code(), Some(5));
}

#[test]
fn hilbert_design_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h2.json");
    let out = curvlab(&["design", "hilbert", "--n", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["height"], 2);
    let v = json(&curvlab(&["design", "verify", path.to_str().unwrap()]));
    assert_eq!((v["ok"].clone(), v["exact"].clone(), v["residual"].clone()), (Value::Bool(true), Value::Bool(true), "0".into()));

    let out = curvlab(&["design", "hilbert", "--n", "2", "--height-max", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("residual"));
}

#[test]
fn optimize_finds_a_pentagon() {
    let out = curvlab(&["design", "optimize", "--n", "2", "--count", "5", "--restarts", "4", "--iters", "5000"]);
    assert_eq!(out.status.code(), Some(0));
    let f = json(&out);
    assert_eq!(f["points"].as_array().unwrap().len(), 5);
}

#[test]
fn curve_checks() {
    let dir = tempfile::tempdir().unwrap();
    let square = write(dir.path(), "sq.json", r#"{"closed":true,"vertices":[[0,0,0],[1,0,0],[1,1,0],[0,1,0]]}"#);
    let v = json(&curvlab(&["curve", "fenchel", &square]));
    assert_eq!(v["curves"][0]["convex_planar"], true);
    assert!((v["curves"][0]["total"].as_f64().unwrap() - std::f64::consts::TAU).abs() < 1e-12);

    let open = write(dir.path(), "open.csv", "x,y\n0,0\n1,0\n1,1\n");
    assert_eq!(curvlab(&["curve", "fenchel", &open]).status.code(), Some(4));
    assert_eq!(curvlab(&["curve", "fenchel", &open, "--closed"]).status.code(), Some(0));

    let out = curvlab(&["curve", "fenchel", "--random", "200", "--dim", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["count"], 200);

    let out = curvlab(&["curve", "arm", "--random", "100"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["min_slack"].as_f64().unwrap() >= -1e-9);

    assert_eq!(curvlab(&["curve", "bow", "--random", "20", "--radius", "1.5"]).status.code(), Some(0));
    // a unit circle arc is too curved for R = 10
    let arc: Vec<String> = (0..50).map(|i| {
        let t = i as f64 * 0.02;
        format!("{},{}", t.sin(), 1.0 - t.cos())
    }).collect();
    let arc = write(dir.path(), "arc.csv", &arc.join("\n"));
    assert_eq!(curvlab(&["curve", "bow", &arc, "--radius", "10"]).status.code(), Some(4));
    assert_eq!(curvlab(&["curve", "bow", &arc, "--radius", "1", "--tol", "1e-3"]).status.code(), Some(0));

    let out = curvlab(&["curve", "crofton", "--circle", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["rel_err"].as_f64().unwrap() < 0.03);
    assert_eq!(curvlab(&["curve", "crofton", &open]).status.code(), Some(4));
}

#[test]
fn bounds_report() {
    let out = curvlab(&["bounds", "report", "--n-min", "1", "--n-max", "16"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("n,ambient,side,label,value,source_tag"));
    assert!(text.contains(",upper,clifford,"));
    let out = curvlab(&["bounds", "report", "--n-max", "4", "--format", "json", "--no-meta"]);
    assert_eq!(json(&out)["violations"].as_array().unwrap().len(), 0);
    assert_eq!(curvlab(&["bounds", "report", "--n-max", "65"]).status.code(), Some(1));
}

#[test]
fn verify_paper_subset() {
    let dir = tempfile::tempdir().unwrap();
    let out = curvlab(&["verify-paper", "--only", "bessel-bounds", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<Value> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert!(lines.len() >= 5);
    for l in &lines {
        assert_eq!(l["pass"], true, "{l}");
        assert!(l["check_id"].as_str().unwrap().starts_with("bessel-bounds/"));
        for key in ["expected", "got", "tol"] {
            assert!(l.get(key).is_some());
        }
    }
    let saved = std::fs::read_to_string(dir.path().join("verify.jsonl")).unwrap();
    assert_eq!(saved.lines().count(), lines.len());
    assert_eq!(curvlab(&["verify-paper", "--only", "nope"]).status.code(), Some(1));
}
