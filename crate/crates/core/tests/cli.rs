use std::path::{Path, PathBuf};
use std::process::Command;

use frameopt::io::FrameFile;
use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }
}

fn frameopt(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_frameopt"));
    cmd.args(args).env_remove("FRAMEOPT_TOL");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().unwrap();
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.json"))
        .to_string_lossy()
        .into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path: PathBuf = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn measure(report: &Value, sym: &str) -> f64 {
    report["measures"]
        .as_array()
        .unwrap()
        .iter()
        .find(|m| m["measure"] == sym)
        .unwrap()["value"]
        .as_f64()
        .unwrap()
}

#[test]
fn analyze_reports_all_measures() {
    let run = frameopt(&["analyze", &fixture("diagonal_augmented"), "--m", "1", "--measure", "all", "--dual", "canonical"], &[]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let v = run.json();
    let s10 = 10f64.sqrt();
    assert!((measure(&v, "r") - 1.0).abs() < 1e-9);
    assert!((measure(&v, "O") - s10 / 3.0).abs() < 1e-9);
    assert!((measure(&v, "A") - (s10 + 3.0) / 6.0).abs() < 1e-9);
    assert_eq!(v["pair_verdict"]["is_psod_pair"], true);
    assert_eq!(v["measures"][0]["per_pattern"][0]["pattern"], serde_json::json!([1]));

    let single = frameopt(&["analyze", &fixture("skew_triple"), "--measure", "O", "--dual", "canonical", "--m", "2"], &[]);
    assert_eq!(single.code, 0);
    assert_eq!(single.json()["measures"].as_array().unwrap().len(), 1);
}

#[test]
fn analyze_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let broken = write(dir.path(), "broken.json", "{\"dimension\": 2, \"vectors\": [");
    assert_eq!(frameopt(&["analyze", &broken, "--dual", "canonical"], &[]).code, 2);
    // no dual in the file and none requested
    assert_eq!(frameopt(&["analyze", &fixture("mercedes")], &[]).code, 2);
    assert_eq!(frameopt(&["analyze", &fixture("mercedes"), "--measure", "Q"], &[]).code, 2);
    assert_eq!(frameopt(&["analyze", "/nonexistent.json", "--dual", "canonical"], &[]).code, 2);

    // F is not its own dual
    let mut file = FrameFile::parse(&std::fs::read_to_string(fixture("mercedes")).unwrap()).unwrap();
    file.dual = Some(file.vectors.clone());
    let self_dual = write(dir.path(), "self.json", &file.to_json());
    let run = frameopt(&["analyze", &self_dual], &[]);
    assert_eq!(run.code, 3);
    assert!(run.stderr.contains("not a dual"));
    let canonical = frameopt(&["analyze", &self_dual, "--dual", "canonical"], &[]);
    assert_eq!(canonical.code, 0);
    assert!((measure(&canonical.json(), "A") - 1.0).abs() < 1e-9);
}

#[test]
fn tolerance_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let mut file = FrameFile::parse(&std::fs::read_to_string(fixture("skew_triple")).unwrap()).unwrap();
    // canonical dual of the skew triple, off by 1e-7 in one entry
    file.dual = Some(vec![
        vec![[2.0 / 3.0 + 1e-7, 0.0], [-1.0 / 3.0, 0.0]],
        vec![[-1.0 / 3.0, 0.0], [2.0 / 3.0, 0.0]],
        vec![[1.0 / 3.0, 0.0], [1.0 / 3.0, 0.0]],
    ]);
    let path = write(dir.path(), "near.json", &file.to_json());
    assert_eq!(frameopt(&["analyze", &path], &[]).code, 3);
    assert_eq!(frameopt(&["analyze", &path], &[("FRAMEOPT_TOL", "1e-6")]).code, 0);
    assert_eq!(frameopt(&["analyze", &path, "--tol", "1e-12"], &[("FRAMEOPT_TOL", "1e-6")]).code, 3);
    assert_eq!(frameopt(&["analyze", &path, "--tol", "1e-6"], &[]).code, 0);
    assert_eq!(frameopt(&["analyze", &path], &[("FRAMEOPT_TOL", "loose")]).code, 2);
}

#[test]
fn search_outputs_dual_and_value() {
    let run = frameopt(&["search", &fixture("split_axis"), "--seed", "1", "--restarts", "4"], &[]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let v = run.json();
    assert!((v["search"]["value"].as_f64().unwrap() - 1.0).abs() < 1e-9);

    let dir = tempfile::tempdir().unwrap();
    let run = frameopt(&["search", &fixture("skew_triple")], &[]);
    let v = run.json();
    assert!(v["search"]["value"].as_f64().unwrap() <= (1.0 + 2f64.sqrt()) / 2.0 + 1e-6);
    // the emitted frame file carries the dual and feeds straight into analyze
    let path = write(dir.path(), "found.json", &serde_json::to_string(&v["frame_file"]).unwrap());
    let analyzed = frameopt(&["analyze", &path, "--measure", "A"], &[]);
    assert_eq!(analyzed.code, 0, "{}", analyzed.stderr);
    assert!((measure(&analyzed.json(), "A") - v["search"]["value"].as_f64().unwrap()).abs() < 1e-12);

    let starved = frameopt(&["search", &fixture("skew_triple"), "--iters", "50", "--measure", "r"], &[]);
    assert_eq!(starved.code, 0);
    assert!(starved.stderr.contains("NonConvergence"));
    assert_eq!(frameopt(&["search", &fixture("skew_triple"), "--measure", "all"], &[]).code, 2);
}

#[test]
fn construct_and_round_trip() {
    let run = frameopt(&["construct", "--probabilities", "0.3333333333333333,0.3333333333333333,0.3333333333333334", "--dimension", "2"], &[]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let file = FrameFile::parse(&run.stdout).unwrap();
    for v in &file.vectors {
        let norm2: f64 = v.iter().map(|z| z[0] * z[0] + z[1] * z[1]).sum();
        assert!((norm2 - 2.0 / 3.0).abs() < 1e-9);
    }
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "parseval.json", &run.stdout);
    let analyzed = frameopt(&["analyze", &path, "--dual", "canonical"], &[]);
    let v = analyzed.json();
    for sym in ["r", "O", "A"] {
        assert!((measure(&v, sym) - 1.0).abs() < 1e-9);
    }

    let split = frameopt(&["construct", "--probabilities", "0,0.5,0.5", "--dimension", "2"], &[]);
    let file = FrameFile::parse(&split.stdout).unwrap();
    let norms: Vec<f64> = file.vectors.iter().map(|v| v.iter().map(|z| z[0] * z[0] + z[1] * z[1]).sum::<f64>().sqrt()).collect();
    let h = 0.5f64.sqrt();
    for (got, want) in norms.iter().zip([1.0, h, h]) {
        assert!((got - want).abs() < 1e-9);
    }

    assert_eq!(frameopt(&["construct", "--probabilities", "1,0,0", "--dimension", "2"], &[]).code, 3);
    assert_eq!(frameopt(&["construct", "--probabilities", "0.2,0.8", "--dimension", "2"], &[]).code, 3);
}

#[test]
fn simulate_is_deterministic() {
    let args = [
        "simulate",
        &fixture("diagonal_augmented"),
        "--trials",
        "5000",
        "--signals",
        "2",
        "--m",
        "1",
        "--seed",
        "11",
        "--mode",
        "weighted",
        "--dual",
        "canonical",
    ];
    let a = frameopt(&args, &[]);
    let b = frameopt(&args, &[]);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a.stdout, b.stdout);
    let v = a.json();
    assert!(v["ratio"].as_f64().unwrap() <= 1.0 + 1e-9);
    assert!(v["prng"].as_str().unwrap().contains("ChaCha8"));
    assert_eq!(frameopt(&["simulate", &fixture("mercedes"), "--m", "0", "--dual", "canonical"], &[]).code, 3);
}

#[test]
fn verify_examples_exit_codes() {
    let run = frameopt(&["verify-examples"], &[]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let v = run.json();
    assert_eq!(v["all_pass"], true);
    let errata: Vec<&Value> = v["rows"].as_array().unwrap().iter().filter(|r| r["status"] == "paper-discrepancy").collect();
    assert_eq!(errata.len(), 3);
    assert!(errata.iter().all(|r| !r["paper"].is_null() && !r["actual"].is_null()));

    let dir = tempfile::tempdir().unwrap();
    for (name, text) in frameopt::golden::FIXTURES {
        let mut file = FrameFile::parse(text).unwrap();
        if name == "diagonal_augmented" {
            file.vectors[0][1][0] = 0.05;
        }
        write(dir.path(), &format!("{name}.json"), &file.to_json());
    }
    let perturbed = frameopt(&["verify-examples", "--fixtures-dir", dir.path().to_str().unwrap()], &[]);
    assert_eq!(perturbed.code, 1);
    assert!(perturbed.stderr.contains("FAIL"));
}

#[test]
fn help_and_usage() {
    let help = frameopt(&["--help"], &[]);
    assert_eq!(help.code, 0);
    for cmd in ["analyze", "search", "construct", "simulate", "verify-examples"] {
        assert!(help.stdout.contains(cmd), "{cmd} missing from help");
    }
    assert_eq!(frameopt(&["bogus"], &[]).code, 2);
}
