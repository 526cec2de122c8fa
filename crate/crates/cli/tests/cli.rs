use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }
}

fn qcs(args: &[&str], dir: &Path) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_qcs"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
    }
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p
}

fn close(v: &Value, x: f64, tol: f64) -> bool {
    (v.as_f64().unwrap() - x).abs() <= tol
}

#[test]
fn count_roots_matches_worked_example() {
    let dir = TempDir::new().unwrap();
    write(&dir, "f.json", r#"{"coeffs": [[-0.8, 0], [-1.6, 0], [1, 0]]}"#);
    let run = qcs(&["count-roots", "--poly", "f.json"], dir.path());
    assert_eq!(run.code, 0);
    let v = run.json();
    let d = v["D"].as_array().unwrap();
    assert!(close(&d[0], 1.0, 1e-14) && close(&d[1], 0.36, 1e-12) && close(&d[2], -8.1648, 1e-10));
    assert_eq!(v["q"], 1);
    assert_eq!(v["inside"], 1);
    assert_eq!(v["degenerate"], serde_json::json!([]));
}

#[test]
fn roundtrip_of_linear_sequence() {
    let dir = TempDir::new().unwrap();
    write(&dir, "s.json", r#"{"c": [[0.5, 0], [1, 0]]}"#);
    for method in ["linear", "inductive", "both"] {
        let run = qcs(&["roundtrip", "--seq", "s.json", "--method", method], dir.path());
        assert_eq!(run.code, 0, "{}", run.stdout);
        assert!(run.json()["max_coeff_error"].as_f64().unwrap() <= 1e-10);
    }
}

#[test]
fn reconstruct_zero_class_has_no_polynomial() {
    let dir = TempDir::new().unwrap();
    write(
        &dir,
        "h.json",
        r#"{"d": 2, "r": 1, "blocks": [{"alpha": 1, "beta": 0, "gamma": 1}, {"alpha": -1, "beta": 0, "gamma": -1}]}"#,
    );
    let run = qcs(&["reconstruct", "--hamiltonians", "h.json", "--boundary", "1", "0"], dir.path());
    assert_eq!(run.code, 0);
    assert_eq!(run.stdout.trim(), r#"{"class":"Zero"}"#);
}

#[test]
fn hamiltonian_then_reconstruct_recovers_polynomial() {
    let dir = TempDir::new().unwrap();
    // 2 - 0.5i + (1 + i) x + 0.3 x^2 + (0.7 - 0.2i) x^3
    write(&dir, "f.json", r#"{"coeffs": [[2, -0.5], [1, 1], [0.3, 0], [0.7, -0.2]]}"#);
    let run = qcs(&["hamiltonian", "--poly", "f.json"], dir.path());
    assert_eq!(run.code, 0);
    fs::write(dir.path().join("h.json"), &run.stdout).unwrap();
    let h = run.json();
    assert_eq!((h["d"].as_u64(), h["r"].as_u64()), (Some(3), Some(2)));

    // E(0) = sum of coefficients = 4 + 0.3i, so (A, B) = (4, -0.3).
    let rec = qcs(&["reconstruct", "--hamiltonians", "h.json", "--boundary", "4", "-0.3"], dir.path());
    assert_eq!(rec.code, 0, "{}", rec.stdout);
    let v = rec.json();
    assert_eq!(v["class"], "FullDegree");
    let want = [[2.0, -0.5], [1.0, 1.0], [0.3, 0.0], [0.7, -0.2]];
    for (got, w) in v["poly"]["coeffs"].as_array().unwrap().iter().zip(want) {
        assert!(close(&got[0], w[0], 1e-9) && close(&got[1], w[1], 1e-9), "{got} vs {w:?}");
    }

    let count = qcs(&["count-roots", "--poly", "f.json"], dir.path()).json();
    assert_eq!(v["q"], count["q"]);
    assert_eq!(v["inside"], count["inside"]);
    let oracle = qcs(&["oracle", "--poly", "f.json"], dir.path()).json();
    assert_eq!(oracle["inside"], count["inside"]);
    assert_eq!(oracle["roots"].as_array().unwrap().len(), 3);
}

#[test]
fn both_methods_agree() {
    let dir = TempDir::new().unwrap();
    write(&dir, "s.json", r#"{"c": [[1.2, 0.3], [-0.4, 0.9], [0.6, -1.1], [0.8, 0.2], [1.5, -0.7]]}"#);
    for selection in ["designated", "alternative"] {
        let run = qcs(
            &["hamiltonian", "--seq", "s.json", "--method", "both", "--selection", selection],
            dir.path(),
        );
        assert_eq!(run.code, 0, "{}", run.stdout);
        assert!(run.json()["max_scaled_diff"].as_f64().unwrap() < 1e-9);
    }
}

#[test]
fn identities_table_passes() {
    let dir = TempDir::new().unwrap();
    write(&dir, "s.json", r#"{"c": [[1.2, 0.3], [-0.4, 0.9], [0.6, -1.1], [0.8, 0.2]]}"#);
    let run = qcs(&["verify-identities", "--seq", "s.json"], dir.path());
    assert_eq!(run.code, 0, "{}", run.stdout);
    let v = run.json();
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    assert!(v.get("error").is_none());
}

#[test]
fn sample_writes_csv_grid() {
    let dir = TempDir::new().unwrap();
    write(&dir, "h.json", r#"{"d": 1, "r": 2, "blocks": [{"alpha": 2, "beta": 0, "gamma": 0.5}]}"#);
    let run = qcs(
        &["sample", "--hamiltonians", "h.json", "--t", "0:1:5", "--z-real", "-2:2:3"],
        dir.path(),
    );
    assert_eq!(run.code, 0, "{}", run.stdout);
    let lines: Vec<&str> = run.stdout.lines().collect();
    assert_eq!(lines[0], "t,x,A,B,|E|");
    assert_eq!(lines.len(), 1 + 5 * 3);
    // at t = L the solution is the boundary value (1, 0) for every x
    for row in &lines[lines.len() - 3..] {
        let cols: Vec<f64> = row.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols[0], 1.0);
        assert!((cols[2] - 1.0).abs() < 1e-12 && cols[3].abs() < 1e-12);
    }
}

#[test]
fn corpus_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let args = ["corpus", "--seed", "11", "--count", "24", "--dmax", "6"];
    let a = qcs(&args, dir.path());
    let b = qcs(&args, dir.path());
    assert_eq!(a.code, 0, "{}", a.stdout);
    assert_eq!(a.stdout, b.stdout);
    let v = a.json();
    let inv = v["invariants"].as_object().unwrap();
    assert_eq!(inv.len(), 6);
    for tally in inv.values() {
        assert_eq!(tally["fail"], 0);
    }
    let other = qcs(&["corpus", "--seed", "12", "--count", "24", "--dmax", "6"], dir.path());
    assert_eq!(other.code, 0);
}

#[test]
fn errors_are_structured_json() {
    let dir = TempDir::new().unwrap();
    write(&dir, "bad.json", "{ not json");
    write(&dir, "deg.json", r#"{"coeffs": [[1, 0], [0, 0], [1, 0]]}"#);
    write(
        &dir,
        "h.json",
        r#"{"d": 3, "r": 2, "blocks": [{"alpha": 1, "beta": 0, "gamma": 1}]}"#,
    );
    let cases: [(&[&str], &str); 5] = [
        (&["count-roots", "--poly", "missing.json"], "IoError"),
        (&["count-roots", "--poly", "bad.json"], "ParseError"),
        (&["count-roots", "--poly", "deg.json"], "DegenerateSequence"),
        (&["reconstruct", "--hamiltonians", "h.json", "--boundary", "1", "0"], "InvalidInput"),
        (&["hamiltonian", "--method", "sideways", "--poly", "deg.json"], "UsageError"),
    ];
    for (args, kind) in cases {
        let run = qcs(args, dir.path());
        assert_eq!(run.code, 1, "{args:?}");
        let v = run.json();
        assert_eq!(v["error"]["kind"], kind, "{args:?}: {}", run.stdout);
        assert!(v["error"]["detail"].as_str().is_some_and(|s| !s.is_empty()));
    }
}

#[test]
fn zero_boundary_is_rejected() {
    let dir = TempDir::new().unwrap();
    write(&dir, "h.json", r#"{"d": 1, "r": 2, "blocks": [{"alpha": 1, "beta": 0, "gamma": 1}]}"#);
    let run = qcs(&["reconstruct", "--hamiltonians", "h.json", "--boundary", "0", "0"], dir.path());
    assert_eq!(run.code, 1);
    assert_eq!(run.json()["error"]["kind"], "ZeroBoundary");
}
