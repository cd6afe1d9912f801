//! Command-line behaviour: exit codes, text and JSON reports, data lookup.

use std::path::PathBuf;
use std::process::Command;

use fullfield::cli::{load_category, parse_tau, run_command, DATA_PATH_ENV};
use fullfield::exact::C64;

fn run(args: &[&str]) -> (i32, String) {
    let mut v = vec!["fullfield"];
    v.extend_from_slice(args);
    run_command(v)
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("fullfield-test-{}-{}", std::process::id(), name));
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn validate_bundled() {
    let (code, out) = run(&["validate", "ising"]);
    assert_eq!(code, 0, "{}", out);
    assert!(out.contains("pentagon: 0.0e0"), "{}", out);
    for name in ["trivial", "fibonacci"] {
        assert_eq!(run(&["validate", name]).0, 0);
    }
}

#[test]
fn modular_invariance_diagonal() {
    for name in ["trivial", "ising", "fibonacci"] {
        let (code, out) = run(&["check-modular-invariance", name, "--diagonal"]);
        assert_eq!(code, 0, "{}", out);
    }
}

#[test]
fn check_t_reports_defect() {
    let (code, out) = run(&["check-t", "--cl", "25/2", "--cr", "1/2"]);
    assert_eq!(code, 1);
    assert!(out.contains("defect: 12"), "{}", out);
    assert_eq!(run(&["check-t", "--cl", "49/2", "--cr", "1/2"]).0, 0);
}

#[test]
fn json_report_schema() {
    let (code, out) = run(&["--json", "check-salpha-betas", "ising"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 3);
    for c in checks {
        for key in ["check_id", "paper_tag", "residual", "tolerance", "pass"] {
            assert!(c.get(key).is_some(), "missing {}", key);
        }
        assert_eq!(c["pass"], serde_json::Value::Bool(true));
    }
}

#[test]
fn errors_exit_two() {
    assert_eq!(run(&["validate", "no-such-category"]).0, 2);
    assert_eq!(run(&["transform-check", "ising", "--tau", "0.5-1i"]).0, 2);
    assert_eq!(run(&["coeffs", "--order", "0"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
}

#[test]
fn tight_tolerance_fails() {
    // the S-transform residual at order 400 is small but not below 1e-30
    assert_eq!(run(&["--tol", "1e-30", "transform-check", "fibonacci"]).0, 1);
}

#[test]
fn coeffs_and_characters() {
    let (code, out) = run(&["coeffs", "--order", "4"]);
    assert_eq!(code, 0, "{}", out);
    assert!(out.contains("B_1 = -1/2") && out.contains("B_2 = 1/12"), "{}", out);
    let (code, out) = run(&["characters", "ising", "--order", "10"]);
    assert_eq!(code, 0);
    assert!(out.contains("sigma: q^(1/24) [1, 1, 1, 2, 2, 3, 4, 5"), "{}", out);
}

#[test]
fn data_path_lookup() {
    let dir = scratch("datapath");
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/data/ising.json")).unwrap();
    std::fs::write(dir.join("my-ising.json"), text.replace("\"name\": \"ising\"", "\"name\": \"my-ising\"")).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_fullfield"))
        .args(["validate", "my-ising"])
        .env(DATA_PATH_ENV, format!("/nonexistent:{}", dir.display()))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = Command::new(env!("CARGO_BIN_EXE_fullfield")).args(["validate", "my-ising"]).env_remove(DATA_PATH_ENV).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    // an explicit path also works
    let (code, _) = run(&["validate", dir.join("my-ising.json").to_str().unwrap()]);
    assert_eq!(code, 0);
}

fn ising_d_file(sigma_scale: &str) -> String {
    let cat = load_category("ising").unwrap();
    let k = cat.ring.rank();
    let mut entries = Vec::new();
    for l in 0..k {
        for m in 0..k {
            for n in 0..k {
                if cat.ring.n(m, n, l) > 0 {
                    let v = if l == 2 && n == 2 { sigma_scale } else { "1" };
                    entries.push(serde_json::json!({"sectors": [l, m, n], "value": v}));
                }
            }
        }
    }
    serde_json::json!({
        "sectors": [["e", "e"], ["eps", "eps"], ["sigma", "sigma"]],
        "entries": entries,
    })
    .to_string()
}

#[test]
fn d_file() {
    let dir = scratch("dfile");
    let good = dir.join("good.json");
    std::fs::write(&good, ising_d_file("1")).unwrap();
    let (code, out) = run(&["check-modular-invariance", "ising", "--d", good.to_str().unwrap()]);
    assert_eq!(code, 0, "{}", out);
    let bad = dir.join("bad.json");
    std::fs::write(&bad, ising_d_file("2")).unwrap();
    let (code, out) = run(&["check-modular-invariance", "ising", "--d", bad.to_str().unwrap()]);
    assert_eq!(code, 1, "{}", out);
    assert!(out.contains("s-invariance") && out.contains("FAIL"), "{}", out);
}

#[test]
fn tau_literals() {
    assert_eq!(parse_tau("i").unwrap(), C64::new(0.0, 1.0));
    assert_eq!(parse_tau("2i").unwrap(), C64::new(0.0, 2.0));
    assert_eq!(parse_tau("0.3+0.8i").unwrap(), C64::new(0.3, 0.8));
    assert_eq!(parse_tau("-0.5-i").unwrap(), C64::new(-0.5, -1.0));
    assert_eq!(parse_tau("1e-1+1.5e0i").unwrap(), C64::new(0.1, 1.5));
    assert_eq!(parse_tau("3").unwrap(), C64::new(3.0, 0.0));
    assert!(parse_tau("x+i").is_err());
}
