//! Front end behavior: exit codes, explicit definitions written out in
//! full, and the cap override flag.

use std::path::Path;
use std::process::{Command, Output};

fn run(config_text: &str, extra: &[&str]) -> (Output, tempfile::TempDir) {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("jobs.toml");
    std::fs::write(&config, config_text).unwrap();
    let out = dir.path().join("out");
    let output = Command::new(env!("CARGO_BIN_EXE_algebroid"))
        .arg("--config")
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .args(extra)
        .output()
        .expect("binary should launch");
    (output, dir)
}

fn read_json(dir: &Path, name: &str) -> serde_json::Value {
    let text = std::fs::read_to_string(dir.join("out").join(name)).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn missing_reference_is_a_config_error() {
    let (output, _dir) = run(
        "[[jobs]]\nverb = \"check-axioms\"\nalgebroid = \"missing\"\n",
        &[],
    );
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("unknown algebroid"), "stderr was: {stderr}");
}

#[test]
fn malformed_toml_is_a_config_error_with_position() {
    let (output, _dir) = run("jobs = [ {", &[]);
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("line 1"), "stderr was: {stderr}");
}

#[test]
fn oversized_job_fails_cleanly_and_exits_one() {
    let config = r#"
[algebras.dual]
kind = "dual_numbers"

[algebroids.env]
kind = "enveloping"
base = "dual"

[coefficients.can]
kind = "canonical_r"
algebroid = "env"

[[jobs]]
verb = "homology"
coefficient = "can"
cap = 3
"#;
    let (output, dir) = run(config, &["--size-limit", "10"]);
    assert_eq!(output.status.code(), Some(1));
    let job = read_json(dir.path(), "job-000-homology.json");
    let error = job["error"].as_str().unwrap();
    assert!(error.contains("size limit exceeded"), "error was: {error}");
    let summary = read_json(dir.path(), "summary.json");
    assert_eq!(summary["all_pass"], serde_json::Value::Bool(false));
}

#[test]
fn explicit_definitions_build_and_pass() {
    // The dual numbers and a self Morita context over them written out in
    // full, plus a handmade one dimensional coefficient over the rationals.
    let config = r#"
[algebras.dual]
kind = "explicit"
dim = 2
labels = ["1", "x"]
unit = ["1", "0"]
mul = [[["1", "0"], ["0", "1"]], [["0", "1"], ["0", "0"]]]

[algebras.q]
kind = "rationals"

[contexts.self_pairing]
kind = "explicit"
r = "dual"
s = "dual"
phi = [["1", "0", "0", "0"], ["0", "1", "1", "0"]]
psi = [["1", "0", "0", "0"], ["0", "1", "1", "0"]]

[contexts.self_pairing.p]
dim = 2
left = [[["1", "0"], ["0", "1"]], [["0", "1"], ["0", "0"]]]
right = [[["1", "0"], ["0", "1"]], [["0", "1"], ["0", "0"]]]

[contexts.self_pairing.q]
dim = 2
left = [[["1", "0"], ["0", "1"]], [["0", "1"], ["0", "0"]]]
right = [[["1", "0"], ["0", "1"]], [["0", "1"], ["0", "0"]]]

[algebroids.env_dual]
kind = "enveloping"
base = "dual"

[algebroids.env_q]
kind = "enveloping"
base = "q"

[coefficients.can_dual]
kind = "canonical_r"
algebroid = "env_dual"

[coefficients.handmade]
kind = "explicit"
algebroid = "env_q"
dim = 1
right_action = [[["1"]]]
left_base = [[["1"]]]
coaction = [["1"]]

[[jobs]]
verb = "check-axioms"
algebroid = "env_dual"

[[jobs]]
verb = "verify-morita"
context = "self_pairing"
coefficient = "can_dual"
cap = 2

[[jobs]]
verb = "check-sayd"
coefficient = "handmade"

[[jobs]]
verb = "homology"
coefficient = "handmade"
cap = 2
"#;
    let (output, dir) = run(config, &[]);
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert_eq!(output.status.code(), Some(0), "stderr was: {stderr}");
    let summary = read_json(dir.path(), "summary.json");
    assert_eq!(summary["all_pass"], serde_json::Value::Bool(true));
    // The handwritten dual numbers must behave exactly like the builtin
    // ones: the full axiom suite runs and passes.
    let axioms = read_json(dir.path(), "job-000-check-axioms.json");
    assert!(axioms["items"].as_array().unwrap().len() >= 25);
    // The handmade coefficient is the canonical one of the rationals.
    let hom = read_json(dir.path(), "job-003-homology.json");
    assert_eq!(hom["tables"]["hochschild_homology"], serde_json::json!([1]));
}

#[test]
fn cap_flag_overrides_job_caps() {
    let config = r#"
[algebras.q]
kind = "rationals"

[algebroids.env]
kind = "enveloping"
base = "q"

[coefficients.can]
kind = "canonical_r"
algebroid = "env"

[[jobs]]
verb = "homology"
coefficient = "can"
cap = 3
"#;
    let (output, dir) = run(config, &["--cap", "2"]);
    assert_eq!(output.status.code(), Some(0));
    let job = read_json(dir.path(), "job-000-homology.json");
    let table = job["tables"]["hochschild_homology"].as_array().unwrap();
    assert_eq!(table.len(), 2, "cap 2 computes degrees 0 and 1");
    assert_eq!(job["inputs"]["cap"], serde_json::json!(2));
}
