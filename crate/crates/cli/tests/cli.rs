use std::process::{Command, Output};

use serde_json::Value;

fn jtower(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jtower")).args(args).env_remove("JTOWER_CAP").output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn tower_scalars_in_c2() {
    let o = jtower(&["tower", "--preset", "scalars-in-c2", "--depth", "3"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["pass"], true);
    assert_eq!(v["tower"]["beta"].as_f64().unwrap(), 2.0);
    assert_eq!(v["tower"]["dims"], serde_json::json!([1, 2, 4, 8, 16]));
}

#[test]
fn trivial_inclusion_has_index_one() {
    for depth in ["0", "2", "5"] {
        let o = jtower(&["tower", "--preset", "trivial", "--depth", depth]);
        assert_eq!(code(&o), 0);
        assert_eq!(json(&o)["tower"]["beta"].as_f64().unwrap(), 1.0);
    }
}

#[test]
fn malformed_row_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "n = [1, 1]\nlambda = [\n  [1, 1],\n  [2],\n]\n").unwrap();
    let o = jtower(&["tower", "--config", path.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("bad.toml:4:3"), "{}", stderr(&o));
}

#[test]
fn config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("inc.toml");
    std::fs::write(&path, "n = [1, 1]\nm = [2]\nlambda = [[1, 1]]\ndepth = 1\nseed = 3\n").unwrap();
    let o = jtower(&["tower", "--config", path.to_str().unwrap(), "--depth", "2"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["environment"]["depth"], 2);
    assert_eq!(v["environment"]["seed"], 3);
    assert_eq!(v["inclusion"]["name"], "custom");
}

#[test]
fn missing_input_is_usage_error() {
    assert_eq!(code(&jtower(&["tower"])), 2);
    assert_eq!(code(&jtower(&["tower", "--preset", "m3-in-m9"])), 2);
    assert_eq!(code(&jtower(&["tower", "--preset", "trivial", "--tol", "-1"])), 2);
}

#[test]
fn cap_is_a_resource_error() {
    let o = jtower(&["tower", "--preset", "m2-in-m4", "--depth", "6"]);
    assert_eq!(code(&o), 3);
    let o = Command::new(env!("CARGO_BIN_EXE_jtower"))
        .args(["tower", "--preset", "scalars-in-c2", "--depth", "4"])
        .env("JTOWER_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("cap 10"));
}

#[test]
fn theorem22_on_diag_in_m2() {
    let o = jtower(&["theorem22", "--n", "2", "--preset", "diag-in-m2", "--depth", "3"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v = json(&o);
    let names: Vec<&str> = v["generators"].as_array().unwrap().iter().map(|g| g["generator"].as_str().unwrap()).collect();
    assert_eq!(names, ["m", "e0", "e1", "e2"]);
}

#[test]
fn theorem22_n1_is_identity() {
    let o = jtower(&["theorem22", "--n", "1", "--preset", "scalars-in-m2", "--depth", "0"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn theorem22_depth_and_cap_errors() {
    let o = jtower(&["theorem22", "--n", "3", "--preset", "diag-in-m2", "--depth", "2"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("4 required"));
    let o = jtower(&["theorem22", "--n", "6", "--preset", "scalars-in-m2", "--depth", "10"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn invariant_outputs() {
    let o = jtower(&["invariant", "--preset", "trivial", "--format", "dot"]);
    assert_eq!(code(&o), 0);
    let dot = stdout(&o);
    assert!(dot.starts_with("graph principal {"));
    assert_eq!(dot.matches("shape=circle").count(), 1);

    let o = jtower(&["invariant", "--preset", "diag-in-m2", "--depth", "4"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let text = stdout(&o);
    assert!(!text.contains("graph principal"));
    let v = json(&o);
    let dims: Vec<u64> = v["standard_invariant"]["n_row"].as_array().unwrap().iter().map(|l| l["dim"].as_u64().unwrap()).collect();
    assert_eq!(dims, [2, 2, 4, 8, 16, 32]);
    assert!(v["report"]["checks"].as_array().unwrap().iter().any(|c| c["check"] == "cross-route"));
}

#[test]
fn dot_only_for_invariant() {
    assert_eq!(code(&jtower(&["tower", "--preset", "trivial", "--format", "dot"])), 2);
}

#[test]
fn tl_calculator() {
    let o = jtower(&["tl", "normal-form", "e1 e0 e1", "--format", "text"]);
    assert_eq!(stdout(&o).trim(), "b^-1 * e1");
    let o = jtower(&["tl", "trace", "e0", "--level", "2"]);
    assert_eq!(json(&o)["result"], "b^-1");
    let o = jtower(&["tl", "identities", "--n", "4", "--format", "text"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("all exact"));
    let o = jtower(&["tl", "normal-form", "e1 ( e0"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("position"));
    let o = jtower(&["tl", "trace", "e3", "--level", "2"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn output_is_deterministic_and_can_go_to_a_file() {
    let args = ["tower", "--preset", "diag-in-m2", "--depth", "3", "--seed", "11"];
    let a = jtower(&args);
    let b = jtower(&args);
    assert_eq!(a.stdout, b.stdout);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    let c = jtower(&with_out);
    assert_eq!(code(&c), 0);
    assert!(c.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
}
