use std::process::{Command, Output};

use serde_json::Value;

fn univcov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_univcov"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let out = univcov(args);
    let code = out.status.code().expect("exit code");
    let body = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)));
    (body, code)
}

#[test]
fn cov_of_interval_in_z12() {
    let (v, code) = json(&["compute", "cov", "--group", "Z12", "--set", "[1,2,3]"]);
    assert_eq!(code, 0);
    assert_eq!(v["value"], 4);
    assert_eq!(v["optimal"], true);
    assert_eq!(v["witness"].as_array().unwrap().len(), 4);
}

#[test]
fn un_finite_and_infinite() {
    let (v, code) = json(&["compute", "un", "--group", "Z3", "--set", "[0,1]"]);
    assert_eq!(code, 0);
    assert_eq!(v["un"]["value"], 2);
    assert_eq!(v["witnessing_failure"].as_array().unwrap().len(), 3);

    let (v, code) = json(&["compute", "un", "--group", "Z5", "--set", "[0,1,2,3,4]"]);
    assert_eq!(code, 0);
    assert_eq!(v["un"]["kind"], "infinite");
}

#[test]
fn un_profile_is_exact() {
    // Z/4, A = {0,1}: pairs with a common translate into A are those at difference 0, 1 or 3.
    let (v, _) = json(&["compute", "u_n", "--group", "Z4", "--set", "[0,1]", "--n", "2"]);
    assert_eq!(v["value"], "3/4");
}

#[test]
fn constructions() {
    let (v, code) = json(&["construct", "qr", "--p", "7"]);
    assert_eq!(code, 0);
    assert_eq!(v["set"], serde_json::json!([1, 2, 4]));

    let (v, code) = json(&["construct", "subspace-union", "--n", "4", "--k", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["set"].as_array().unwrap().len(), 7);
    assert!(v["certificate"]["un"]["value"].as_u64().unwrap() >= 2);

    let (v, _) = json(&["construct", "interval", "--p", "7"]);
    assert_eq!(v["set"], serde_json::json!([3, 4]));
}

#[test]
fn verify_exhaustive_and_sampled() {
    let (v, code) = json(&["verify", "--suite", "core", "--exhaustive", "Z4"]);
    assert_eq!(code, 0);
    assert_eq!(v["total"]["failed"], 0);
    assert!(v["total"]["passed"].as_u64().unwrap() > 1000);

    let (v, code) = json(&["verify", "--suite", "V01", "--trials", "10", "--seed", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["total"]["attempted"], 10);
    assert_eq!(v["run_config"]["command"]["verify"]["seed"], 1);
    assert_eq!(v["run_config"]["tool"], "univcov");
}

#[test]
fn replay_one_instance() {
    let instance = r#"{"group":"Z6","sets":{"A":{"elements":[0,1,3]}},"params":{},"seed":0}"#;
    let (v, code) = json(&["verify", "--suite", "V02", "--instance", instance]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["check_id"], "V02");
    assert_eq!(v["outcome"]["status"], "PASS");
}

#[test]
fn table_csv_with_sidecar() {
    let out = univcov(&["table", "--p", "11", "--families", "qr", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p,family,row,operation,value,optimal,predicted_class"));
    assert_eq!(lines.count(), 16);

    let dir = std::env::temp_dir().join(format!("univcov-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("table.csv");
    let out = univcov(&["table", "--p", "11", "--families", "qr", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(std::fs::read_to_string(&path).unwrap().starts_with("p,family"));
    let cfg: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("table.config.json")).unwrap()).unwrap();
    assert_eq!(cfg["command"]["table"]["primes"], serde_json::json!([11]));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(univcov(&["compute", "cov", "--group", "Q7", "--set", "[1]"]).status.code(), Some(2));
    assert_eq!(univcov(&["compute", "cov", "--group", "Z5", "--set", "[9]"]).status.code(), Some(2));
    assert_eq!(univcov(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(univcov(&["table", "--p", "12"]).status.code(), Some(2));
    assert_eq!(univcov(&["verify", "--suite", "core", "--exhaustive", "Z16"]).status.code(), Some(3));
    // A node budget of one cannot certify optimality.
    let out = univcov(&["compute", "cov", "--group", "Z30", "--set", "[0,1,5,11]", "--node-budget", "1"]);
    assert_eq!(out.status.code(), Some(3));
}
