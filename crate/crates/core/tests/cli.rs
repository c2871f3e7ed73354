use std::process::{Command, Output};

fn graphent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graphent")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = graphent(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn state_from_catalog_and_edges_agree() {
    let a = stdout(&["state", "--graph", "1"]);
    let b = stdout(&["state", "--edges", "1 2"]);
    assert_eq!(a, b);
    assert!(a.contains("-0.50000"));
}

#[test]
fn unknown_catalog_id_is_an_error() {
    let out = graphent(&["state", "--graph", "99"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("99"));
}

#[test]
fn conflicting_inputs_are_rejected() {
    assert!(!graphent(&["gcm", "--graph", "2", "--edges", "1 2"]).status.success());
}

#[test]
fn gcm_of_three_qubit_star() {
    assert!(stdout(&["gcm", "--graph", "2"]).contains("1.22474"));
}

#[test]
fn gem_values() {
    assert!(stdout(&["gem", "--graph", "2", "--restarts", "64", "--seed", "1"]).contains("0.50000"));
    assert!(stdout(&["gem", "--graph", "8"]).contains("0.86855"));
}

#[test]
fn gem_json_carries_diagnostics() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&["gem", "--graph", "4", "--format", "json"])).unwrap();
    assert!((v["result"]["value"].as_f64().unwrap() - 0.75).abs() < 1e-6);
    assert_eq!(v["result"]["diagnostics"]["restarts_used"], 64);
}

#[test]
fn local_complement_of_star_center() {
    assert_eq!(stdout(&["lc", "--graph", "2", "--vertex", "1"]).trim(), "1 2,1 3,2 3");
    assert!(!graphent(&["lc", "--graph", "2", "--vertex", "4"]).status.success());
}

#[test]
fn equivalence_and_orbits() {
    assert_eq!(stdout(&["equiv", "--graph", "3", "--graph2", "4"]).trim(), "inequivalent");
    assert_eq!(stdout(&["equiv", "--graph", "2", "--edges2", "1 2,2 3,1 3"]).trim(), "equivalent");
    assert!(stdout(&["orbit", "--graph", "1"]).contains("orbit size 1"));
}

#[test]
fn classify_class_counts() {
    let gcm: serde_json::Value =
        serde_json::from_str(&stdout(&["classify", "--measure", "gcm", "--format", "json"])).unwrap();
    assert_eq!(gcm["classes"].as_array().unwrap().len(), 27);
    let gem: serde_json::Value =
        serde_json::from_str(&stdout(&["classify", "--measure", "gem", "--format", "json"])).unwrap();
    assert_eq!(gem["classes"].as_array().unwrap().len(), 7);
}

#[test]
fn rp_table_text_and_csv() {
    let text = stdout(&["rp-table"]);
    assert!(text.contains("60.00") && text.contains("15.56") && text.contains("7/45"));
    let csv = stdout(&["rp-table", "--format", "csv"]);
    assert_eq!(csv.lines().count(), 8);
}

#[test]
fn verify_catalog_passes_and_tiny_budget_fails() {
    assert!(stdout(&["verify-catalog"]).lines().all(|l| l.starts_with("PASS")));
    let out = graphent(&["verify-catalog", "--lc-pairwise", "--budget", "10"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn export_and_reload_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    stdout(&["export-catalog", "--dir", dir.path().to_str().unwrap()]);
    let file = dir.path().join("g08.edges");
    assert!(stdout(&["gcm", "--file", file.to_str().unwrap()]).contains("1.58114"));
    let index: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("index.json")).unwrap()).unwrap();
    assert_eq!(index.as_array().unwrap().len(), 45);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gcm.txt");
    stdout(&["gcm", "--graph", "2", "--out", path.to_str().unwrap()]);
    assert!(std::fs::read_to_string(path).unwrap().contains("1.22474"));
}
