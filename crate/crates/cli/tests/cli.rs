//! End-to-end tests of the qspace binary: exit codes, output shapes, and
//! byte-level reproducibility.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qspace"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn repo_file(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn build_writes_a_valid_complex() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k.json");
    let result = run(&["build", "--system", "square", "--extent", "1", "--out", path_str(&out)]);
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));

    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["system"], "square2d");
    assert_eq!(doc["vertices"].as_array().unwrap().len(), 5);
    assert_eq!(doc["edges"].as_array().unwrap().len(), 4);
}

#[test]
fn interior_coordination_matches_the_root_count() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a3.json");
    let result = run(&["build", "--system", "a3", "--extent", "2", "--out", path_str(&out)]);
    assert!(result.status.success());
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let incident_to_origin = doc["edges"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["u"] == 0 || e["v"] == 0)
        .count();
    assert_eq!(incident_to_origin, 12);
}

#[test]
fn reducible_systems_exit_with_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k.json");
    let result = run(&["build", "--system", "a1a1a1", "--extent", "1", "--out", path_str(&out)]);
    assert_eq!(result.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("reducible"), "stderr: {stderr}");
    assert!(!out.exists());
}

#[test]
fn replayed_contraction_yields_the_unit_holonomy() {
    let dir = tempfile::tempdir().unwrap();
    let mutated = dir.path().join("mutated.json");
    let replay = repo_file("replays/contracted_x_edge.json");
    let result = run(&["mutate", "--replay", path_str(&replay), "--out", path_str(&mutated)]);
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));

    let result = run(&[
        "measure",
        "--input",
        path_str(&mutated),
        "curvature",
        "--base",
        "0",
        "--x",
        "x1",
        "--y",
        "x2",
        "--z",
        "x3",
    ]);
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    let value: serde_json::Value = serde_json::from_slice(&result.stdout).unwrap();
    // One x edge from c = b+z back to d = a+z, walked in the inverse
    // direction.
    assert_eq!(value["length"], 1);
    assert_eq!(value["path"], "x1'");
    assert_ne!(value["c"], value["d"]);

    // Under the swapped policy the commutator loop starts at the survivor,
    // whose x edge is the contracted one: the holonomy is undefined, which
    // is a measurement failure rather than a config failure.
    let result = run(&[
        "measure",
        "--input",
        path_str(&mutated),
        "curvature",
        "--base",
        "0",
        "--x",
        "x1",
        "--y",
        "x2",
        "--z",
        "x3",
        "--policy",
        "loop-survivor-z-absorbed",
    ]);
    assert_eq!(result.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&result.stderr).contains("holonomy undefined"));
}

#[test]
fn flat_lattice_measures_an_empty_path() {
    let dir = tempfile::tempdir().unwrap();
    let complex = dir.path().join("cubic.json");
    assert!(run(&["build", "--system", "cubic", "--extent", "3", "--out", path_str(&complex)])
        .status
        .success());
    let result = run(&[
        "measure", "--input", path_str(&complex), "curvature", "--base", "0", "--x", "x1",
        "--y", "x2", "--z", "x3",
    ]);
    assert!(result.status.success());
    let value: serde_json::Value = serde_json::from_slice(&result.stdout).unwrap();
    assert_eq!(value["length"], 0);
    assert_eq!(value["path"], "");
}

#[test]
fn snowflake_entropy_via_cli() {
    let dir = tempfile::tempdir().unwrap();
    let complex = dir.path().join("square.json");
    assert!(run(&["build", "--system", "square", "--extent", "4", "--out", path_str(&complex)])
        .status
        .success());
    // Edge 0 joins the origin to (1, 0) by construction determinism.
    let result =
        run(&["measure", "--input", path_str(&complex), "entropy", "--edges", "0"]);
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    let value: serde_json::Value = serde_json::from_slice(&result.stdout).unwrap();
    assert_eq!(value["S"], -6);
    assert_eq!(value["witnesses"].as_array().unwrap().len(), 6);
}

#[test]
fn distance_measurement_and_runtime_error_code() {
    let dir = tempfile::tempdir().unwrap();
    let complex = dir.path().join("square.json");
    assert!(run(&["build", "--system", "square", "--extent", "2", "--out", path_str(&complex)])
        .status
        .success());
    let result =
        run(&["measure", "--input", path_str(&complex), "distance", "--from", "0", "--to", "1"]);
    assert!(result.status.success());
    let value: serde_json::Value = serde_json::from_slice(&result.stdout).unwrap();
    assert_eq!(value["d"], 1);

    // Unknown vertex is a measurement failure, not a config failure.
    let result = run(&[
        "measure", "--input", path_str(&complex), "distance", "--from", "0", "--to", "9999",
    ]);
    assert_eq!(result.status.code(), Some(1));
}

#[test]
fn experiments_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let config = repo_file("configs/hubble_doubling.json");
    let mut outputs = Vec::new();
    for tag in ["a", "b"] {
        let csv = dir.path().join(format!("{tag}.csv"));
        let summary = dir.path().join(format!("{tag}.json"));
        let result = run(&[
            "experiment",
            "--config",
            path_str(&config),
            "--csv",
            path_str(&csv),
            "--summary",
            path_str(&summary),
        ]);
        assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
        outputs.push((std::fs::read(&csv).unwrap(), std::fs::read(&summary).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);

    let summary: serde_json::Value = serde_json::from_slice(&outputs[0].1).unwrap();
    assert_eq!(summary["results"]["mean_h0"], 1.0);
    assert_eq!(summary["results"]["mean_r_squared"], 1.0);
    assert_eq!(summary["config"]["kind"], "hubble");
    let csv_text = String::from_utf8(outputs[0].0.clone()).unwrap();
    assert!(csv_text.starts_with("# qspace "));
    assert!(csv_text.lines().nth(1).unwrap().starts_with("# config "));
    assert!(csv_text.lines().nth(2).unwrap().starts_with("seed,step,pair_id,D,v"));
}

#[test]
fn malformed_config_reports_the_field_and_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.json");
    std::fs::write(
        &config,
        r#"{"kind":"hubble","source":{"path":8},"p":0.5,"steps":2,"seeds":[1],"pear":1}"#,
    )
    .unwrap();
    let result = run(&[
        "experiment",
        "--config",
        path_str(&config),
        "--csv",
        path_str(&dir.path().join("x.csv")),
        "--summary",
        path_str(&dir.path().join("x.json")),
    ]);
    assert_eq!(result.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("pear"), "stderr: {stderr}");
}

#[test]
fn export_emits_graphviz() {
    let dir = tempfile::tempdir().unwrap();
    let complex = dir.path().join("k.json");
    let dot = dir.path().join("k.dot");
    assert!(run(&["build", "--system", "square", "--extent", "1", "--out", path_str(&complex)])
        .status
        .success());
    let result =
        run(&["export", "--input", path_str(&complex), "--format", "dot", "--out", path_str(&dot)]);
    assert!(result.status.success());
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("graph skeleton {"));
    assert_eq!(text.matches(" -- ").count(), 4);
}

#[test]
fn seed_env_var_is_the_default() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k.json");
    let result = bin()
        .args(["build", "--system", "square", "--extent", "1", "--out", path_str(&out)])
        .env("QSPACE_SEED", "42")
        .output()
        .unwrap();
    assert!(result.status.success());
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["rng_seed"], 42);
}

#[test]
fn mutate_applies_ops_to_an_existing_complex() {
    let dir = tempfile::tempdir().unwrap();
    let complex = dir.path().join("k.json");
    let out = dir.path().join("k2.json");
    assert!(run(&["build", "--system", "cubic", "--extent", "3", "--out", path_str(&complex)])
        .status
        .success());
    let replay = repo_file("replays/contracted_x_edge.json");
    let result = run(&[
        "mutate",
        "--replay",
        path_str(&replay),
        "--input",
        path_str(&complex),
        "--out",
        path_str(&out),
    ]);
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["contraction_log"].as_array().unwrap().len(), 1);
}
