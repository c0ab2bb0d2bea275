use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use bbm_modlab::harness::{list_experiments, schema, RunConfig};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bbm-modlab"))
}

fn run(config: &str, out: &Path) -> Output {
    let path = out.join("config.json");
    std::fs::write(&path, config).unwrap();
    bin()
        .arg("run")
        .arg(&path)
        .env("BBM_MODLAB_OUT", out.join("runs"))
        .output()
        .unwrap()
}

fn only_run_dir(out: &Path) -> PathBuf {
    let mut dirs: Vec<PathBuf> = std::fs::read_dir(out.join("runs"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    assert_eq!(dirs.len(), 1);
    dirs.pop().unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn exponents_run_writes_summary_and_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(
        r#"{"experiment": "exponents", "pack": {"lambda": 1, "sigma": -2.0, "theta": 0.5}}"#,
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let dir = only_run_dir(tmp.path());
    let summary = json(&dir.join("summary.json"));
    let r = summary["results"]["pack"]["r"].as_f64().unwrap();
    assert!((r - 30.0 / 29.0).abs() < 1e-12);
    let manifest = json(&dir.join("manifest.json"));
    assert_eq!(manifest["passed"], Value::Bool(true));
    // defaults are echoed
    assert_eq!(manifest["config"]["grid"]["samples"], 8192);
    let files: Vec<&str> = manifest["outputs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|o| o["file"].as_str().unwrap())
        .collect();
    assert_eq!(files, ["summary.json", "pack_sweep.csv"]);
    assert!(manifest["input_hashes"]["config_file"].as_str().unwrap().len() == 64);
}

#[test]
fn unknown_experiment_exits_with_config_status() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(r#"{"experiment": "no-such-thing"}"#, tmp.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`experiment`"));
}

#[test]
fn unknown_key_names_its_path() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(
        r#"{"experiment": "exponents", "grid": {"half_width": 10.0, "sampels": 64}}"#,
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("grid.sampels") || err.contains("sampels"), "{err}");
}

#[test]
fn hypothesis_violation_exits_three() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(r#"{"experiment": "exponents", "pack": {"theta": 0.9}}"#, tmp.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("0 < theta <= -1/sigma"));
}

#[test]
fn divergence_exits_four_with_partial_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let config = r#"{
        "experiment": "picard",
        "grid": {"half_width": 50.26548245743669, "samples": 1024},
        "pack": {"lambda": 3},
        "picard": {"lambda": 2, "amplitude": 30.0, "t_end": 4.0}
    }"#;
    let out = run(config, tmp.path());
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
    let dir = only_run_dir(tmp.path());
    let summary = json(&dir.join("summary.json"));
    assert!(
        summary["results"]["partial"]["iterate_distances"]
            .as_array()
            .unwrap()
            .len()
            >= 3
    );
    let csv = std::fs::read_to_string(dir.join("trajectory.csv")).unwrap();
    assert!(csv.starts_with("t,x,u\n"));
}

#[test]
fn reruns_are_byte_identical() {
    let config = r#"{"experiment": "convolution-bound"}"#;
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert_eq!(run(config, a.path()).status.code(), Some(0));
    assert_eq!(run(config, b.path()).status.code(), Some(0));
    let (da, db) = (only_run_dir(a.path()), only_run_dir(b.path()));
    assert_eq!(da.file_name(), db.file_name());
    for f in ["summary.json", "convolution.csv", "manifest.json"] {
        assert_eq!(
            std::fs::read(da.join(f)).unwrap(),
            std::fs::read(db.join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn list_matches_golden_file() {
    let golden = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/list.txt")).unwrap();
    assert_eq!(list_experiments(), golden);
    let out = bin().arg("list").output().unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden);
}

#[test]
fn list_has_every_quotient_kind() {
    let table = list_experiments();
    for kind in bbm_modlab::estimates::QuotientKind::NAMES {
        assert!(
            table.lines().any(|l| l.starts_with(&format!("quotient {kind} "))),
            "{kind}"
        );
    }
    assert!(table
        .lines()
        .any(|l| l.starts_with("decay-fit ") && l.contains("decay")));
}

#[test]
fn schema_subcommand_prints_config_schema() {
    let out = bin().arg("schema").output().unwrap();
    assert!(out.status.success());
    let printed: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(printed, schema());
    assert_eq!(printed["title"], "RunConfig");
    assert!(printed["properties"]["experiment"].is_object());
}

#[test]
fn shipped_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut n = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "json") {
            RunConfig::from_json(&std::fs::read_to_string(&path).unwrap())
                .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            n += 1;
        }
    }
    assert_eq!(n, 12);
}
