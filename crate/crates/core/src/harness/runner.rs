use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::config::{Experiment, RunConfig};
use super::experiments::evaluate;
use super::output::{Check, Outcome, Table};
use crate::error::{Error, Result};

/// Environment variable overriding the output root.
pub const OUT_DIR_ENV: &str = "BBM_MODLAB_OUT";

/// Version of the config schema echoed into every manifest.
pub const SCHEMA_VERSION: u32 = 1;

/// Default output root when neither the config nor the environment sets one.
pub const DEFAULT_OUT_DIR: &str = "bbm-modlab-out";

/// Process exit status of a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExitStatus {
    Passed = 0,
    Failed = 1,
    Config = 2,
    Hypothesis = 3,
    Divergence = 4,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }

    pub fn of_error(e: &Error) -> Self {
        match e {
            Error::Config { .. } | Error::Json(_) => Self::Config,
            Error::Hypothesis { .. } => Self::Hypothesis,
            Error::Divergence(_) | Error::Instability { .. } => Self::Divergence,
            _ => Self::Failed,
        }
    }
}

/// Digest of one written file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OutputDigest {
    pub file: String,
    pub sha256: String,
}

/// Contents of `manifest.json`.
#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub artifact: &'static str,
    pub version: &'static str,
    pub schema_version: u32,
    pub run_id: String,
    pub config: Value,
    pub input_hashes: Value,
    pub outputs: Vec<OutputDigest>,
    pub checks: Vec<Check>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// A finished run: where it went and how it ended.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub dir: PathBuf,
    pub manifest: Manifest,
    pub status: ExitStatus,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Config with every default filled in, as stable JSON.
pub fn canonical_config(cfg: &RunConfig) -> Value {
    // serde_json maps are ordered by key, so the rendering is canonical
    serde_json::to_value(cfg).expect("config serializes")
}

/// First 16 hex digits of the canonical config digest.
pub fn run_id(cfg: &RunConfig) -> String {
    let text = serde_json::to_vec(&canonical_config(cfg)).expect("value serializes");
    sha256_hex(&text)[..16].to_owned()
}

fn pretty(v: &impl Serialize) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(v).expect("value serializes");
    bytes.push(b'\n');
    bytes
}

/// Files of one run, in write order, without the manifest.
fn render(cfg: &RunConfig, outcome: &Outcome, error: Option<&str>) -> Vec<(String, Vec<u8>)> {
    let mut summary = json!({
        "experiment": cfg.experiment,
        "passed": error.is_none() && outcome.passed(),
        "checks": outcome.checks,
        "results": outcome.results,
    });
    if let Some(e) = error {
        summary["error"] = json!(e);
    }
    let mut files = vec![("summary.json".to_owned(), pretty(&summary))];
    files.extend(outcome.tables.iter().map(|t| (t.file.clone(), t.bytes.clone())));
    files
}

fn digests(files: &[(String, Vec<u8>)]) -> Vec<OutputDigest> {
    files
        .iter()
        .map(|(file, bytes)| OutputDigest {
            file: file.clone(),
            sha256: sha256_hex(bytes),
        })
        .collect()
}

/// Runs the experiment in memory. Divergence and instability come back as
/// an outcome carrying the partial solve, with the error text alongside.
fn execute(cfg: &RunConfig) -> Result<(Outcome, Option<Error>)> {
    let result = match cfg.experiment()? {
        Experiment::Determinism => determinism(cfg),
        _ => evaluate(cfg),
    };
    match result {
        Ok(o) => Ok((o, None)),
        Err(Error::Divergence(report)) => {
            let mut o = Outcome {
                results: json!({ "partial": report.summary() }),
                ..Outcome::default()
            };
            o.checks.push(Check::flag("solver converged", false, "diverged"));
            if !report.trajectory.is_empty() {
                o.tables.push(super::experiments::snapshots(&report.trajectory, 1, 16));
            }
            Ok((o, Some(Error::Divergence(report))))
        }
        Err(e @ Error::Instability { .. }) => {
            let mut o = Outcome::default();
            o.checks.push(Check::flag("stepper stable", false, e.to_string()));
            Ok((o, Some(e)))
        }
        Err(e) => Err(e),
    }
}

fn determinism(cfg: &RunConfig) -> Result<Outcome> {
    let inner = cfg.inner.as_deref().expect("validated");
    let render_once = || -> Result<Vec<OutputDigest>> {
        let (outcome, err) = execute(inner)?;
        Ok(digests(&render(
            inner,
            &outcome,
            err.as_ref().map(|e| e.to_string()).as_deref(),
        )))
    };
    let first = render_once()?;
    let second = render_once()?;
    let mut out = Outcome::default();
    out.checks.push(Check::flag(
        "byte-identical outputs",
        first == second,
        format!("{} files compared", first.len()),
    ));
    let rows = first
        .iter()
        .zip(&second)
        .map(|(a, b)| vec![a.file.clone(), a.sha256.clone(), b.sha256.clone()])
        .collect();
    out.tables
        .push(Table::new("digests.csv", &["file", "first", "second"], rows));
    out.results = json!({ "inner": inner.experiment, "inner_run_id": run_id(inner), "digests": first });
    Ok(out)
}

/// Output root: `BBM_MODLAB_OUT`, then `output_dir`, then the default.
pub fn output_root(cfg: &RunConfig) -> PathBuf {
    std::env::var_os(OUT_DIR_ENV)
        .map(PathBuf::from)
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
}

/// Runs `cfg` and writes `<root>/<run-id>/`. `input` is the raw config text,
/// hashed into the manifest when present.
pub fn run_config(cfg: &RunConfig, input: Option<&[u8]>, root: &Path) -> Result<RunOutcome> {
    cfg.validate()?;
    let (outcome, error) = execute(cfg)?;
    let error_text = error.as_ref().map(|e| e.to_string());
    let files = render(cfg, &outcome, error_text.as_deref());
    let id = run_id(cfg);
    let dir = root.join(&id);
    fs::create_dir_all(&dir)?;
    for (name, bytes) in &files {
        fs::write(dir.join(name), bytes)?;
    }
    let config = canonical_config(cfg);
    let mut input_hashes = json!({ "canonical_config": sha256_hex(&serde_json::to_vec(&config)?) });
    if let Some(raw) = input {
        input_hashes["config_file"] = json!(sha256_hex(raw));
    }
    let passed = error.is_none() && outcome.passed();
    let manifest = Manifest {
        artifact: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        schema_version: SCHEMA_VERSION,
        run_id: id,
        config,
        input_hashes,
        outputs: digests(&files),
        checks: outcome.checks,
        passed,
        error: error_text,
    };
    fs::write(dir.join("manifest.json"), pretty(&manifest))?;
    let status = match &error {
        Some(e) => ExitStatus::of_error(e),
        None if passed => ExitStatus::Passed,
        None => ExitStatus::Failed,
    };
    Ok(RunOutcome { dir, manifest, status })
}

/// Reads, validates and runs a config file under [`output_root`].
pub fn run_path(path: &Path) -> Result<RunOutcome> {
    let raw = fs::read(path)?;
    let text = String::from_utf8(raw.clone()).map_err(|e| Error::Config {
        path: "<root>".into(),
        message: e.to_string(),
    })?;
    let cfg = RunConfig::from_json(&text)?;
    run_config(&cfg, Some(&raw), &output_root(&cfg))
}
