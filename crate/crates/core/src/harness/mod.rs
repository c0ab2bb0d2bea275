//! JSON-configured experiments.
//!
//! A [`RunConfig`] names one experiment; [`run_config`] evaluates it and
//! writes `summary.json`, the CSV tables and `manifest.json` under
//! `<root>/<run-id>/`, where the run id is a digest prefix of the config
//! with all defaults filled in.
mod config;
mod experiments;
mod output;
mod registry;
mod runner;

pub use config::*;
pub use output::{Check, Outcome, Table};
pub use registry::{entries, list_experiments, Entry};
pub use runner::{
    canonical_config, output_root, run_config, run_id, run_path, ExitStatus, Manifest, OutputDigest, RunOutcome,
    DEFAULT_OUT_DIR, OUT_DIR_ENV, SCHEMA_VERSION,
};

/// Runs the experiment without touching the file system.
pub fn evaluate(cfg: &RunConfig) -> crate::Result<Outcome> {
    cfg.validate()?;
    experiments::evaluate(cfg)
}
