//! Runs a JSON config through the harness into a temporary directory and
//! prints the manifest.

use bbm_modlab::harness::{run_config, RunConfig};

pub fn run() -> bbm_modlab::Result<()> {
    let cfg = RunConfig::from_json(
        r#"{
            "experiment": "convolution-bound",
            "convolution": { "rho": 0.3, "lambda": 3, "points": 40 }
        }"#,
    )?;
    let root = std::env::temp_dir().join("bbm-modlab-example");
    let run = run_config(&cfg, None, &root)?;
    println!("status {:?} in {}", run.status, run.dir.display());
    for c in &run.manifest.checks {
        println!("  {:<24} {}", c.name, if c.passed { "pass" } else { "FAIL" });
    }
    for o in &run.manifest.outputs {
        println!("  {:<18} {}", o.file, &o.sha256[..16]);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> bbm_modlab::Result<()> {
    run()
}
