//! End-to-end acceptance run over the shipped configs.
//!
//! Prints one line per criterion with its runtime against the budget and
//! exits non-zero if any criterion fails.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use bbm_modlab::harness::{run_config, ExitStatus, RunConfig, RunOutcome};
use serde_json::Value;

fn config_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn load(name: &str) -> RunConfig {
    let text = std::fs::read_to_string(config_dir().join(name)).expect("config readable");
    RunConfig::from_json(&text).expect("config valid")
}

fn summary(run: &RunOutcome) -> Value {
    let text = std::fs::read_to_string(run.dir.join("summary.json")).expect("summary written");
    serde_json::from_str(&text).expect("summary parses")
}

fn check_value(run: &RunOutcome, name: &str) -> Option<f64> {
    run.manifest
        .checks
        .iter()
        .find(|c| c.name == name)
        .and_then(|c| c.value)
}

struct Criterion {
    id: u32,
    title: &'static str,
    budget: Duration,
    body: fn(&Path) -> Result<String, String>,
}

fn run_named(name: &str, root: &Path) -> Result<RunOutcome, String> {
    let cfg = load(name);
    let run = run_config(&cfg, None, root).map_err(|e| e.to_string())?;
    if run.status != ExitStatus::Passed {
        let failed: Vec<&str> = run
            .manifest
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        return Err(format!("status {:?}, failing checks {failed:?}", run.status));
    }
    Ok(run)
}

fn exponents(root: &Path) -> Result<String, String> {
    let run = run_named("exponents.json", root)?;
    let s = summary(&run);
    let r = s["results"]["pack"]["r"].as_f64().ok_or("r missing")?;
    // λ = 1, σ = −2, θ = 1/2: β = −1/5, r = λ(λ+2)/(λ+2+λθβ) = 3/(3 − 1/10)
    let expected = 30.0 / 29.0;
    if (r - expected).abs() > 1e-12 {
        return Err(format!("r = {r}, expected 30/29"));
    }
    let identities = s["results"]["identities"].as_array().ok_or("identities missing")?;
    if !identities.iter().all(|c| c["holds"] == Value::Bool(true)) {
        return Err("an identity of the configured pack failed".into());
    }
    Ok(format!(
        "r = {r}, sweep defect {:e}",
        check_value(&run, "identities over the sweep").unwrap_or(f64::NAN)
    ))
}

fn partition(root: &Path) -> Result<String, String> {
    let run = run_named("partition.json", root)?;
    Ok(format!(
        "residual {:e}, reconstruction {:e}",
        check_value(&run, "partition residual in the resolved band").unwrap_or(f64::NAN),
        check_value(&run, "block reconstruction").unwrap_or(f64::NAN)
    ))
}

fn group(root: &Path) -> Result<String, String> {
    let run = run_named("group_laws.json", root)?;
    let rows = std::fs::read_to_string(run.dir.join("group_laws.csv")).map_err(|e| e.to_string())?;
    let samples = rows.lines().count() - 1;
    if samples != 100 {
        return Err(format!("{samples} samples, expected 20 fields x 5 pairs"));
    }
    Ok(format!(
        "{samples} samples, unitarity {:e}",
        check_value(&run, "unitarity").unwrap_or(f64::NAN)
    ))
}

fn kernel(root: &Path) -> Result<String, String> {
    let run = run_named("kernel.json", root)?;
    Ok(format!(
        "max relative error {:e}",
        check_value(&run, "grid kernel vs frequency quadrature").unwrap_or(f64::NAN)
    ))
}

fn decay(root: &Path) -> Result<String, String> {
    let run = run_named("decay.json", root)?;
    let s = summary(&run);
    let fits = s["results"]["fits"].as_array().ok_or("fits missing")?;
    let slopes: Vec<String> = fits
        .iter()
        .map(|f| format!("{:.3}", f["slope"].as_f64().unwrap_or(f64::NAN)))
        .collect();
    Ok(format!(
        "slopes {}, envelope C = {:.4}",
        slopes.join(", "),
        s["results"]["envelope_constant"]
    ))
}

fn quotient_lines(run: &RunOutcome, expected: usize) -> Result<String, String> {
    let s = summary(run);
    let qs = s["results"]["quotients"].as_array().ok_or("quotients missing")?;
    if qs.len() != expected {
        return Err(format!("{} reports, expected {expected}", qs.len()));
    }
    let worst = qs
        .iter()
        .map(|q| {
            let sm = &q["summary"];
            let r = sm["refinement_drift"].as_f64().unwrap_or(f64::NAN);
            let w = sm["window_drift"].as_f64().unwrap_or(0.0);
            r.max(w)
        })
        .fold(0.0, f64::max);
    Ok(format!("{expected} reports, worst drift {worst:.2e}"))
}

fn modulation(root: &Path) -> Result<String, String> {
    let run = run_named("modulation_estimates.json", root)?;
    quotient_lines(&run, 4)
}

fn products(root: &Path) -> Result<String, String> {
    let run = run_named("products.json", root)?;
    quotient_lines(&run, 9)
}

fn strichartz(root: &Path) -> Result<String, String> {
    let run = run_named("strichartz.json", root)?;
    let nesting = run
        .manifest
        .checks
        .iter()
        .filter(|c| c.name.ends_with("nesting inequality"))
        .count();
    if nesting != 4 {
        return Err(format!("{nesting} nesting checks, expected 4"));
    }
    if !run
        .manifest
        .checks
        .iter()
        .any(|c| c.name == "custom symbol run completes" && c.passed)
    {
        return Err("custom symbol run missing".into());
    }
    quotient_lines(&run, 5)
}

fn picard(root: &Path) -> Result<String, String> {
    let run = run_named("picard.json", root)?;
    let s = summary(&run);
    let ratio = s["results"]["main"]["max_contraction_ratio"]
        .as_f64()
        .unwrap_or(f64::NAN);
    Ok(format!(
        "max ratio {ratio:.2e}, reference distance {:.2e}, membership drift {:.2e}",
        s["results"]["reference_distance"].as_f64().unwrap_or(f64::NAN),
        s["results"]["membership"]["window_drift"].as_f64().unwrap_or(f64::NAN)
    ))
}

fn solitary(root: &Path) -> Result<String, String> {
    let run = run_named("solitary.json", root)?;
    Ok(format!(
        "propagation error {:e}",
        check_value(&run, "propagation error").unwrap_or(f64::NAN)
    ))
}

fn convolution(root: &Path) -> Result<String, String> {
    let run = run_named("convolution.json", root)?;
    let s = summary(&run);
    let msg = s["results"]["rejection"].as_str().unwrap_or("");
    if !msg.contains("hypothesis λ≥3 regime violated") {
        return Err(format!("rejection message `{msg}`"));
    }
    Ok(format!(
        "sup {:.4}",
        s["results"]["summary"]["sup_quotient"].as_f64().unwrap_or(f64::NAN)
    ))
}

fn determinism(root: &Path) -> Result<String, String> {
    let cheap = [
        "exponents.json",
        "partition.json",
        "group_laws.json",
        "kernel.json",
        "solitary.json",
        "convolution.json",
    ];
    for name in cheap {
        let cfg = load(name);
        let a = run_config(&cfg, None, &root.join("first")).map_err(|e| e.to_string())?;
        let b = run_config(&cfg, None, &root.join("second")).map_err(|e| e.to_string())?;
        if a.manifest.outputs != b.manifest.outputs {
            return Err(format!("{name}: digests differ"));
        }
        let ma = std::fs::read(a.dir.join("manifest.json")).map_err(|e| e.to_string())?;
        let mb = std::fs::read(b.dir.join("manifest.json")).map_err(|e| e.to_string())?;
        if ma != mb {
            return Err(format!("{name}: manifests differ"));
        }
    }
    run_named("determinism.json", root)?;
    Ok(format!("{} configs rerun with identical digests", cheap.len() + 1))
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion {
            id: 1,
            title: "exponent algebra",
            budget: secs(1),
            body: exponents,
        },
        Criterion {
            id: 2,
            title: "partition of unity",
            budget: secs(5),
            body: partition,
        },
        Criterion {
            id: 3,
            title: "group structure",
            budget: secs(5),
            body: group,
        },
        Criterion {
            id: 4,
            title: "kernel cross-validation",
            budget: secs(60),
            body: kernel,
        },
        Criterion {
            id: 5,
            title: "dispersive decay",
            budget: secs(120),
            body: decay,
        },
        Criterion {
            id: 6,
            title: "modulation decay and smoothing",
            budget: secs(180),
            body: modulation,
        },
        Criterion {
            id: 7,
            title: "product estimates",
            budget: secs(120),
            body: products,
        },
        Criterion {
            id: 8,
            title: "Strichartz suite",
            budget: secs(300),
            body: strichartz,
        },
        Criterion {
            id: 9,
            title: "Picard construction",
            budget: secs(180),
            body: picard,
        },
        Criterion {
            id: 10,
            title: "solitary wave",
            budget: secs(120),
            body: solitary,
        },
        Criterion {
            id: 11,
            title: "scalar convolution bound",
            budget: secs(1),
            body: convolution,
        },
        Criterion {
            id: 12,
            title: "determinism",
            budget: secs(60),
            body: determinism,
        },
    ];
    let only: Option<u32> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|v| v.parse().ok());
    let tmp = tempfile::tempdir().expect("temp dir");
    let mut failures = 0;
    for c in criteria.iter().filter(|c| only.is_none_or(|id| id == c.id)) {
        let start = Instant::now();
        let result = (c.body)(&tmp.path().join(c.id.to_string()));
        let elapsed = start.elapsed();
        let in_budget = elapsed <= c.budget;
        let (mark, detail) = match (&result, in_budget) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d}; over budget")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if mark == "FAIL" {
            failures += 1;
        }
        println!(
            "criterion {:>2} {mark} {:<32} {:>7.2}s / {:>4}s  {detail}",
            c.id,
            c.title,
            elapsed.as_secs_f64(),
            c.budget.as_secs()
        );
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
