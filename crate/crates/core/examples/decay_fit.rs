//! `L¹ → L^∞` decay of `S(t)J^σ` over a small family, with a log-log fit
//! and the calibrated kernel envelope.

use std::f64::consts::PI;

use bbm_modlab::estimates::{
    check_envelopes, decay_exponent, decay_quotients, fit_decay_slope, log_spaced, raw_decay, TestFamily,
};
use bbm_modlab::spectral::GridSpec;

pub fn run() -> bbm_modlab::Result<()> {
    let grid = GridSpec::new(32.0 * PI, 4096)?;
    let family = TestFamily {
        count: 6,
        width: [0.25, 2.0],
        modulation: [0.0, 3.0],
        ..TestFamily::default()
    };
    let ts = log_spaced(1.0, 50.0, 25)?;
    let mut curves = Vec::new();
    for sigma in [-2.0, -4.0] {
        let exponent = decay_exponent(sigma, f64::INFINITY)?;
        let report = decay_quotients(&family, sigma, f64::INFINITY, &ts, grid)?;
        let raw = raw_decay(&report, exponent);
        let fit = fit_decay_slope(&raw, [5.0, 50.0], exponent)?;
        println!(
            "sigma={sigma}: slope {:.3} (bound {:.3}), accepted {}, refinement drift {:.1e}",
            fit.slope,
            exponent,
            fit.accepts(0.05),
            report.refinement_drift
        );
        curves.push((sigma, raw.into_iter().filter(|s| s.0 > 1.0).collect::<Vec<_>>()));
    }
    let env = check_envelopes(&curves, 5.0)?;
    println!(
        "envelope constant {:.4}, dominates everywhere: {}",
        env.constant, env.holds
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> bbm_modlab::Result<()> {
    run()
}
