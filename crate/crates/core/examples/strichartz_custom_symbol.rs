//! Homogeneous Strichartz quotient for `S(t)` and for `P(ξ) = ξ²` with
//! user-supplied decay and smoothing indices.

use std::f64::consts::PI;

use bbm_modlab::estimates::{
    estimate_quotient, DispersiveSetup, EstimateSettings, QuotientKind, TestFamily, TimeWindow,
};
use bbm_modlab::group::{ExponentPack, SymbolSpec};
use bbm_modlab::spectral::GridSpec;

pub fn run() -> bbm_modlab::Result<()> {
    let settings = EstimateSettings {
        grid: GridSpec::new(16.0 * PI, 1024)?,
        k_max: 24,
        window: TimeWindow {
            t_end: 4.0,
            samples: 17,
        },
        ..EstimateSettings::default()
    };
    let family = TestFamily {
        count: 4,
        center: [-5.0, 5.0],
        ..TestFamily::default()
    };
    let pack = ExponentPack::new(6, -4.0, 0.25, 2.0, 0.0)?;
    let setups = [
        ("S(t)", DispersiveSetup::default()),
        (
            "xi^2",
            DispersiveSetup {
                symbol: SymbolSpec::Polynomial {
                    coefficients: vec![0.0, 0.0, 1.0],
                },
                mu: Some(1.0 / 16.0),
                delta: Some(1.0),
            },
        ),
    ];
    for (label, setup) in setups {
        let report = estimate_quotient(&QuotientKind::StrichartzHom(setup), &pack, &family, &settings)?;
        println!(
            "{label:<5} sup {:.4}  window drift {:?}  nesting {:?}",
            report.sup_quotient, report.window_drift, report.nesting_holds
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> bbm_modlab::Result<()> {
    run()
}
