//! Measured constants of the smoothing and product estimates, written as CSV.

use std::f64::consts::PI;

use bbm_modlab::estimates::{
    estimate_quotient, BilinearIndices, EstimateSettings, QuotientKind, TestFamily, TimeWindow,
};
use bbm_modlab::group::ExponentPack;
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
        count: 8,
        center: [-5.0, 5.0],
        width: [0.5, 2.0],
        modulation: [0.0, 6.0],
        ..TestFamily::default()
    };
    let pack = ExponentPack::new(1, -2.0, 0.5, 1.0, 0.0)?;
    let mut kinds = vec![QuotientKind::PhiDSmooth];
    kinds.extend(BilinearIndices::admissible_tuples().map(QuotientKind::ProductBilinear));
    for kind in &kinds {
        let report = estimate_quotient(kind, &pack, &family, &settings)?;
        let s = report.summary();
        println!(
            "{:<18} sup {:.4}  refinement drift {:.1e}  stable {}",
            s.kind,
            s.sup_quotient,
            s.refinement_drift,
            report.is_stable(0.05)
        );
    }
    let report = estimate_quotient(&QuotientKind::PhiDSmooth, &pack, &family, &settings)?;
    let mut csv = Vec::new();
    report.write_csv(&mut csv)?;
    print!(
        "{}",
        String::from_utf8_lossy(&csv)
            .lines()
            .take(4)
            .collect::<Vec<_>>()
            .join("\n")
    );
    println!();
    Ok(())
}

#[allow(dead_code)]
fn main() -> bbm_modlab::Result<()> {
    run()
}
