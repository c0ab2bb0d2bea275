use std::f64::consts::PI;

use bbm_modlab::solver::{
    conserved_quantities, picard_solve, reference_evolve, solitary_wave, CauchyProblem, PicardConfig, PicardSeed,
};
use bbm_modlab::spectral::{lp_norm, GridSpec};
use bbm_modlab::Error;

fn grid() -> GridSpec {
    GridSpec::new(16.0 * PI, 1024).unwrap()
}

#[test]
fn fixed_point_does_not_depend_on_seed() {
    let prob = CauchyProblem::gaussian(2, 0.2, grid(), 1.0).unwrap();
    let linear = picard_solve(&prob, &PicardConfig::default()).unwrap();
    let frozen = picard_solve(
        &prob,
        &PicardConfig {
            seed: PicardSeed::Frozen,
            ..PicardConfig::default()
        },
    )
    .unwrap();
    let gap = lp_norm(&linear.trajectory.last().sub(frozen.trajectory.last()).unwrap(), 2.0).unwrap();
    assert!(gap < 2.0 * PicardConfig::default().tol, "{gap}");
}

#[test]
fn picard_agrees_with_time_stepper() {
    let prob = CauchyProblem::gaussian(1, 0.3, grid(), 2.0).unwrap();
    let report = picard_solve(&prob, &PicardConfig::default()).unwrap();
    assert!(report.converged);
    let stepped = reference_evolve(&prob, 0.01).unwrap();
    let d = lp_norm(&stepped.last().sub(report.trajectory.last()).unwrap(), 2.0).unwrap();
    assert!(d < 1e-7, "{d}");
}

#[test]
fn contraction_ratio_scales_with_data_size() {
    // the Duhamel map is homogeneous of degree λ+1, so ratios scale like α^λ
    for lambda in [1u32, 2] {
        let ratio = |a: f64| {
            let prob = CauchyProblem::gaussian(lambda, a, grid(), 1.0).unwrap();
            picard_solve(&prob, &PicardConfig::default())
                .unwrap()
                .contraction_ratios[0]
        };
        let observed = ratio(0.05) / ratio(0.1);
        let expected = 0.5f64.powi(lambda as i32);
        assert!(
            (observed / expected - 1.0).abs() < 0.1,
            "lambda {lambda}: {observed} vs {expected}"
        );
    }
}

#[test]
fn large_data_reports_divergence() {
    let prob = CauchyProblem::gaussian(2, 30.0, grid(), 4.0).unwrap();
    match picard_solve(&prob, &PicardConfig::default()) {
        Err(Error::Divergence(partial)) => assert!(!partial.iterate_distances.is_empty()),
        other => panic!("expected divergence, got {:?}", other.map(|r| r.converged)),
    }
}

#[test]
fn solitary_wave_keeps_invariants_under_stepping() {
    let g = grid();
    let u0 = solitary_wave(1.5, 1, g, 0.0).unwrap();
    let prob = CauchyProblem::new(1, u0.clone(), 5.0).unwrap();
    let traj = reference_evolve(&prob, 0.05).unwrap();
    let a = conserved_quantities(&u0, 1).unwrap();
    let b = conserved_quantities(traj.last(), 1).unwrap();
    assert!((a.i2 - b.i2).abs() < 1e-8 * a.i2);
    assert!((a.h - b.h).abs() < 1e-8 * a.h);
    let exact = solitary_wave(1.5, 1, g, 5.0).unwrap();
    let err = lp_norm(&traj.last().sub(&exact).unwrap(), 2.0).unwrap() / lp_norm(&exact, 2.0).unwrap();
    assert!(err < 1e-6, "{err}");
}

#[test]
fn wide_data_fails_truncation_check() {
    let g = GridSpec::new(4.0, 256).unwrap();
    assert!(matches!(
        CauchyProblem::gaussian(1, 1.0, g, 1.0),
        Err(Error::Truncation { .. })
    ));
}
