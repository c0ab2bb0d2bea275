//! Picard iteration on the Duhamel formula, checked against the RK4 stepper.

use std::f64::consts::PI;

use bbm_modlab::solver::{picard_solve, reference_evolve, CauchyProblem, PicardConfig};
use bbm_modlab::spectral::{lp_norm, GridSpec};
use bbm_modlab::Error;

pub fn run() -> bbm_modlab::Result<()> {
    let grid = GridSpec::new(16.0 * PI, 1024)?;
    for amplitude in [0.01, 0.1, 0.5] {
        let prob = CauchyProblem::gaussian(1, amplitude, grid, 1.0)?;
        let report = picard_solve(&prob, &PicardConfig::default())?;
        let stepped = reference_evolve(&prob, 0.0125)?;
        let gap = lp_norm(&stepped.last().sub(report.trajectory.last())?, 2.0)?;
        let s = report.summary();
        println!(
            "a={amplitude:<5} iterations {:>2}  max ratio {:.2e}  residual {:.1e}  distance to RK4 {:.1e}",
            s.iterations,
            s.max_contraction_ratio.unwrap_or(0.0),
            s.final_residual,
            gap
        );
    }
    let big = CauchyProblem::gaussian(2, 30.0, grid, 4.0)?;
    match picard_solve(&big, &PicardConfig::default()) {
        Err(Error::Divergence(partial)) => println!(
            "a=30: diverged after {} iterates, last distance {:.2e}",
            partial.iterate_distances.len(),
            partial.iterate_distances.last().copied().unwrap_or(f64::NAN)
        ),
        other => println!("a=30: {:?}", other.map(|r| r.converged)),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> bbm_modlab::Result<()> {
    run()
}
