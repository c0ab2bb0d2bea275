//! Propagates a solitary wave with the RK4 stepper and tracks the invariants.

use std::f64::consts::PI;

use bbm_modlab::solver::{conserved_quantities, reference_evolve, solitary_parameters, solitary_wave, CauchyProblem};
use bbm_modlab::spectral::{lp_norm, GridSpec};

pub fn run() -> bbm_modlab::Result<()> {
    let grid = GridSpec::new(32.0 * PI, 2048)?;
    let (c, lambda) = (1.5, 1);
    let (a, b) = solitary_parameters(c, lambda)?;
    println!("c={c} lambda={lambda}: amplitude {a:.4}, inverse width {b:.4}");
    let u0 = solitary_wave(c, lambda, grid, 0.0)?;
    let traj = reference_evolve(&CauchyProblem::new(lambda, u0, 10.0)?, 0.05)?;
    for (t, u) in traj.iter().step_by(50) {
        let inv = conserved_quantities(u, lambda)?;
        let exact = solitary_wave(c, lambda, grid, t)?;
        let err = lp_norm(&u.sub(&exact)?, 2.0)? / lp_norm(&exact, 2.0)?;
        println!(
            "t={t:>5.2}  I1 {:.10}  I2 {:.10}  H {:.10}  error {err:.1e}",
            inv.i1, inv.i2, inv.h
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> bbm_modlab::Result<()> {
    run()
}
