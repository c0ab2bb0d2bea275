//! Kernel of `S(t)J^σ` by frequency quadrature, against the grid evolution
//! of a narrow Gaussian.

use std::f64::consts::{PI, TAU};

use bbm_modlab::group::{apply_s_j, kernel_direct, kernel_direct_smoothed};
use bbm_modlab::spectral::{Field, GridSpec};

pub fn run() -> bbm_modlab::Result<()> {
    let grid = GridSpec::new(64.0 * PI, 8192)?;
    let w = 0.5;
    let probe = Field::from_real_fn(grid, |x| (-x * x / (2.0 * w * w)).exp() / (w * TAU.sqrt()));
    let sigma = -2.0;
    for t in [1.0, 4.0, 16.0] {
        let evolved = apply_s_j(&probe, t, sigma)?;
        let m = ((0.8 * t + grid.half_width()) / grid.dx()).round() as usize;
        let x = grid.x(m);
        let smoothed = kernel_direct_smoothed(t, sigma, x, w)?;
        let raw = kernel_direct(t, sigma, x)?;
        println!(
            "t={t:>4} x={x:>8.4}  grid {:>12.9}  quadrature {:>12.9}  unsmoothed {:>12.9}  ({} evaluations)",
            evolved.values()[m].re,
            smoothed.value / TAU,
            raw.value / TAU,
            smoothed.evaluations
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> bbm_modlab::Result<()> {
    run()
}
