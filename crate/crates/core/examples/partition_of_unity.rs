//! Frequency-uniform decomposition of a wave packet and its modulation norms.

use std::f64::consts::PI;

use bbm_modlab::modspace::{mod_norm, BumpProfile, ModNormParams, UniformDecomposition};
use bbm_modlab::spectral::{lp_norm, Field, GridSpec};

pub fn run() -> bbm_modlab::Result<()> {
    let grid = GridSpec::new(16.0 * PI, 1024)?;
    let u = Field::from_real_fn(grid, |x| (-x * x / 2.0).exp() * (3.0 * x).cos());
    for profile in BumpProfile::ALL {
        let dec = UniformDecomposition::build(grid, profile, 24)?;
        println!(
            "{:<14} residual {:.2e}  lower bound {:.4}  band {:.1}",
            profile.name(),
            dec.partition_residual(),
            dec.lower_bound(),
            dec.resolved_band()
        );
        let mut sum = Field::zeros(grid);
        for k in dec.indices() {
            sum = sum.add(&dec.block(&u, k)?)?;
        }
        println!("  reconstruction error {:.2e}", lp_norm(&sum.sub(&u)?, 2.0)?);
        for (s, p, q) in [(0.0, 2.0, 2.0), (1.0, 2.0, 1.0), (0.0, 1.0, 1.0)] {
            let norm = mod_norm(&u, ModNormParams::new(s, p, q)?, &dec)?;
            println!("  M^{s}_{{{p},{q}}} norm {norm:.6}");
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> bbm_modlab::Result<()> {
    run()
}
