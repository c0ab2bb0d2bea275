//! The linear group `S(t)` and a general dispersive group `U(t)` on one packet.

use std::f64::consts::PI;

use bbm_modlab::group::{apply_s, apply_u, SymbolSpec};
use bbm_modlab::spectral::{lp_norm, Field, GridSpec};

pub fn run() -> bbm_modlab::Result<()> {
    let grid = GridSpec::new(32.0 * PI, 2048)?;
    let u = Field::from_real_fn(grid, |x| (-x * x).exp());
    let schrodinger = SymbolSpec::Polynomial {
        coefficients: vec![0.0, 0.0, 1.0],
    };
    println!(
        "{:>6} {:>12} {:>12} {:>12}",
        "t", "|S(t)u|_2", "|S(t)u|_inf", "|U(t)u|_inf"
    );
    for t in [0.0, 1.0, 5.0, 20.0, 50.0] {
        let s = apply_s(&u, t)?;
        let w = apply_u(&u, t, &schrodinger)?;
        println!(
            "{t:>6} {:>12.6} {:>12.6} {:>12.6}",
            lp_norm(&s, 2.0)?,
            lp_norm(&s, f64::INFINITY)?,
            lp_norm(&w, f64::INFINITY)?
        );
    }
    let back = apply_s(&apply_s(&u, 7.0)?, -7.0)?;
    println!("S(-7)S(7)u - u: {:.2e}", lp_norm(&back.sub(&u)?, 2.0)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> bbm_modlab::Result<()> {
    run()
}
