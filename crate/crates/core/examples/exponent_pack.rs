//! Derived exponents and identity checks for a few `(λ, σ, θ)` choices.

use bbm_modlab::group::{beta, strichartz_sigma_choices, ExponentPack};

pub fn run() -> bbm_modlab::Result<()> {
    for (lambda, sigma, theta) in [(1, -2.0, 0.5), (3, -2.0, 0.5), (6, -4.0, 0.25)] {
        let pack = ExponentPack::new(lambda, sigma, theta, 2.0, 0.0)?;
        println!(
            "lambda={lambda} sigma={sigma} theta={theta}: beta={:.4} p={} r={:.6} gamma={:.4} mu={:.6} delta={}",
            pack.beta,
            pack.p,
            pack.r,
            pack.gamma,
            pack.mu,
            pack.delta()
        );
        for c in pack.identities() {
            println!("  {:<40} {}", c.name, if c.holds { "holds" } else { "FAILS" });
        }
    }
    println!("beta(-4) = {}", beta(-4.0)?);
    println!("sigma choices for lambda = 6: {:?}", strichartz_sigma_choices(6)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> bbm_modlab::Result<()> {
    run()
}
