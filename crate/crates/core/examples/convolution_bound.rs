//! Weighted time convolution behind the global bootstrap, and its rejection
//! when the tail is too slow to integrate.

use bbm_modlab::estimates::{log_spaced, weighted_convolution_bound};

pub fn run() -> bbm_modlab::Result<()> {
    let ts = log_spaced(1.0, 200.0, 30)?;
    for (rho, lambda) in [(0.3, 3), (0.5, 3), (0.2, 6)] {
        let report = weighted_convolution_bound(rho, lambda, &ts)?;
        println!(
            "rho={rho} lambda={lambda}: sup {:.4}  drift {:.1e}",
            report.sup_quotient, report.refinement_drift
        );
    }
    match weighted_convolution_bound(0.2, 3, &ts) {
        Err(e) => println!("rho=0.2 lambda=3: {e}"),
        Ok(r) => println!("rho=0.2 lambda=3: unexpectedly accepted, sup {}", r.sup_quotient),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> bbm_modlab::Result<()> {
    run()
}
