//! Periodic discretization of the real line.
//!
//! Fields live on `x_m = -L + mΔx`, `Δx = 2L/N`, and spectra on
//! `ξ_j = πj/L`, `j = -N/2..N/2-1`. The transform convention is
//!
//! ```text
//! f̂(ξ_j) = Δx Σ_m f(x_m) e^{-iξ_j x_m},     f(x_m) = (1/2L) Σ_j f̂(ξ_j) e^{iξ_j x_m}
//! ```
//!
//! so that a symbol `m(ξ)` acts on samples exactly as on the line.

mod field;
mod grid;
mod quadrature;
mod transform;

pub use field::{Field, Spectrum, Trajectory, REAL_TOLERANCE};
pub use grid::GridSpec;
pub use quadrature::{cumulative_integrals, quadrature_weights, time_quadrature, QuadratureRule};
pub(crate) use transform::InverseFft;
pub use transform::{
    apply_multiplier, apply_sampled_multiplier, forward_transform, inverse_transform, lp_norm, lp_norm_values,
    truncation_fraction,
};

/// Hölder conjugate `p' = p/(p-1)`, with `1' = ∞` and `∞' = 1`.
pub fn conjugate_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}
