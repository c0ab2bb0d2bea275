//! The gBBM Cauchy problem
//!
//! ```text
//! u(t) = S(t)u₀ − (i/(λ+1)) ∫₀ᵗ S(t−τ)φ(D)[u^{λ+1}(τ)] dτ
//! ```
//!
//! solved by Picard iteration on uniform time samples, and cross-checked
//! against an integrating-factor RK4 stepper that never touches the integral
//! form.

mod duhamel;
mod membership;
mod picard;
mod reference;
mod waves;

pub use duhamel::{dealias_limit, duhamel_apply, duhamel_resolution_defect, nonlinearity, residual};
pub use membership::{continuity_modulus, x_space_membership, ContinuityModulus, MembershipReport};
pub use picard::{picard_solve, DistanceNorm, PicardConfig, PicardSeed, SolveReport, SolveSummary};
pub use reference::{reference_evolve, ReferenceStepper};
pub use waves::{
    conserved_drift, conserved_quantities, solitary_parameters, solitary_wave, traveling_wave_residual, ConservedDrift,
    Invariants,
};

use crate::error::{Error, Result};
use crate::estimates::TRUNCATION_LIMIT;
use crate::spectral::{truncation_fraction, Field};

/// Real initial data `u₀`, power `λ` and horizon `T`.
#[derive(Clone, Debug)]
pub struct CauchyProblem {
    pub lambda: u32,
    pub u0: Field,
    pub t_end: f64,
}

impl CauchyProblem {
    pub fn new(lambda: u32, u0: Field, t_end: f64) -> Result<Self> {
        if lambda < 1 {
            return Err(Error::precondition("lambda >= 1", format!("got {lambda}")));
        }
        if !(t_end > 0.0 && t_end.is_finite()) {
            return Err(Error::precondition("T > 0", format!("got T = {t_end}")));
        }
        u0.ensure_real()?;
        let fraction = truncation_fraction(&u0);
        if fraction >= TRUNCATION_LIMIT {
            return Err(Error::Truncation { fraction });
        }
        Ok(Self { lambda, u0, t_end })
    }

    /// `u₀ = a·e^{−x²}` on `grid`.
    pub fn gaussian(lambda: u32, amplitude: f64, grid: crate::spectral::GridSpec, t_end: f64) -> Result<Self> {
        Self::new(lambda, Field::from_real_fn(grid, |x| amplitude * (-x * x).exp()), t_end)
    }

    pub fn with_t_end(&self, t_end: f64) -> Result<Self> {
        Self::new(self.lambda, self.u0.clone(), t_end)
    }
}
