//! Frequency-uniform decomposition and modulation-space norms.
//!
//! `σ_k(ξ) = ρ(ξ−k)/Σ_l ρ(ξ−l)` is sampled on the grid frequencies once,
//! and `□_k = 𝓕⁻¹σ_k𝓕`. Norms are
//!
//! ```text
//! ‖u‖_{M^s_{p,q}} = (Σ_{|k|≤k_max} (1+|k|)^{sq} ‖□_k u‖_p^q)^{1/q}
//! ```
//!
//! with `‖·‖_p` the grid quadrature of [`crate::spectral::lp_norm`].

mod decomposition;
mod norms;
mod profile;

pub use decomposition::{sigma, UniformDecomposition};
pub use norms::{
    block_lp_norms, mixed_time_norm, mod_norm, nu1, time_lebesgue, weighted_lq, weighted_sup_norm, BlockNormTable,
    ModNormParams, Nesting,
};
pub use profile::BumpProfile;
