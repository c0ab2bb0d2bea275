//! The BBM group `S(t) = e^{−itφ(D)}`, Bessel potentials, general dispersive
//! groups `U(t) = 𝓕⁻¹e^{itP(ξ)}𝓕`, the decay exponent `β_σ` and the
//! exponent algebra of the well-posedness results.

mod exponents;
mod kernel;
mod symbols;

pub use exponents::{strichartz_sigma_choices, ExponentPack, IdentityCheck, IDENTITY_TOLERANCE};
pub use kernel::{kernel_direct, kernel_direct_smoothed, KernelValue, KERNEL_TOLERANCE};
pub use symbols::{
    apply_j, apply_minus_i_phi_d, apply_phi_d, apply_s, apply_s_j, apply_u, beta, beta_branches, phi, phi_prime,
    phi_second, sampled_phi, shifted_phi_second, SampledGroup, SymbolSpec,
};
