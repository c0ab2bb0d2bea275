//! Numerical laboratory for the generalized Benjamin-Bona-Mahony equation
//!
//! ```text
//! u_t + u_x - u_xxt + u^λ u_x = 0
//! ```
//!
//! in modulation spaces `M^s_{p,q}`. The crate is layered:
//!
//! - [`spectral`]: periodic grids standing in for the real line, Fourier
//!   transforms, `L^p` quadrature, Fourier multipliers and time quadrature.
//! - [`modspace`]: the frequency-uniform decomposition `□_k`, modulation
//!   norms and mixed space-time norms.
//! - [`group`]: the dispersion symbol `φ(ξ) = ξ/(1+ξ²)`, the group
//!   `S(t) = e^{-itφ(D)}`, Bessel potentials, general dispersive groups,
//!   the oscillatory kernel and the exponent algebra.
//! - [`estimates`]: measured quotients for every decay, smoothing, product
//!   and Strichartz inequality, plus log-log slope fitting.
//! - [`solver`]: Picard iteration on the Duhamel formula, an independent
//!   integrating-factor RK4 stepper, invariants and solitary waves.
//! - [`harness`]: JSON-configured experiments with CSV/JSON outputs and a
//!   digest manifest.

#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod estimates;
pub mod group;
pub mod harness;
pub mod integrate;
pub mod modspace;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};
pub use num_complex::Complex64;
