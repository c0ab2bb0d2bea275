//! Measured constants of the linear, product and Strichartz estimates.
//!
//! Every inequality `A(f) ≲ B(f)` becomes a table of quotients `A/B` over a
//! deterministic [`TestFamily`]. A constant counts as bounded when its
//! supremum is finite and stable under grid refinement and, for estimates
//! on unbounded time intervals, under doubling the window.

mod convolution;
mod decay;
mod family;
mod quotients;
mod report;

pub use convolution::weighted_convolution_bound;
pub use decay::{
    calibrated_envelope, calibrated_parameters, check_envelope, check_envelopes, decay_exponent, decay_quotients,
    fit_decay_slope, kernel_sup_envelope, log_spaced, raw_decay, sobolev_norm, DecayFit, EnvelopeCheck, EnvelopeCurve,
};
pub use family::{FamilyKind, Packet, TestFamily, TRUNCATION_LIMIT};
pub use quotients::{
    estimate_quotient, BilinearIndices, DispersiveSetup, EstimateSettings, MFoldIndices, PowerIndices, QuotientKind,
    TimeWindow,
};
pub use report::{QuotientReport, QuotientRow, QuotientSummary, QUOTIENT_CSV_HEADER};
