use thiserror::Error;

use crate::solver::SolveReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("symbol is not finite at xi = {xi}")]
    NonFiniteSymbol { xi: f64 },

    #[error("symbol has non-zero imaginary part {imag:e} at xi = {xi}")]
    ComplexSymbol { xi: f64, imag: f64 },

    #[error("invalid Lebesgue exponent p = {0} (need p >= 1)")]
    InvalidExponent(f64),

    #[error("q = infinity is not supported; use 1 <= q < infinity")]
    UnsupportedSupNorm,

    #[error("invalid modulation parameter: {0}")]
    ModParams(String),

    #[error("time samples are not strictly increasing at index {index}")]
    UnsortedTimes { index: usize },

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("empty trajectory")]
    EmptyTrajectory,

    #[error("k_max = {k_max} too large for grid (at most {limit})")]
    KmaxTooLarge { k_max: i64, limit: i64 },

    #[error("block index {k} outside [-{k_max}, {k_max}]")]
    BlockOutOfRange { k: i64, k_max: i64 },

    #[error("hypothesis {name} violated: {detail}")]
    Hypothesis { name: &'static str, detail: String },

    #[error("precondition {name} violated: {detail}")]
    Precondition { name: &'static str, detail: String },

    #[error("field is not real: imaginary mass fraction {0:e}")]
    NotReal(f64),

    #[error("input fails truncation diagnostic: mass fraction {fraction:e} outside |x| <= L/2")]
    Truncation { fraction: f64 },

    #[error("Picard iteration diverged after {} iterations", .0.iterate_distances.len())]
    Divergence(Box<SolveReport>),

    #[error("time stepper became unstable at t = {t}")]
    Instability { t: f64 },

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn hypothesis(name: &'static str, detail: impl Into<String>) -> Self {
        Error::Hypothesis {
            name,
            detail: detail.into(),
        }
    }

    pub(crate) fn precondition(name: &'static str, detail: impl Into<String>) -> Self {
        Error::Precondition {
            name,
            detail: detail.into(),
        }
    }
}
