use std::fmt;
use std::path::PathBuf;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimates::{DispersiveSetup, QuotientKind, TestFamily};
use crate::group::{ExponentPack, SymbolSpec};
use crate::modspace::BumpProfile;
use crate::solver::PicardConfig;
use crate::spectral::{GridSpec, QuadratureRule};

/// Experiment named by the `experiment` field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Experiment {
    Exponents,
    VerifyPartition,
    GroupLaws,
    KernelCheck,
    DecayFit,
    Envelope,
    /// `quotient` with the kinds listed under `quotients`, or `quotient <kind>`.
    Quotient(Option<String>),
    Strichartz,
    Picard,
    Solitary,
    ConvolutionBound,
    Determinism,
}

impl Experiment {
    pub const NAMES: [&'static str; 12] = [
        "exponents",
        "verify-partition",
        "group-laws",
        "kernel-check",
        "decay-fit",
        "envelope",
        "quotient",
        "strichartz",
        "picard",
        "solitary",
        "convolution-bound",
        "determinism",
    ];

    pub fn parse(name: &str) -> Result<Self> {
        let mut words = name.split_whitespace();
        let head = words.next().unwrap_or("");
        let arg = words.next();
        let unknown = || Error::Config {
            path: "experiment".into(),
            message: format!(
                "unknown experiment `{name}`; expected one of {}",
                Self::NAMES.join(", ")
            ),
        };
        if words.next().is_some() || (arg.is_some() && head != "quotient") {
            return Err(unknown());
        }
        Ok(match head {
            "exponents" => Self::Exponents,
            "verify-partition" => Self::VerifyPartition,
            "group-laws" => Self::GroupLaws,
            "kernel-check" => Self::KernelCheck,
            "decay-fit" => Self::DecayFit,
            "envelope" => Self::Envelope,
            "quotient" => match arg {
                Some(kind) if QuotientKind::from_name(kind).is_none() => {
                    return Err(Error::Config {
                        path: "experiment".into(),
                        message: format!(
                            "unknown quotient kind `{kind}`; expected one of {}",
                            QuotientKind::NAMES.join(", ")
                        ),
                    })
                }
                other => Self::Quotient(other.map(str::to_owned)),
            },
            "strichartz" => Self::Strichartz,
            "picard" => Self::Picard,
            "solitary" => Self::Solitary,
            "convolution-bound" => Self::ConvolutionBound,
            "determinism" => Self::Determinism,
            _ => return Err(unknown()),
        })
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Self::Exponents => "exponents",
            Self::VerifyPartition => "verify-partition",
            Self::GroupLaws => "group-laws",
            Self::KernelCheck => "kernel-check",
            Self::DecayFit => "decay-fit",
            Self::Envelope => "envelope",
            Self::Quotient(Some(kind)) => return write!(f, "quotient {kind}"),
            Self::Quotient(None) => "quotient",
            Self::Strichartz => "strichartz",
            Self::Picard => "picard",
            Self::Solitary => "solitary",
            Self::ConvolutionBound => "convolution-bound",
            Self::Determinism => "determinism",
        };
        f.write_str(name)
    }
}

/// Periodic grid `[-L, L)` with `N` samples.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    /// `L`.
    pub half_width: f64,
    /// `N`, a power of two.
    pub samples: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        let g = GridSpec::desk();
        Self {
            half_width: g.half_width(),
            samples: g.samples(),
        }
    }
}

impl GridConfig {
    pub fn spec(&self) -> Result<GridSpec> {
        GridSpec::new(self.half_width, self.samples)
    }
}

/// `(λ, σ, θ, q, s)`; `p` is `λ + 2` and may be given only as a check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct PackConfig {
    pub lambda: u32,
    pub sigma: f64,
    pub theta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    pub q: f64,
    pub s: f64,
}

impl Default for PackConfig {
    fn default() -> Self {
        Self {
            lambda: 1,
            sigma: -2.0,
            theta: 0.5,
            p: None,
            q: 1.0,
            s: 0.0,
        }
    }
}

impl PackConfig {
    pub fn pack(&self) -> Result<ExponentPack> {
        let pack = ExponentPack::new(self.lambda, self.sigma, self.theta, self.q, self.s)?;
        if let Some(p) = self.p {
            if p != pack.p {
                return Err(Error::hypothesis(
                    "p = lambda + 2",
                    format!("got p = {p}, lambda + 2 = {}", pack.p),
                ));
            }
        }
        Ok(pack)
    }
}

/// Time windows shared by the experiments.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct Windows {
    /// Decay sweeps run on `[t_min, t_max]`.
    pub t_min: f64,
    pub t_max: f64,
    /// Log-spaced points of the decay sweep.
    pub decay_points: usize,
    /// Slope fit window.
    pub fit_window: [f64; 2],
    /// The envelope constant is fixed on `t <= calibrate_until`.
    pub calibrate_until: f64,
    /// Quotient window `[0, T]`.
    pub t_end: f64,
    /// Uniform samples of `[0, T]`.
    pub samples: usize,
}

impl Default for Windows {
    fn default() -> Self {
        Self {
            t_min: 1.0,
            t_max: 100.0,
            decay_points: 41,
            fit_window: [10.0, 100.0],
            calibrate_until: 10.0,
            t_end: 40.0,
            samples: 161,
        }
    }
}

/// Pass/fail thresholds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub identity: f64,
    pub partition: f64,
    pub reconstruction: f64,
    pub group: f64,
    pub realness: f64,
    pub kernel: f64,
    pub slope_margin: f64,
    pub constancy: f64,
    pub drift: f64,
    pub contraction: f64,
    pub residual: f64,
    pub reference_distance: f64,
    /// Allowed factor between observed and `α^λ` contraction scaling.
    pub scaling_factor: f64,
    pub membership_drift: f64,
    pub wave_residual: f64,
    pub propagation: f64,
    pub invariant_drift: f64,
    pub convolution_drift: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            identity: 1e-12,
            partition: 1e-12,
            reconstruction: 1e-10,
            group: 1e-12,
            realness: 1e-10,
            kernel: 1e-6,
            slope_margin: 0.05,
            constancy: 1e-12,
            drift: 0.05,
            contraction: 0.5,
            residual: 1e-8,
            reference_distance: 1e-5,
            scaling_factor: 2.0,
            membership_drift: 0.05,
            wave_residual: 1e-8,
            propagation: 1e-3,
            invariant_drift: 1e-8,
            convolution_drift: 0.01,
        }
    }
}

/// Decomposition and time quadrature for the quotient experiments.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct EstimateOptions {
    pub profile: BumpProfile,
    pub k_max: i64,
    pub rule: QuadratureRule,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        Self {
            profile: BumpProfile::default(),
            k_max: 48,
            rule: QuadratureRule::default(),
        }
    }
}

/// Sample counts for the property sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct SweepOptions {
    pub sigma_points: usize,
    pub pack_points: usize,
    /// Random fields of the partition check.
    pub fields: usize,
    /// Random fields of the group-law check.
    pub group_fields: usize,
    pub time_pairs: usize,
    pub kernel_points: usize,
    /// Width of the Gaussian probe in the kernel check.
    pub kernel_width: f64,
    pub sigmas: [f64; 2],
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            sigma_points: 10_000,
            pack_points: 200,
            fields: 100,
            group_fields: 20,
            time_pairs: 5,
            kernel_points: 10,
            kernel_width: 0.5,
            sigmas: [-2.0, -4.0],
        }
    }
}

/// Strichartz suite: the four kinds for `S(t)` plus `strichartz_hom` for `custom`.
#[derive(Clone, Debug, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct StrichartzOptions {
    pub custom: Option<DispersiveSetup>,
}

impl Default for StrichartzOptions {
    fn default() -> Self {
        Self {
            custom: Some(DispersiveSetup {
                symbol: SymbolSpec::Polynomial {
                    coefficients: vec![0.0, 0.0, 1.0],
                },
                mu: Some(1.0 / 16.0),
                delta: Some(1.0),
            }),
        }
    }
}

/// Picard runs: the main run, the data-scaling pair, the `λ` sweep and the
/// weighted-space membership run (which uses `pack`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct PicardOptions {
    pub lambda: u32,
    /// `u₀ = amplitude · e^{−x²}`.
    pub amplitude: f64,
    pub t_end: f64,
    pub solver: PicardConfig,
    pub reference_dt: f64,
    /// Second run at `scaling · amplitude`.
    pub scaling: f64,
    pub lambdas: Vec<u32>,
    pub membership_amplitude: f64,
    /// The membership run covers `[0, 2·membership_t_end]`.
    pub membership_t_end: f64,
    pub membership_samples: usize,
    pub continuity_levels: usize,
    /// Every `time_stride`-th sample and `space_stride`-th node go to the snapshot CSV.
    pub time_stride: usize,
    pub space_stride: usize,
}

impl Default for PicardOptions {
    fn default() -> Self {
        Self {
            lambda: 1,
            amplitude: 0.01,
            t_end: 1.0,
            solver: PicardConfig::default(),
            reference_dt: 0.0125,
            scaling: 0.5,
            lambdas: vec![1, 2, 3],
            membership_amplitude: 0.1,
            membership_t_end: 2.0,
            membership_samples: 81,
            continuity_levels: 4,
            time_stride: 10,
            space_stride: 16,
        }
    }
}

/// Solitary-wave profile checks and one propagation run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct SolitaryOptions {
    /// `(c, λ)` pairs for the profile-equation residual.
    pub pairs: Vec<(f64, u32)>,
    pub speed: f64,
    pub lambda: u32,
    pub t_end: f64,
    pub dt: f64,
    pub space_stride: usize,
}

impl Default for SolitaryOptions {
    fn default() -> Self {
        Self {
            pairs: vec![(1.5, 1), (2.0, 1), (2.0, 2)],
            speed: 1.5,
            lambda: 1,
            t_end: 10.0,
            dt: 0.05,
            space_stride: 16,
        }
    }
}

/// Scalar convolution bound: `ρ`, `λ` and log-spaced `t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct ConvolutionOptions {
    pub rho: f64,
    pub lambda: u32,
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
    /// A `(ρ, λ)` pair with `ρ(λ+1) ≤ 1` that must be rejected.
    pub rejected: (f64, u32),
}

impl Default for ConvolutionOptions {
    fn default() -> Self {
        Self {
            rho: 0.3,
            lambda: 3,
            t_min: 1.0,
            t_max: 200.0,
            points: 60,
            rejected: (0.2, 3),
        }
    }
}

/// One experiment run. Every section except `experiment` has defaults, and
/// the effective values are echoed into the manifest.
#[derive(Clone, Debug, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// `exponents`, `verify-partition`, `group-laws`, `kernel-check`,
    /// `decay-fit`, `envelope`, `quotient` or `quotient <kind>`,
    /// `strichartz`, `picard`, `solitary`, `convolution-bound`, `determinism`.
    pub experiment: String,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub pack: PackConfig,
    #[serde(default)]
    pub family: TestFamily,
    #[serde(default)]
    pub windows: Windows,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub estimate: EstimateOptions,
    #[serde(default)]
    pub sweep: SweepOptions,
    /// Kinds for `quotient`; empty means all twelve with default indices.
    #[serde(default)]
    pub quotients: Vec<QuotientKind>,
    #[serde(default)]
    pub strichartz: StrichartzOptions,
    #[serde(default)]
    pub picard: PicardOptions,
    #[serde(default)]
    pub solitary: SolitaryOptions,
    #[serde(default)]
    pub convolution: ConvolutionOptions,
    /// Config rerun twice by `determinism`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner: Option<Box<RunConfig>>,
    /// Output directory; `BBM_MODLAB_OUT` takes precedence. Not echoed.
    #[serde(default, skip_serializing)]
    pub output_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(experiment: impl Into<String>) -> Self {
        Self {
            experiment: experiment.into(),
            grid: GridConfig::default(),
            pack: PackConfig::default(),
            family: TestFamily::default(),
            windows: Windows::default(),
            tolerances: Tolerances::default(),
            estimate: EstimateOptions::default(),
            sweep: SweepOptions::default(),
            quotients: Vec::new(),
            strichartz: StrichartzOptions::default(),
            picard: PicardOptions::default(),
            solitary: SolitaryOptions::default(),
            convolution: ConvolutionOptions::default(),
            inner: None,
            output_dir: None,
        }
    }

    /// Parses JSON, reporting the path of the first offending field.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: Self = serde_path_to_error::deserialize(de).map_err(|e| Error::Config {
            path: match e.path().to_string() {
                p if p == "." => "<root>".into(),
                p => p,
            },
            message: e.inner().to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn experiment(&self) -> Result<Experiment> {
        Experiment::parse(&self.experiment)
    }

    /// Structural checks that do not depend on the experiment's hypotheses.
    pub fn validate(&self) -> Result<()> {
        let field = |path: &str, e: Error| Error::Config {
            path: path.into(),
            message: e.to_string(),
        };
        let experiment = self.experiment()?;
        self.grid.spec().map_err(|e| field("grid", e))?;
        self.family.validate().map_err(|e| field("family", e))?;
        self.picard.solver.validate().map_err(|e| field("picard.solver", e))?;
        let w = &self.windows;
        if !(w.t_min > 0.0 && w.t_max > w.t_min) {
            return Err(Error::Config {
                path: "windows".into(),
                message: format!("need 0 < t_min < t_max, got [{}, {}]", w.t_min, w.t_max),
            });
        }
        if experiment == Experiment::Determinism {
            let inner = self.inner.as_ref().ok_or_else(|| Error::Config {
                path: "inner".into(),
                message: "determinism needs an inner config".into(),
            })?;
            if inner.experiment()? == Experiment::Determinism {
                return Err(Error::Config {
                    path: "inner.experiment".into(),
                    message: "determinism cannot nest".into(),
                });
            }
            inner.validate()?;
        }
        Ok(())
    }
}

/// JSON schema of [`RunConfig`].
pub fn schema() -> serde_json::Value {
    serde_json::to_value(schemars::schema_for!(RunConfig)).expect("schema serializes")
}
