use num_complex::Complex64;
use rayon::prelude::*;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::family::TestFamily;
use super::report::{relative_drift, QuotientReport, QuotientRow};
use crate::error::{Error, Result};
use crate::group::{apply_minus_i_phi_d, ExponentPack, SampledGroup, SymbolSpec};
use crate::integrate::integrate;
use crate::modspace::{block_lp_norms, weighted_lq, BlockNormTable, BumpProfile, Nesting, UniformDecomposition};
use crate::spectral::{
    conjugate_exponent, forward_transform, inverse_transform, Field, GridSpec, QuadratureRule, Spectrum,
};

/// Indices of `‖uv‖_{M^s_{p,σ}} ≲ ‖u‖_{M^s_{p₁,σ₁}}‖v‖_{M^s_{p₂,σ₂}}`, with `1/p = 1/p₁ + 1/p₂`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct BilinearIndices {
    pub p1: f64,
    pub p2: f64,
    pub sigma: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    pub s: f64,
}

impl BilinearIndices {
    pub fn p(&self) -> f64 {
        1.0 / (1.0 / self.p1 + 1.0 / self.p2)
    }

    /// `1 < σ, σ₁, σ₂ < ∞`, `1/σ − 1/σ₁ − 1/σ₂ + 1 ≤ s < 1/σ`, `p ≥ 1`.
    pub fn validate(&self) -> Result<()> {
        if self.p1 < 1.0 || self.p2 < 1.0 || self.p() < 1.0 {
            return Err(Error::hypothesis(
                "1/p = 1/p1 + 1/p2 with p >= 1",
                format!("p1 = {}, p2 = {}", self.p1, self.p2),
            ));
        }
        for q in [self.sigma, self.sigma1, self.sigma2] {
            if !(q > 1.0 && q.is_finite()) {
                return Err(Error::hypothesis("1 < sigma, sigma1, sigma2 < inf", format!("got {q}")));
            }
        }
        let lower = 1.0 / self.sigma - 1.0 / self.sigma1 - 1.0 / self.sigma2 + 1.0;
        if !(lower <= self.s && self.s < 1.0 / self.sigma) {
            return Err(Error::hypothesis(
                "1/sigma - 1/sigma1 - 1/sigma2 + 1 <= s < 1/sigma",
                format!("need {lower} <= {} < {}", self.s, 1.0 / self.sigma),
            ));
        }
        Ok(())
    }

    /// Three admissible tuples; the first two have equal `ℓ^q` indices with `1 − 1/q ≤ s < 1/q`.
    pub fn admissible_tuples() -> [Self; 3] {
        [
            Self {
                p1: 4.0,
                p2: 4.0,
                sigma: 1.5,
                sigma1: 1.5,
                sigma2: 1.5,
                s: 0.4,
            },
            Self {
                p1: 3.0,
                p2: 6.0,
                sigma: 1.2,
                sigma1: 1.2,
                sigma2: 1.2,
                s: 0.5,
            },
            Self {
                p1: 2.0,
                p2: 2.0,
                sigma: 1.5,
                sigma1: 1.8,
                sigma2: 1.8,
                s: 0.6,
            },
        ]
    }
}

impl Default for BilinearIndices {
    fn default() -> Self {
        Self::admissible_tuples()[0]
    }
}

/// Indices of `‖u^m‖_{M^s_{q,μ}} ≲ ‖u‖^m_{M^s_{mq,ν}}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct PowerIndices {
    pub m: u32,
    pub q: f64,
    pub nu: f64,
    pub mu: f64,
    pub s: f64,
}

impl PowerIndices {
    /// `m ≥ 1`, `q ≥ 1`, `0 ≤ s < 1/ν`, `1/ν − (m−1)s ≤ m/μ − m + 1`, `1 ≤ ν ≤ μ < ∞`.
    pub fn validate(&self) -> Result<()> {
        if self.m < 1 || !(self.q >= 1.0 && self.q.is_finite()) {
            return Err(Error::hypothesis(
                "m >= 1 and 1 <= q < inf",
                format!("m = {}, q = {}", self.m, self.q),
            ));
        }
        if !(1.0 <= self.nu && self.nu <= self.mu && self.mu.is_finite()) {
            return Err(Error::hypothesis(
                "1 <= nu <= mu < inf",
                format!("nu = {}, mu = {}", self.nu, self.mu),
            ));
        }
        if !(0.0 <= self.s && self.s < 1.0 / self.nu) {
            return Err(Error::hypothesis(
                "0 <= s < 1/nu",
                format!("s = {}, 1/nu = {}", self.s, 1.0 / self.nu),
            ));
        }
        let m = self.m as f64;
        let lhs = 1.0 / self.nu - (m - 1.0) * self.s;
        let rhs = m / self.mu - m + 1.0;
        if lhs > rhs {
            return Err(Error::hypothesis(
                "1/nu - (m-1)s <= m/mu - m + 1",
                format!("{lhs} > {rhs}"),
            ));
        }
        Ok(())
    }

    pub fn admissible_tuples() -> [Self; 3] {
        [
            Self {
                m: 2,
                q: 2.0,
                nu: 1.2,
                mu: 1.2,
                s: 0.5,
            },
            Self {
                m: 3,
                q: 1.0,
                nu: 1.1,
                mu: 1.1,
                s: 0.3,
            },
            Self {
                m: 2,
                q: 1.0,
                nu: 1.2,
                mu: 1.5,
                s: 0.6,
            },
        ]
    }
}

impl Default for PowerIndices {
    fn default() -> Self {
        Self::admissible_tuples()[0]
    }
}

/// Indices of `‖Π u_i‖_{M^s_{p₀,q₀}} ≲ Π‖u_i‖_{M^s_{p_i,q_i}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct MFoldIndices {
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub s: f64,
}

impl MFoldIndices {
    /// `1/p₀ = Σ 1/p_i`.
    pub fn p0(&self) -> f64 {
        1.0 / self.p.iter().map(|p| 1.0 / p).sum::<f64>()
    }

    /// `1/q₀ = Σ 1/q_i − m + 1`.
    pub fn q0(&self) -> f64 {
        let m = self.q.len() as f64;
        1.0 / (self.q.iter().map(|q| 1.0 / q).sum::<f64>() - m + 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p.is_empty() || self.p.len() != self.q.len() {
            return Err(Error::hypothesis(
                "one (p_i, q_i) pair per factor",
                format!("{} p values, {} q values", self.p.len(), self.q.len()),
            ));
        }
        if self.p.iter().chain(&self.q).any(|v| !(*v >= 1.0)) {
            return Err(Error::hypothesis(
                "p_i, q_i >= 1",
                format!("p = {:?}, q = {:?}", self.p, self.q),
            ));
        }
        let (p0, q0) = (self.p0(), self.q0());
        if !(p0 >= 1.0) {
            return Err(Error::hypothesis("sum 1/p_i = 1/p0 <= 1", format!("p0 = {p0}")));
        }
        if !(q0 >= 1.0 && q0.is_finite()) {
            return Err(Error::hypothesis(
                "sum 1/q_i = m - 1 + 1/q0 with 1 <= q0 < inf",
                format!("q0 = {q0}"),
            ));
        }
        if !(self.s >= 0.0) {
            return Err(Error::hypothesis("s >= 0", format!("s = {}", self.s)));
        }
        Ok(())
    }

    pub fn admissible_tuples() -> [Self; 3] {
        [
            Self {
                p: vec![4.0, 4.0],
                q: vec![1.0, 1.0],
                s: 0.5,
            },
            Self {
                p: vec![6.0, 6.0, 6.0],
                q: vec![1.0, 1.0, 1.0],
                s: 0.0,
            },
            Self {
                p: vec![3.0, 6.0],
                q: vec![1.0, 2.0],
                s: 1.0,
            },
        ]
    }
}

impl Default for MFoldIndices {
    fn default() -> Self {
        Self::admissible_tuples()[0].clone()
    }
}

/// Dispersive group for the Strichartz kinds with its decay index `μ` and
/// smoothing index `δ`.
///
/// For `P = −φ` both default to the values derived from the pack
/// (`μ` from the pack, `δ = −σθ`); any supplied value must agree. Other
/// symbols need both supplied.
#[derive(Clone, Debug, Default, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct DispersiveSetup {
    pub symbol: SymbolSpec,
    pub mu: Option<f64>,
    pub delta: Option<f64>,
}

impl DispersiveSetup {
    /// `(μ, δ)` after the consistency checks.
    pub fn indices(&self, pack: &ExponentPack) -> Result<(f64, f64)> {
        let (mu, delta) = match self.symbol {
            SymbolSpec::BbmPhi => {
                let tol = 1e-12;
                if let Some(mu) = self.mu.filter(|m| (m - pack.mu).abs() > tol) {
                    return Err(Error::hypothesis(
                        "mu matches the pack",
                        format!("got {mu}, pack gives {}", pack.mu),
                    ));
                }
                if let Some(d) = self.delta.filter(|d| (d - pack.delta()).abs() > tol) {
                    return Err(Error::hypothesis(
                        "delta = -sigma*theta",
                        format!("got {d}, pack gives {}", pack.delta()),
                    ));
                }
                (pack.mu, pack.delta())
            }
            _ => match (self.mu, self.delta) {
                (Some(mu), Some(delta)) => (mu, delta),
                _ => {
                    return Err(Error::precondition(
                        "mu and delta supplied for a custom symbol",
                        format!("got mu = {:?}, delta = {:?}", self.mu, self.delta),
                    ))
                }
            },
        };
        if !(mu > 0.0 && mu < 1.0) {
            return Err(Error::hypothesis("0 < mu < 1", format!("got mu = {mu}")));
        }
        if !delta.is_finite() {
            return Err(Error::hypothesis("delta finite", format!("got {delta}")));
        }
        Ok((mu, delta))
    }
}

/// Estimate whose constant is measured by [`estimate_quotient`].
#[derive(Clone, Debug, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum QuotientKind {
    /// `‖S(t)f‖_{M^s_{p,q}} / ((1+|t|)^{2θ(1/2−1/p)β_σ}‖f‖_{M^{s−σθ}_{p′,q}})`
    #[serde(rename = "mod_decay")]
    ModDecay,
    /// `‖S(t)f‖_{L^r([0,T],M^s_{p,q})} / ‖f‖_{M^{s−θσ}_{p′,q}}`
    #[serde(rename = "compact_interval")]
    CompactInterval,
    /// `‖S(t)φ(D)f‖_{M^s_{p,q}} / (⟨t⟩^{2(1/2−1/p)}‖f‖_{M^s_{p,q}})`
    #[serde(rename = "phiD_growth")]
    PhiDGrowth,
    /// `‖φ(D)f‖_{M^s_{p,q}} / ‖f‖_{M^{s−1}_{p,q}}`
    #[serde(rename = "phiD_smooth")]
    PhiDSmooth,
    #[serde(rename = "product_bilinear")]
    ProductBilinear(BilinearIndices),
    #[serde(rename = "product_power")]
    ProductPower(PowerIndices),
    #[serde(rename = "product_m")]
    ProductM(MFoldIndices),
    /// `‖U(t)f‖_{L^γ(M^s_{p,q})} / ‖f‖_{M^{s+δ/2}_{2,q}}`, `γ = 2/μ ≥ q`
    #[serde(rename = "strichartz_hom")]
    StrichartzHom(DispersiveSetup),
    /// `‖𝒩F‖_{L^∞(M^s_{2,q})} / ‖F‖_{L^{γ′}(M^{s+δ/2}_{p′,q})}`, `γ′ ≤ q`
    #[serde(rename = "strichartz_inhom_smooth")]
    StrichartzInhomSmooth(DispersiveSetup),
    /// `‖𝒩F‖_{L^γ(M^s_{p,q})} / ‖F‖_{L^1(M^{s+δ/2}_{2,q})}`, `γ ≥ q`
    #[serde(rename = "strichartz_inhom_L1")]
    StrichartzInhomL1(DispersiveSetup),
    /// `‖𝒩F‖_{L^γ(M^s_{p,q})} / ‖F‖_{L^{γ′}(M^{s+δ}_{p′,q})}`, `γ′ ≤ q ≤ γ`
    #[serde(rename = "strichartz_retarded")]
    StrichartzRetarded(DispersiveSetup),
    /// `‖∫₀ᵗS(t−τ)φ(D)u^{λ+1}dτ‖_{L^r(M^s_{p,q})} / ‖u‖^{λ+1}_{L^r(M^s_{p,q})}`
    #[serde(rename = "duhamel_nonlinear")]
    DuhamelNonlinear,
}

impl QuotientKind {
    pub const NAMES: [&'static str; 12] = [
        "mod_decay",
        "compact_interval",
        "phiD_growth",
        "phiD_smooth",
        "product_bilinear",
        "product_power",
        "product_m",
        "strichartz_hom",
        "strichartz_inhom_smooth",
        "strichartz_inhom_L1",
        "strichartz_retarded",
        "duhamel_nonlinear",
    ];

    /// Kind with default indices.
    pub fn from_name(name: &str) -> Option<Self> {
        let d = DispersiveSetup::default;
        Some(match name {
            "mod_decay" => Self::ModDecay,
            "compact_interval" => Self::CompactInterval,
            "phiD_growth" => Self::PhiDGrowth,
            "phiD_smooth" => Self::PhiDSmooth,
            "product_bilinear" => Self::ProductBilinear(BilinearIndices::default()),
            "product_power" => Self::ProductPower(PowerIndices::default()),
            "product_m" => Self::ProductM(MFoldIndices::default()),
            "strichartz_hom" => Self::StrichartzHom(d()),
            "strichartz_inhom_smooth" => Self::StrichartzInhomSmooth(d()),
            "strichartz_inhom_L1" => Self::StrichartzInhomL1(d()),
            "strichartz_retarded" => Self::StrichartzRetarded(d()),
            "duhamel_nonlinear" => Self::DuhamelNonlinear,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::ModDecay => "mod_decay",
            Self::CompactInterval => "compact_interval",
            Self::PhiDGrowth => "phiD_growth",
            Self::PhiDSmooth => "phiD_smooth",
            Self::ProductBilinear(_) => "product_bilinear",
            Self::ProductPower(_) => "product_power",
            Self::ProductM(_) => "product_m",
            Self::StrichartzHom(_) => "strichartz_hom",
            Self::StrichartzInhomSmooth(_) => "strichartz_inhom_smooth",
            Self::StrichartzInhomL1(_) => "strichartz_inhom_L1",
            Self::StrichartzRetarded(_) => "strichartz_retarded",
            Self::DuhamelNonlinear => "duhamel_nonlinear",
        }
    }

    /// Whether the quotient depends on the time window, so that doubling
    /// it is a meaningful stability check. The compact-interval bound
    /// depends on the interval by design.
    pub fn has_window_drift(&self) -> bool {
        !matches!(
            self,
            Self::CompactInterval
                | Self::PhiDSmooth
                | Self::ProductBilinear(_)
                | Self::ProductPower(_)
                | Self::ProductM(_)
        )
    }

    fn uses_time(&self) -> bool {
        !matches!(
            self,
            Self::PhiDSmooth | Self::ProductBilinear(_) | Self::ProductPower(_) | Self::ProductM(_)
        )
    }
}

/// Uniform samples `t_i = iT/(n−1)` of `[0, T]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct TimeWindow {
    pub t_end: f64,
    pub samples: usize,
}

impl Default for TimeWindow {
    fn default() -> Self {
        Self {
            t_end: 40.0,
            samples: 161,
        }
    }
}

impl TimeWindow {
    pub const MIN_SAMPLES: usize = 9;

    pub fn validate(&self) -> Result<()> {
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::precondition("T > 0", format!("got T = {}", self.t_end)));
        }
        if self.samples < Self::MIN_SAMPLES {
            return Err(Error::TooFewSamples {
                needed: Self::MIN_SAMPLES,
                got: self.samples,
            });
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        self.t_end / (self.samples - 1) as f64
    }

    pub fn times(&self) -> Vec<f64> {
        let dt = self.dt();
        (0..self.samples).map(|i| i as f64 * dt).collect()
    }

    /// `[0, 2T]` at the same spacing.
    pub fn doubled(&self) -> Self {
        Self {
            t_end: 2.0 * self.t_end,
            samples: 2 * self.samples - 1,
        }
    }
}

/// Discretization shared by every quotient evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EstimateSettings {
    pub grid: GridSpec,
    pub profile: BumpProfile,
    pub k_max: i64,
    pub rule: QuadratureRule,
    pub window: TimeWindow,
}

impl Default for EstimateSettings {
    fn default() -> Self {
        Self {
            grid: GridSpec::desk(),
            profile: BumpProfile::default(),
            k_max: 48,
            rule: QuadratureRule::default(),
            window: TimeWindow::default(),
        }
    }
}

/// Measured constant of `kind` over `family`, with the drift under `N → 2N`
/// and, where meaningful, under `T → 2T`.
///
/// For the Strichartz kinds the report also records whether
/// `‖·‖_{L^γ(M^s_{p,q})} ≤ ‖·‖_{l^{s,q}_□(L^γ L^p)}` held on every trajectory.
pub fn estimate_quotient(
    kind: &QuotientKind,
    pack: &ExponentPack,
    family: &TestFamily,
    settings: &EstimateSettings,
) -> Result<QuotientReport> {
    let exps = Exponents::resolve(kind, pack)?;
    family.validate()?;
    settings.window.validate()?;
    let window = settings.window;
    let uses_time = kind.uses_time();
    let drift_window = kind.has_window_drift();

    let dec = UniformDecomposition::build(settings.grid, settings.profile, settings.k_max)?;
    let coarse_window = if drift_window { window.doubled() } else { window };
    let prefixes: Vec<usize> = if drift_window {
        vec![window.samples, coarse_window.samples]
    } else {
        vec![window.samples]
    };
    let times = if uses_time { coarse_window.times() } else { Vec::new() };
    let coarse = evaluate(kind, &exps, family, &dec, settings.rule, &times, &prefixes)?;

    let fine_dec = UniformDecomposition::build(settings.grid.refined(), settings.profile, settings.k_max)?;
    let fine_times = if uses_time { window.times() } else { Vec::new() };
    let fine = evaluate(
        kind,
        &exps,
        family,
        &fine_dec,
        settings.rule,
        &fine_times,
        &[window.samples],
    )?;

    let mut tables = coarse.tables.into_iter();
    let base_rows = tables.next().expect("one table per prefix");
    let mut report = QuotientReport::new(kind.name(), base_rows);
    let fine_report = QuotientReport::new(kind.name(), fine.tables.into_iter().next().expect("one table"));
    report.refinement_drift = relative_drift(report.sup_quotient, fine_report.sup_quotient);
    if let Some(doubled) = tables.next() {
        let doubled = QuotientReport::new(kind.name(), doubled);
        report.window_drift = Some(relative_drift(report.sup_quotient, doubled.sup_quotient));
    }
    report.nesting_holds = coarse.nesting_holds.zip(fine.nesting_holds).map(|(a, b)| a && b);
    Ok(report)
}

/// Exponents used by one kind, after its hypotheses are checked.
struct Exponents {
    pack: ExponentPack,
    /// Strichartz data: sampled symbol source, `μ`, `δ`, `γ = 2/μ`.
    dispersive: Option<(SymbolSpec, f64, f64, f64)>,
}

impl Exponents {
    fn resolve(kind: &QuotientKind, pack: &ExponentPack) -> Result<Self> {
        let mut dispersive = None;
        match kind {
            QuotientKind::ProductBilinear(ix) => ix.validate()?,
            QuotientKind::ProductPower(ix) => ix.validate()?,
            QuotientKind::ProductM(ix) => ix.validate()?,
            QuotientKind::StrichartzHom(setup)
            | QuotientKind::StrichartzInhomSmooth(setup)
            | QuotientKind::StrichartzInhomL1(setup)
            | QuotientKind::StrichartzRetarded(setup) => {
                let (mu, delta) = setup.indices(pack)?;
                let gamma = 2.0 / mu;
                let gamma_dual = conjugate_exponent(gamma);
                let q = pack.q;
                match kind {
                    QuotientKind::StrichartzHom(_) | QuotientKind::StrichartzInhomL1(_) if gamma < q => {
                        return Err(Error::hypothesis("gamma >= q", format!("gamma = {gamma}, q = {q}")));
                    }
                    QuotientKind::StrichartzInhomSmooth(_) if gamma_dual > q => {
                        return Err(Error::hypothesis(
                            "gamma' <= q",
                            format!("gamma' = {gamma_dual}, q = {q}"),
                        ));
                    }
                    QuotientKind::StrichartzRetarded(_) if !(gamma_dual <= q && q <= gamma) => {
                        return Err(Error::hypothesis(
                            "q in [gamma', gamma]",
                            format!("q = {q}, [gamma', gamma] = [{gamma_dual}, {gamma}]"),
                        ));
                    }
                    _ => {}
                }
                dispersive = Some((setup.symbol.clone(), mu, delta, gamma));
            }
            QuotientKind::DuhamelNonlinear => {
                let (q, s) = (pack.q, pack.s);
                let regular = 1.0 - 1.0 / q <= s && s < 1.0 / q;
                let summable = q == 1.0 && s >= 0.0;
                if !(regular || summable) {
                    return Err(Error::hypothesis(
                        "1 - 1/q <= s < 1/q, or q = 1 and s >= 0",
                        format!("q = {q}, s = {s}"),
                    ));
                }
            }
            _ => {}
        }
        Ok(Self {
            pack: *pack,
            dispersive,
        })
    }
}

struct Evaluation {
    tables: Vec<Vec<QuotientRow>>,
    nesting_holds: Option<bool>,
}

/// Relative slack allowed in the nesting inequality.
const NESTING_SLACK: f64 = 1e-12;

fn evaluate(
    kind: &QuotientKind,
    exps: &Exponents,
    family: &TestFamily,
    dec: &UniformDecomposition,
    rule: QuadratureRule,
    times: &[f64],
    prefixes: &[usize],
) -> Result<Evaluation> {
    let grid = dec.grid();
    let members = family.members(grid)?;
    let group = match &exps.dispersive {
        Some((symbol, ..)) => Some(SampledGroup::new(symbol, grid)?),
        None => None,
    };
    let ctx = Ctx {
        kind,
        exps,
        dec,
        rule,
        times,
        prefixes,
        members: &members,
        group: group.as_ref(),
    };
    let per_member = (0..members.len())
        .into_par_iter()
        .map(|j| ctx.member(j))
        .collect::<Result<Vec<_>>>()?;
    let mut tables = vec![Vec::new(); prefixes.len()];
    let mut nesting_holds = None;
    for MemberOutput { rows, nesting } in per_member {
        for (table, r) in tables.iter_mut().zip(rows) {
            table.extend(r);
        }
        if let Some(ok) = nesting {
            nesting_holds = Some(nesting_holds.unwrap_or(true) && ok);
        }
    }
    Ok(Evaluation { tables, nesting_holds })
}

struct MemberOutput {
    /// Rows for each prefix window.
    rows: Vec<Vec<QuotientRow>>,
    nesting: Option<bool>,
}

struct Ctx<'a> {
    kind: &'a QuotientKind,
    exps: &'a Exponents,
    dec: &'a UniformDecomposition,
    rule: QuadratureRule,
    times: &'a [f64],
    prefixes: &'a [usize],
    members: &'a [Field],
    group: Option<&'a SampledGroup>,
}

/// Time profile `χ(τ) = τ²e^{−τ/τ_s}/(2τ_s³)` of the forcing attached to a
/// member; unit mass on `[0, ∞)`.
#[derive(Clone, Copy, Debug)]
struct Pulse {
    scale: f64,
}

impl Pulse {
    fn of_member(j: usize) -> Self {
        let golden = 0.618_033_988_749_894_9;
        Self {
            scale: 0.5 + 1.5 * (j as f64 * golden).fract(),
        }
    }

    fn eval(&self, tau: f64) -> f64 {
        tau * tau * (-tau / self.scale).exp() / (2.0 * self.scale.powi(3))
    }

    /// `‖χ‖_{L^a([0,T])}`.
    fn lebesgue(&self, a: f64, t_end: f64) -> f64 {
        let f = |tau: f64| self.eval(tau).powf(a);
        integrate(&f, 0.0, t_end, 1e-15).value.powf(1.0 / a)
    }
}

/// `∫₀ᵗ τⁿ e^{−aτ} dτ` for `Re a > 0`.
fn gamma_moment(n: u32, a: Complex64, t: f64) -> Complex64 {
    let z = a * t;
    let n_f = n as f64;
    if z.norm() < 2.0 {
        // t^{n+1} Σ_m (−z)^m / (m! (n+1+m))
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term / (n_f + 1.0);
        for m in 1..60 {
            term *= -z / m as f64;
            let add = term / (n_f + 1.0 + m as f64);
            sum += add;
            if add.norm() < 1e-18 * sum.norm() {
                break;
            }
        }
        return sum * t.powi(n as i32 + 1);
    }
    // n!/a^{n+1} (1 − e^{−z} Σ_{k≤n} z^k/k!)
    let mut partial = Complex64::new(0.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    for k in 0..=n {
        if k > 0 {
            term *= z / k as f64;
        }
        partial += term;
    }
    let factorial: f64 = (1..=n).map(|k| k as f64).product();
    (Complex64::new(1.0, 0.0) - (-z).exp() * partial) * factorial / a.powu(n + 1)
}

fn spectrum_to_field(grid: GridSpec, values: Vec<Complex64>) -> Field {
    inverse_transform(&Spectrum::new(grid, values).expect("grid-sized spectrum"))
}

impl Ctx<'_> {
    fn k_max(&self) -> i64 {
        self.dec.k_max()
    }

    fn blocks(&self, u: &Field, p: f64) -> Result<Vec<f64>> {
        Ok(block_lp_norms(u, &[p], self.dec)?.swap_remove(0))
    }

    fn norm(&self, u: &Field, s: f64, p: f64, q: f64) -> Result<f64> {
        Ok(weighted_lq(&self.blocks(u, p)?, self.k_max(), s, q))
    }

    fn table(&self, states: &[Field], p: f64) -> Result<BlockNormTable> {
        let rows = states.iter().map(|u| self.blocks(u, p)).collect::<Result<Vec<_>>>()?;
        BlockNormTable::from_rows(self.times.to_vec(), self.k_max(), rows)
    }

    fn prefix(&self, table: &BlockNormTable, n: usize) -> Result<BlockNormTable> {
        BlockNormTable::from_rows(table.times()[..n].to_vec(), self.k_max(), table.rows()[..n].to_vec())
    }

    /// `U(t)f` at every sample time, exactly per frequency.
    fn free_evolution(&self, f: &Field, symbol: &[f64]) -> Vec<Field> {
        let spec = forward_transform(f);
        self.times
            .iter()
            .map(|&t| {
                let v = spec
                    .values()
                    .iter()
                    .zip(symbol)
                    .map(|(c, &p)| c * Complex64::new(0.0, t * p).exp())
                    .collect();
                spectrum_to_field(f.grid(), v)
            })
            .collect()
    }

    /// `∫₀ᵗ U(t−τ) χ(τ)^m w dτ` at every sample time, with `χ^m` a gamma profile.
    fn pulse_response(
        &self,
        w: &Field,
        symbol: &[f64],
        multiplier: &[Complex64],
        pulse: Pulse,
        power: u32,
    ) -> Vec<Field> {
        let spec = forward_transform(w);
        let m = power as f64;
        let norm = (2.0 * pulse.scale.powi(3)).powi(power as i32);
        self.times
            .iter()
            .map(|&t| {
                let v = spec
                    .values()
                    .iter()
                    .zip(symbol)
                    .zip(multiplier)
                    .map(|((c, &p), mult)| {
                        let a = Complex64::new(m / pulse.scale, p);
                        let moment = gamma_moment(2 * power, a, t) / norm;
                        c * mult * Complex64::new(0.0, t * p).exp() * moment
                    })
                    .collect();
                spectrum_to_field(w.grid(), v)
            })
            .collect()
    }

    fn member(&self, j: usize) -> Result<MemberOutput> {
        let pack = &self.exps.pack;
        let (p, q, s) = (pack.p, pack.q, pack.s);
        let p_dual = conjugate_exponent(p);
        let f = &self.members[j];
        let n_members = self.members.len();
        let time_rows = |nums: &[f64], dens: &[f64]| -> Vec<Vec<QuotientRow>> {
            self.prefixes
                .iter()
                .map(|&n| {
                    (0..n)
                        .map(|i| QuotientRow::new(j, Some(self.times[i]), nums[i], dens[i]))
                        .collect()
                })
                .collect()
        };
        let once = |row: QuotientRow| vec![vec![row]; self.prefixes.len()];
        let single = |num: f64, den: f64| MemberOutput {
            rows: once(QuotientRow::new(j, None, num, den)),
            nesting: None,
        };
        let bbm = SymbolSpec::BbmPhi.sample(f.grid())?;

        Ok(match self.kind {
            QuotientKind::ModDecay => {
                let exponent = 2.0 * pack.theta * (0.5 - 1.0 / p) * pack.beta;
                let base = self.norm(f, s - pack.sigma * pack.theta, p_dual, q)?;
                let table = self.table(&self.free_evolution(f, &bbm), p)?;
                let nums = table.mod_norms(s, q);
                let dens: Vec<f64> = self
                    .times
                    .iter()
                    .map(|t| (1.0 + t.abs()).powf(exponent) * base)
                    .collect();
                MemberOutput {
                    rows: time_rows(&nums, &dens),
                    nesting: None,
                }
            }
            QuotientKind::PhiDGrowth => {
                // −iφ(D) has the norms of φ(D) and keeps the field real
                let h = apply_minus_i_phi_d(f)?;
                let base = self.norm(f, s, p, q)?;
                let nums = self.table(&self.free_evolution(&h, &bbm), p)?.mod_norms(s, q);
                let dens: Vec<f64> = self
                    .times
                    .iter()
                    .map(|t| (1.0 + t * t).powf(0.5 - 1.0 / p) * base)
                    .collect();
                MemberOutput {
                    rows: time_rows(&nums, &dens),
                    nesting: None,
                }
            }
            QuotientKind::CompactInterval => {
                let table = self.table(&self.free_evolution(f, &bbm), p)?;
                let num =
                    self.prefix(&table, self.prefixes[0])?
                        .mixed(Nesting::TimeOutside, s, q, pack.r, self.rule)?;
                single(num, self.norm(f, s - pack.theta * pack.sigma, p_dual, q)?)
            }
            QuotientKind::PhiDSmooth => single(
                self.norm(&apply_minus_i_phi_d(f)?, s, p, q)?,
                self.norm(f, s - 1.0, p, q)?,
            ),
            QuotientKind::ProductBilinear(ix) => {
                let v = &self.members[(j + 1) % n_members];
                let num = self.norm(&f.mul(v)?, ix.s, ix.p(), ix.sigma)?;
                let den = self.norm(f, ix.s, ix.p1, ix.sigma1)? * self.norm(v, ix.s, ix.p2, ix.sigma2)?;
                single(num, den)
            }
            QuotientKind::ProductPower(ix) => {
                let mut power = f.clone();
                for _ in 1..ix.m {
                    power = power.mul(f)?;
                }
                let num = self.norm(&power, ix.s, ix.q, ix.mu)?;
                let den = self.norm(f, ix.s, ix.m as f64 * ix.q, ix.nu)?.powi(ix.m as i32);
                single(num, den)
            }
            QuotientKind::ProductM(ix) => {
                let mut product = f.clone();
                let mut den = self.norm(f, ix.s, ix.p[0], ix.q[0])?;
                for i in 1..ix.p.len() {
                    let u = &self.members[(j + i) % n_members];
                    product = product.mul(u)?;
                    den *= self.norm(u, ix.s, ix.p[i], ix.q[i])?;
                }
                single(self.norm(&product, ix.s, ix.p0(), ix.q0())?, den)
            }
            QuotientKind::StrichartzHom(_)
            | QuotientKind::StrichartzInhomSmooth(_)
            | QuotientKind::StrichartzInhomL1(_)
            | QuotientKind::StrichartzRetarded(_) => self.strichartz(j, f)?,
            QuotientKind::DuhamelNonlinear => {
                let lambda = pack.lambda;
                let pulse = Pulse::of_member(j);
                let mut w = f.clone();
                for _ in 0..lambda {
                    w = w.mul(f)?;
                }
                // −iφ keeps the response real; P = −φ
                let minus_i_phi: Vec<Complex64> = bbm.iter().map(|&v| Complex64::new(0.0, v)).collect();
                let table = self.table(&self.pulse_response(&w, &bbm, &minus_i_phi, pulse, lambda + 1), p)?;
                let f_norm = self.norm(f, s, p, q)?;
                let mut rows = Vec::new();
                for &n in self.prefixes {
                    let num = self
                        .prefix(&table, n)?
                        .mixed(Nesting::TimeOutside, s, q, pack.r, self.rule)?;
                    let u_norm = pulse.lebesgue(pack.r, self.times[n - 1]) * f_norm;
                    let den = u_norm.powi(lambda as i32 + 1);
                    rows.push(vec![QuotientRow::new(j, Some(self.times[n - 1]), num, den)]);
                }
                MemberOutput { rows, nesting: None }
            }
        })
    }

    fn strichartz(&self, j: usize, f: &Field) -> Result<MemberOutput> {
        let pack = &self.exps.pack;
        let (p, q, s) = (pack.p, pack.q, pack.s);
        let p_dual = conjugate_exponent(p);
        let (_, _, delta, gamma) = self.exps.dispersive.as_ref().expect("resolved for Strichartz kinds");
        let (delta, gamma) = (*delta, *gamma);
        let gamma_dual = conjugate_exponent(gamma);
        let symbol = self.group.expect("sampled for Strichartz kinds").symbol();
        let ones = vec![Complex64::new(1.0, 0.0); f.grid().samples()];
        let pulse = Pulse::of_member(j);

        // the trajectory, the exponent of its numerator norm and the data norm per window
        let (states, num_p) = match self.kind {
            QuotientKind::StrichartzHom(_) => (self.free_evolution(f, symbol), p),
            QuotientKind::StrichartzInhomSmooth(_) => (self.pulse_response(f, symbol, &ones, pulse, 1), 2.0),
            _ => (self.pulse_response(f, symbol, &ones, pulse, 1), p),
        };
        let table = self.table(&states, num_p)?;
        let mut rows = Vec::new();
        let mut nesting = true;
        for &n in self.prefixes {
            let t_end = self.times[n - 1];
            let window = self.prefix(&table, n)?;
            let (num, den) = match self.kind {
                QuotientKind::StrichartzHom(_) => (
                    window.mixed(Nesting::TimeOutside, s, q, gamma, self.rule)?,
                    self.norm(f, s + delta / 2.0, 2.0, q)?,
                ),
                QuotientKind::StrichartzInhomSmooth(_) => (
                    window.sup_in_time(s, q),
                    pulse.lebesgue(gamma_dual, t_end) * self.norm(f, s + delta / 2.0, p_dual, q)?,
                ),
                QuotientKind::StrichartzInhomL1(_) => (
                    window.mixed(Nesting::TimeOutside, s, q, gamma, self.rule)?,
                    pulse.lebesgue(1.0, t_end) * self.norm(f, s + delta / 2.0, 2.0, q)?,
                ),
                _ => (
                    window.mixed(Nesting::TimeOutside, s, q, gamma, self.rule)?,
                    pulse.lebesgue(gamma_dual, t_end) * self.norm(f, s + delta, p_dual, q)?,
                ),
            };
            if gamma >= q {
                let time_outside = window.mixed(Nesting::TimeOutside, s, q, gamma, self.rule)?;
                let blocks_outside = window.mixed(Nesting::BlocksOutside, s, q, gamma, self.rule)?;
                nesting &= time_outside <= blocks_outside * (1.0 + NESTING_SLACK);
            }
            rows.push(vec![QuotientRow::new(j, Some(t_end), num, den)]);
        }
        Ok(MemberOutput {
            rows,
            nesting: Some(nesting),
        })
    }
}
