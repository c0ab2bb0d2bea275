use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::duhamel::{duhamel_apply, duhamel_resolution_defect, residual};
use super::waves::{conserved_drift, ConservedDrift};
use super::CauchyProblem;
use crate::error::{Error, Result};
use crate::group::apply_s;
use crate::modspace::{mod_norm, ModNormParams, UniformDecomposition};
use crate::spectral::{lp_norm, Field, QuadratureRule, Trajectory};

/// Consecutive distance increases that count as divergence.
const GROWTH_STREAK: usize = 3;

/// First iterate `u⁽⁰⁾`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum PicardSeed {
    /// `u⁽⁰⁾(t) = S(t)u₀`.
    #[default]
    Linear,
    /// `u⁽⁰⁾(t) = u₀`.
    Frozen,
}

/// Norm of `u⁽ⁿ⁺¹⁾(t) − u⁽ⁿ⁾(t)`, maximized over the samples.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DistanceNorm {
    #[default]
    L2,
    /// `M^s_{p,q}` on the desk decomposition.
    Modulation { params: ModNormParams },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(default, deny_unknown_fields)]
pub struct PicardConfig {
    pub max_iter: usize,
    pub tol: f64,
    pub time_samples: usize,
    pub rule: QuadratureRule,
    pub norm: DistanceNorm,
    pub seed: PicardSeed,
    /// Times the sample count may double while the Duhamel term is under-resolved.
    pub max_refinements: usize,
}

impl Default for PicardConfig {
    fn default() -> Self {
        Self {
            max_iter: 40,
            tol: 1e-10,
            time_samples: 41,
            rule: QuadratureRule::Simpson,
            norm: DistanceNorm::L2,
            seed: PicardSeed::Linear,
            max_refinements: 2,
        }
    }
}

impl PicardConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::precondition("tol > 0", format!("got tol = {}", self.tol)));
        }
        if self.time_samples < 9 {
            return Err(Error::TooFewSamples {
                needed: 9,
                got: self.time_samples,
            });
        }
        if self.max_iter == 0 {
            return Err(Error::precondition("max_iter >= 1", "got 0"));
        }
        if let DistanceNorm::Modulation { params } = self.norm {
            params.validate()?;
        }
        Ok(())
    }

    pub fn times(&self, t_end: f64) -> Vec<f64> {
        uniform_times(t_end, self.time_samples)
    }
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    /// `sup_t ‖u⁽ⁿ⁺¹⁾ − u⁽ⁿ⁾‖` for `n = 0, 1, …`.
    pub iterate_distances: Vec<f64>,
    /// Successive quotients of the distances; skipped where the earlier one is zero.
    pub contraction_ratios: Vec<f64>,
    /// Integral-equation defect of the last iterate, see [`residual`].
    pub final_residual: f64,
    pub trajectory: Trajectory,
    pub conserved_drift: ConservedDrift,
    pub converged: bool,
    /// Change of the Duhamel term when `Δτ` doubles.
    pub quadrature_defect: f64,
    /// `quadrature_defect > tol/10`.
    pub under_resolved: bool,
}

/// Scalar part of a [`SolveReport`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveSummary {
    pub iterations: usize,
    pub converged: bool,
    pub iterate_distances: Vec<f64>,
    pub contraction_ratios: Vec<f64>,
    pub max_contraction_ratio: Option<f64>,
    pub final_residual: f64,
    pub conserved_drift: ConservedDrift,
    pub quadrature_defect: f64,
    pub under_resolved: bool,
    pub t_end: f64,
    pub time_samples: usize,
}

impl SolveReport {
    pub fn summary(&self) -> SolveSummary {
        SolveSummary {
            iterations: self.iterate_distances.len(),
            converged: self.converged,
            iterate_distances: self.iterate_distances.clone(),
            contraction_ratios: self.contraction_ratios.clone(),
            max_contraction_ratio: self.contraction_ratios.iter().copied().reduce(f64::max),
            final_residual: self.final_residual,
            conserved_drift: self.conserved_drift,
            quadrature_defect: self.quadrature_defect,
            under_resolved: self.under_resolved,
            t_end: *self.trajectory.times().last().expect("non-empty"),
            time_samples: self.trajectory.len(),
        }
    }
}

struct Distance {
    norm: DistanceNorm,
    dec: Option<UniformDecomposition>,
}

impl Distance {
    fn new(norm: DistanceNorm, u0: &Field) -> Result<Self> {
        let dec = match norm {
            DistanceNorm::L2 => None,
            DistanceNorm::Modulation { .. } => Some(UniformDecomposition::desk(u0.grid())?),
        };
        Ok(Self { norm, dec })
    }

    fn of(&self, a: &Trajectory, b: &Trajectory) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (x, y) in a.states().iter().zip(b.states()) {
            let diff = x.sub(y)?;
            let d = match (&self.norm, &self.dec) {
                (DistanceNorm::Modulation { params }, Some(dec)) => mod_norm(&diff, *params, dec)?,
                _ => lp_norm(&diff, 2.0)?,
            };
            worst = worst.max(d);
        }
        Ok(worst)
    }
}

fn uniform_times(t_end: f64, samples: usize) -> Vec<f64> {
    let n = samples - 1;
    (0..=n).map(|i| t_end * i as f64 / n as f64).collect()
}

/// Iterates `u⁽ⁿ⁺¹⁾ = Γu⁽ⁿ⁾` with `Γu = S(t)u₀ − (i/(λ+1))∫₀ᵗS(t−τ)φ(D)u^{λ+1}dτ`.
///
/// Stops once the distance drops below `tol` or after `max_iter` steps. Three
/// consecutive increases abort with [`Error::Divergence`] carrying the
/// partial report. While the Duhamel term is under-resolved the solve is
/// repeated on twice as many intervals, at most `max_refinements` times.
pub fn picard_solve(prob: &CauchyProblem, cfg: &PicardConfig) -> Result<SolveReport> {
    cfg.validate()?;
    let mut samples = cfg.time_samples;
    let mut report = solve_on(prob, cfg, &uniform_times(prob.t_end, samples))?;
    for _ in 0..cfg.max_refinements {
        if !report.under_resolved {
            break;
        }
        samples = 2 * samples - 1;
        report = solve_on(prob, cfg, &uniform_times(prob.t_end, samples))?;
    }
    Ok(report)
}

fn solve_on(prob: &CauchyProblem, cfg: &PicardConfig, times: &[f64]) -> Result<SolveReport> {
    let times = times.to_vec();
    let linear = Trajectory::new(
        times.clone(),
        times.iter().map(|&t| apply_s(&prob.u0, t)).collect::<Result<_>>()?,
    )?;
    let mut current = match cfg.seed {
        PicardSeed::Linear => linear.clone(),
        PicardSeed::Frozen => Trajectory::new(times.clone(), vec![prob.u0.clone(); times.len()])?,
    };
    let distance = Distance::new(cfg.norm, &prob.u0)?;
    let mut distances: Vec<f64> = Vec::new();
    let mut ratios = Vec::new();
    let mut streak = 0;
    let mut converged = false;

    for _ in 0..cfg.max_iter {
        let next = gamma_map(&linear, &current, prob.lambda, cfg.rule)?;
        let d = distance.of(&next, &current)?;
        current = next;
        if let Some(&prev) = distances.last() {
            if prev > 0.0 {
                ratios.push(d / prev);
            }
            streak = if d > prev || !d.is_finite() { streak + 1 } else { 0 };
        }
        distances.push(d);
        if d < cfg.tol {
            converged = true;
            break;
        }
        if streak >= GROWTH_STREAK || !d.is_finite() {
            let report = finish(prob, cfg, current, distances, ratios, false, false)?;
            return Err(Error::Divergence(Box::new(report)));
        }
    }
    finish(prob, cfg, current, distances, ratios, converged, true)
}

fn gamma_map(linear: &Trajectory, u: &Trajectory, lambda: u32, rule: QuadratureRule) -> Result<Trajectory> {
    let duhamel = duhamel_apply(u, lambda, rule)?;
    let states = linear
        .states()
        .iter()
        .zip(duhamel.states())
        .map(|(a, b)| a.add(b))
        .collect::<Result<_>>()?;
    Trajectory::new(linear.times().to_vec(), states)
}

fn finish(
    prob: &CauchyProblem,
    cfg: &PicardConfig,
    trajectory: Trajectory,
    iterate_distances: Vec<f64>,
    contraction_ratios: Vec<f64>,
    converged: bool,
    diagnose: bool,
) -> Result<SolveReport> {
    // a diverged trajectory can overflow; only its distances are meaningful
    let (final_residual, quadrature_defect, drift) = if diagnose {
        (
            residual(&trajectory, prob.lambda, cfg.rule)?,
            duhamel_resolution_defect(&trajectory, prob.lambda, cfg.rule)?,
            conserved_drift(trajectory.states(), prob.lambda)?,
        )
    } else {
        (f64::NAN, f64::NAN, ConservedDrift::default())
    };
    Ok(SolveReport {
        iterate_distances,
        contraction_ratios,
        final_residual,
        trajectory,
        conserved_drift: drift,
        converged,
        quadrature_defect,
        under_resolved: quadrature_defect > cfg.tol / 10.0,
    })
}
