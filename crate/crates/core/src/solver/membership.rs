use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::ExponentPack;
use crate::modspace::{mod_norm, weighted_sup_norm, ModNormParams, UniformDecomposition};
use crate::spectral::Trajectory;

/// `sup_t (1+|t|)^ρ ‖u(t)‖_{M^s_{p,q}}` on the full window and on its first half.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MembershipReport {
    pub rho: f64,
    pub params: ModNormParams,
    pub half_window: f64,
    pub full_window: f64,
    pub weighted_sup: f64,
    pub finite: bool,
    /// `|full − half| / full`; zero for the zero solution.
    pub window_drift: f64,
}

/// Weighted-sup norm of a computed solution in `X^{ρ,s}_{p,q}`, `p = λ+2`,
/// `ρ = μ` from the pack.
///
/// Requires `λ ≥ 3` and either `q = 1, s ≥ 0` or `1 − 1/q ≤ s < 1/q`. The
/// trajectory should cover `[0, 2T]`; the half-window value uses the
/// samples with `t ≤ T`.
pub fn x_space_membership(
    traj: &Trajectory,
    pack: &ExponentPack,
    dec: &UniformDecomposition,
) -> Result<MembershipReport> {
    if pack.lambda < 3 {
        return Err(Error::hypothesis(
            "lambda >= 3",
            format!("got lambda = {}", pack.lambda),
        ));
    }
    let (q, s) = (pack.q, pack.s);
    let regime = (q == 1.0 && s >= 0.0) || (1.0 - 1.0 / q <= s && s < 1.0 / q);
    if !regime {
        return Err(Error::hypothesis(
            "q = 1 with s >= 0, or 1 - 1/q <= s < 1/q",
            format!("got q = {q}, s = {s}"),
        ));
    }
    if traj.len() < 3 {
        return Err(Error::TooFewSamples {
            needed: 3,
            got: traj.len(),
        });
    }
    let params = ModNormParams::new(s, pack.p, q)?;
    let t_end = *traj.times().last().expect("non-empty");
    let cut = traj
        .times()
        .iter()
        .filter(|&&t| t <= 0.5 * t_end + 1e-12 * t_end)
        .count();
    let (times, states) = traj.clone().into_parts();
    let half = Trajectory::new(times[..cut].to_vec(), states[..cut].to_vec())?;
    let half_window = weighted_sup_norm(&half, pack.rho, params, dec)?;
    let full_window = weighted_sup_norm(traj, pack.rho, params, dec)?;
    let window_drift = if full_window == 0.0 {
        0.0
    } else {
        (full_window - half_window).abs() / full_window
    };
    Ok(MembershipReport {
        rho: pack.rho,
        params,
        half_window,
        full_window,
        weighted_sup: full_window,
        finite: full_window.is_finite(),
        window_drift,
    })
}

/// `max_t ‖u(t+h) − u(t)‖_{M^s_{2,q}}` for `h` equal to the sample step times
/// `2^k`, largest `h` first.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContinuityModulus {
    pub steps: Vec<f64>,
    pub moduli: Vec<f64>,
}

impl ContinuityModulus {
    /// Whether the modulus strictly decreases as `h` halves.
    pub fn decreasing(&self) -> bool {
        self.moduli.windows(2).all(|w| w[1] < w[0]) || self.moduli.iter().all(|&m| m == 0.0)
    }
}

pub fn continuity_modulus(
    traj: &Trajectory,
    params: ModNormParams,
    dec: &UniformDecomposition,
    levels: usize,
) -> Result<ContinuityModulus> {
    params.validate()?;
    if levels == 0 || traj.len() <= 1 << (levels - 1) {
        return Err(Error::TooFewSamples {
            needed: (1 << levels.max(1).saturating_sub(1)) + 1,
            got: traj.len(),
        });
    }
    let states = traj.states();
    let mut steps = Vec::new();
    let mut moduli = Vec::new();
    for level in (0..levels).rev() {
        let stride = 1usize << level;
        let mut worst: f64 = 0.0;
        for i in 0..states.len() - stride {
            let diff = states[i + stride].sub(&states[i])?;
            worst = worst.max(mod_norm(&diff, params, dec)?);
        }
        steps.push(traj.times()[stride] - traj.times()[0]);
        moduli.push(worst);
    }
    Ok(ContinuityModulus { steps, moduli })
}
