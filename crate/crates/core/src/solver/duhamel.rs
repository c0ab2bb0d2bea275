use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::{apply_s, sampled_phi};
use crate::spectral::{
    cumulative_integrals, forward_transform, inverse_transform, lp_norm, Field, GridSpec, QuadratureRule, Spectrum,
    Trajectory, REAL_TOLERANCE,
};

/// Modes kept by the two-thirds rule: `|j| ≤ N/3`.
pub fn dealias_limit(grid: GridSpec) -> i64 {
    (grid.samples() / 3) as i64
}

pub(crate) fn dealias(spec: &mut Spectrum) {
    let grid = spec.grid();
    let limit = dealias_limit(grid);
    for (i, v) in spec.values_mut().iter_mut().enumerate() {
        if grid.mode(i).abs() > limit {
            *v = Complex64::new(0.0, 0.0);
        }
    }
}

fn to_real(f: Field) -> Result<Field> {
    f.into_real(REAL_TOLERANCE)
}

/// Spectrum of the dealiased `u^{λ+1}`.
pub(crate) fn nonlinear_spectrum(u: &Field, lambda: u32) -> Result<Spectrum> {
    u.ensure_real()?;
    let power: Vec<f64> = u.values().iter().map(|v| v.re.powi(lambda as i32 + 1)).collect();
    let mut spec = forward_transform(&Field::from_real(u.grid(), &power)?);
    dealias(&mut spec);
    Ok(spec)
}

/// `u^{λ+1}` with the top third of the frequencies removed.
pub fn nonlinearity(u: &Field, lambda: u32) -> Result<Field> {
    to_real(inverse_transform(&nonlinear_spectrum(u, lambda)?))
}

/// `−(i/(λ+1)) ∫₀ᵗ S(t−τ)φ(D) v(τ)^{λ+1} dτ` at every sample time of `v`.
///
/// Computed as `S(t)` applied to the cumulative integral of
/// `S(−τ)φ(D)v(τ)^{λ+1}`, which is smooth in `τ`.
pub fn duhamel_apply(v: &Trajectory, lambda: u32, rule: QuadratureRule) -> Result<Trajectory> {
    let grid = v.grid();
    let phi = sampled_phi(grid);
    let integrand = v
        .iter()
        .map(|(tau, u)| {
            let spec = nonlinear_spectrum(u, lambda)?;
            Ok(spec
                .values()
                .iter()
                .zip(&phi)
                .map(|(w, &ph)| w * ph * Complex64::new(0.0, tau * ph).exp())
                .collect())
        })
        .collect::<Result<Vec<Vec<Complex64>>>>()?;
    let cumulative = cumulative_integrals(v.times(), rule, &integrand)?;
    let factor = Complex64::new(0.0, -1.0 / (lambda as f64 + 1.0));
    let states = v
        .times()
        .iter()
        .zip(cumulative)
        .map(|(&t, c)| {
            let values = c
                .into_iter()
                .zip(&phi)
                .map(|(w, &ph)| w * factor * Complex64::new(0.0, -t * ph).exp())
                .collect();
            to_real(inverse_transform(&Spectrum::new(grid, values)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Trajectory::new(v.times().to_vec(), states)
}

/// Largest `L²` change of [`duhamel_apply`] at the shared sample times when
/// every other sample is dropped, i.e. when `Δτ` is doubled.
pub fn duhamel_resolution_defect(v: &Trajectory, lambda: u32, rule: QuadratureRule) -> Result<f64> {
    if v.len() < 5 {
        return Err(Error::TooFewSamples {
            needed: 5,
            got: v.len(),
        });
    }
    let fine = duhamel_apply(v, lambda, rule)?;
    let (times, states) = v.clone().into_parts();
    let keep = |i: &usize| i.is_multiple_of(2);
    let coarse_times: Vec<f64> = (0..times.len()).filter(keep).map(|i| times[i]).collect();
    let coarse_states: Vec<Field> = states
        .into_iter()
        .enumerate()
        .filter(|(i, _)| keep(i))
        .map(|(_, s)| s)
        .collect();
    let coarse = duhamel_apply(&Trajectory::new(coarse_times, coarse_states)?, lambda, rule)?;
    coarse
        .states()
        .iter()
        .zip(fine.states().iter().step_by(2))
        .map(|(a, b)| lp_norm(&a.sub(b)?, 2.0))
        .try_fold(0.0, |m, d| d.map(|d| f64::max(m, d)))
}

/// `sup_t ‖u(t) − S(t)u₀ + (i/(λ+1))∫₀ᵗS(t−τ)φ(D)u^{λ+1}dτ‖₂ / max(1, ‖u₀‖₂)`,
/// the defect of the integral equation on the sampled trajectory.
pub fn residual(traj: &Trajectory, lambda: u32, rule: QuadratureRule) -> Result<f64> {
    let u0 = traj.first();
    let duhamel = duhamel_apply(traj, lambda, rule)?;
    let scale = lp_norm(u0, 2.0)?.max(1.0);
    let mut worst: f64 = 0.0;
    for ((t, u), d) in traj.iter().zip(duhamel.states()) {
        let gamma = apply_s(u0, t)?.add(d)?;
        worst = worst.max(lp_norm(&u.sub(&gamma)?, 2.0)?);
    }
    Ok(worst / scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::phi;
    use std::f64::consts::PI;

    #[test]
    fn double_angle_after_dealiasing() {
        let g = GridSpec::new(4.0 * PI, 64).unwrap();
        let u = Field::from_real_fn(g, f64::cos);
        let w = nonlinearity(&u, 1).unwrap();
        assert!(w.is_flagged_real());
        for (x, v) in g.nodes().zip(w.values()) {
            assert!((v.re - 0.5 * (1.0 + (2.0 * x).cos())).abs() < 1e-14);
        }
        let zero = nonlinearity(&Field::zeros(g), 3).unwrap();
        assert!(zero.values().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn rejects_complex_input() {
        let g = GridSpec::new(PI, 16).unwrap();
        let u = Field::from_fn(g, |x| Complex64::new(0.0, x).exp());
        assert!(matches!(nonlinearity(&u, 1), Err(Error::NotReal(_))));
    }

    #[test]
    fn frozen_single_mode_matches_closed_form() {
        // v = ε cos x frozen, λ = 1: v² = ε²/2 (1 + cos 2x); only mode 2 moves.
        // −(i/2) ∫₀ᵗ e^{−i(t−τ)φ(2)} φ(2) dτ = −(1/2)(1 − e^{−itφ(2)}) per unit amplitude
        let eps = 0.1;
        let g = GridSpec::new(2.0 * PI, 64).unwrap();
        let times: Vec<f64> = (0..41).map(|i| i as f64 * 0.05).collect();
        let u = Field::from_real_fn(g, |x| eps * x.cos());
        let traj = Trajectory::new(times.clone(), vec![u; times.len()]).unwrap();
        let out = duhamel_apply(&traj, 1, QuadratureRule::Simpson).unwrap();
        let p2 = phi(2.0);
        for (i, (t, d)) in out.iter().enumerate() {
            let a = -0.5 * (Complex64::new(1.0, 0.0) - Complex64::new(0.0, -t * p2).exp());
            // the first interval is a trapezoid step
            let tol = if i == 1 { 1e-8 } else { 1e-10 };
            for (x, v) in g.nodes().zip(d.values()) {
                let expected = eps * eps / 2.0 * (a * Complex64::new(0.0, 2.0 * x).exp()).re;
                assert!((v.re - expected).abs() < tol, "t={t} x={x} {} {}", v.re, expected);
            }
        }
        assert!(out.first().values().iter().all(|v| v.norm() == 0.0));
    }
}
