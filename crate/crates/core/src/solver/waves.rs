use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectral::{apply_multiplier, lp_norm, Field, GridSpec};

/// `I₁ = ∫u`, `I₂ = ∫(u² + u_x²)`, `H = ∫(u²/2 + u^{λ+2}/((λ+1)(λ+2)))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Invariants {
    pub i1: f64,
    pub i2: f64,
    pub h: f64,
}

pub fn conserved_quantities(u: &Field, lambda: u32) -> Result<Invariants> {
    u.ensure_real()?;
    let dx = u.grid().dx();
    let ux = apply_multiplier(u, |xi| Complex64::new(0.0, xi))?;
    let l = lambda as f64;
    let (mut i1, mut i2, mut h) = (0.0, 0.0, 0.0);
    for (v, d) in u.values().iter().zip(ux.values()) {
        let (a, b) = (v.re, d.re);
        i1 += a;
        i2 += a * a + b * b;
        h += 0.5 * a * a + a.powi(lambda as i32 + 2) / ((l + 1.0) * (l + 2.0));
    }
    Ok(Invariants {
        i1: i1 * dx,
        i2: i2 * dx,
        h: h * dx,
    })
}

/// Largest relative departure of each invariant from its initial value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Default)]
pub struct ConservedDrift {
    pub i1: f64,
    pub i2: f64,
    pub h: f64,
}

pub fn conserved_drift<'a>(states: impl IntoIterator<Item = &'a Field>, lambda: u32) -> Result<ConservedDrift> {
    let mut it = states.into_iter();
    let Some(first) = it.next() else {
        return Ok(ConservedDrift::default());
    };
    let c0 = conserved_quantities(first, lambda)?;
    let rel = |a: f64, b: f64, scale: f64| if a == b { 0.0 } else { (a - b).abs() / scale };
    // I₁ can vanish; measure it against the L¹ size of the data
    let i1_scale = first.values().iter().map(|v| v.re.abs()).sum::<f64>() * first.grid().dx();
    let mut drift = ConservedDrift::default();
    for u in it {
        let c = conserved_quantities(u, lambda)?;
        drift.i1 = drift.i1.max(rel(c.i1, c0.i1, i1_scale.max(f64::MIN_POSITIVE)));
        drift.i2 = drift.i2.max(rel(c.i2, c0.i2, c0.i2.abs().max(f64::MIN_POSITIVE)));
        drift.h = drift.h.max(rel(c.h, c0.h, c0.h.abs().max(f64::MIN_POSITIVE)));
    }
    Ok(drift)
}

/// Amplitude and inverse width of `ψ = A sech^{2/λ}(Bx)`.
///
/// Substituting into `(1−c)ψ + ψ^{λ+1}/(λ+1) + cψ'' = 0` and matching the
/// `sech^{2/λ}` and `sech^{2/λ+2}` terms gives `B² = λ²(c−1)/(4c)` and
/// `A^λ = (λ+1)(λ+2)(c−1)/2`.
pub fn solitary_parameters(c: f64, lambda: u32) -> Result<(f64, f64)> {
    if !(c > 1.0 && c.is_finite()) {
        return Err(Error::precondition("c > 1", format!("got c = {c}")));
    }
    if lambda < 1 {
        return Err(Error::precondition("lambda >= 1", format!("got {lambda}")));
    }
    let l = lambda as f64;
    let b = (l * l * (c - 1.0) / (4.0 * c)).sqrt();
    let a = ((l + 1.0) * (l + 2.0) * (c - 1.0) / 2.0).powf(1.0 / l);
    Ok((a, b))
}

/// Solitary wave `ψ(x − ct)` of speed `c > 1`.
pub fn solitary_wave(c: f64, lambda: u32, grid: GridSpec, t: f64) -> Result<Field> {
    let (a, b) = solitary_parameters(c, lambda)?;
    let power = 2.0 / lambda as f64;
    Ok(Field::from_real_fn(grid, |x| {
        let y = b * (x - c * t);
        a * (1.0 / y.cosh()).powf(power)
    }))
}

/// Relative `L²` defect of the travelling-wave equation
/// `(1−c)ψ + ψ^{λ+1}/(λ+1) + cψ'' = 0`, with `ψ''` spectral.
pub fn traveling_wave_residual(psi: &Field, c: f64, lambda: u32) -> Result<f64> {
    let psi_xx = apply_multiplier(psi, |xi| Complex64::new(-xi * xi, 0.0))?;
    let l = lambda as f64;
    let values: Vec<f64> = psi
        .values()
        .iter()
        .zip(psi_xx.values())
        .map(|(p, d)| (1.0 - c) * p.re + p.re.powi(lambda as i32 + 1) / (l + 1.0) + c * d.re)
        .collect();
    let defect = Field::from_real(psi.grid(), &values)?;
    Ok(lp_norm(&defect, 2.0)? / lp_norm(psi, 2.0)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn cosine_invariants() {
        let l = 3.0 * PI;
        let g = GridSpec::new(l, 128).unwrap();
        let u = Field::from_real_fn(g, f64::cos);
        let c = conserved_quantities(&u, 1).unwrap();
        assert!(c.i1.abs() < 1e-13);
        assert!((c.i2 - 2.0 * l).abs() < 1e-12);
        // ∫cos²/2 = L/2, ∫cos³ = 0
        assert!((c.h - 0.5 * l).abs() < 1e-12);
        let z = conserved_quantities(&Field::zeros(g), 2).unwrap();
        assert_eq!((z.i1, z.i2, z.h), (0.0, 0.0, 0.0));
    }

    #[test]
    fn solitary_wave_solves_profile_equation() {
        let g = GridSpec::desk();
        for (c, lambda) in [(1.5, 1), (2.0, 1), (2.0, 2)] {
            let psi = solitary_wave(c, lambda, g, 0.0).unwrap();
            let r = traveling_wave_residual(&psi, c, lambda).unwrap();
            assert!(r < 1e-8, "c={c} lambda={lambda} residual={r}");
        }
        assert!(solitary_wave(1.0, 1, g, 0.0).is_err());
    }

    #[test]
    fn wrong_amplitude_fails_profile_equation() {
        let g = GridSpec::desk();
        let psi = solitary_wave(1.5, 1, g, 0.0).unwrap().scale(Complex64::new(1.01, 0.0));
        assert!(traveling_wave_residual(&psi, 1.5, 1).unwrap() > 1e-4);
    }
}
