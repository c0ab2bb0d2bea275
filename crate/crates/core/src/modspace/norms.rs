use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::UniformDecomposition;
use crate::error::{Error, Result};
use crate::spectral::{forward_transform, lp_norm_values, quadrature_weights, Field, QuadratureRule, Trajectory};

/// Indices `(s, p, q)` of `M^s_{p,q}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct ModNormParams {
    pub s: f64,
    pub p: f64,
    pub q: f64,
}

impl ModNormParams {
    pub fn new(s: f64, p: f64, q: f64) -> Result<Self> {
        let params = Self { s, p, q };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.s.is_finite() {
            return Err(Error::ModParams(format!("s = {} is not finite", self.s)));
        }
        if self.p.is_nan() || self.p < 1.0 {
            return Err(Error::InvalidExponent(self.p));
        }
        if self.q.is_infinite() {
            return Err(Error::UnsupportedSupNorm);
        }
        if self.q.is_nan() || self.q < 1.0 {
            return Err(Error::ModParams(format!("q = {} is below 1", self.q)));
        }
        Ok(())
    }

    pub fn with_s(self, s: f64) -> Self {
        Self { s, ..self }
    }
}

/// Imaginary mass fraction below which a field is treated as real.
const MIRROR_TOLERANCE: f64 = 1e-28;

/// `‖□_k u‖_p` for every block and every requested `p`, indexed `[p][k + k_max]`.
///
/// One inverse transform per block serves all exponents; when every exponent
/// is 2 the norms come from the spectrum directly. Blocks whose
/// windowed spectrum is below `1e-14` of the global spectral maximum are
/// reported as zero.
pub fn block_lp_norms(u: &Field, ps: &[f64], dec: &UniformDecomposition) -> Result<Vec<Vec<f64>>> {
    if u.grid() != dec.grid() {
        return Err(Error::GridMismatch);
    }
    for &p in ps {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidExponent(p));
        }
    }
    let spec = forward_transform(u);
    let dx = dec.grid().dx();
    let k_max = dec.k_max();
    let mut out = vec![vec![0.0; dec.len()]; ps.len()];
    // □_{−k}u is the conjugate of □_k u when u is real
    if ps.iter().all(|&p| p == 2.0) {
        let row: Vec<f64> = dec.indices().map(|k| dec.block_l2_from_spectrum(&spec, k)).collect();
        return Ok(vec![row; ps.len()]);
    }
    let real = u.is_flagged_real() || u.imag_mass_fraction() <= MIRROR_TOLERANCE;
    let range = if real { 0..=k_max } else { dec.indices() };
    dec.for_each_block_in(&spec, range, |k, values| {
        for (row, &p) in out.iter_mut().zip(ps) {
            row[(k + k_max) as usize] = lp_norm_values(values, dx, p);
        }
    });
    if real {
        for row in &mut out {
            for k in 1..=k_max {
                row[(k_max - k) as usize] = row[(k_max + k) as usize];
            }
        }
    }
    Ok(out)
}

/// `(Σ_k (1+|k|)^{sq} a_k^q)^{1/q}` for block values `a` indexed `k + k_max`.
pub fn weighted_lq(values: &[f64], k_max: i64, s: f64, q: f64) -> f64 {
    let terms: Vec<f64> = values
        .iter()
        .enumerate()
        .map(|(i, &a)| (1.0 + (i as i64 - k_max).abs() as f64).powf(s) * a)
        .collect();
    scaled_power_sum(&terms, q)
}

/// `(Σ a_i^q)^{1/q}` computed without overflow for large `q`.
fn scaled_power_sum(terms: &[f64], q: f64) -> f64 {
    let m = terms.iter().copied().fold(0.0, f64::max);
    if m == 0.0 {
        return 0.0;
    }
    if q == 1.0 {
        return terms.iter().sum();
    }
    m * terms.iter().map(|&a| (a / m).powf(q)).sum::<f64>().powf(1.0 / q)
}

/// Discrete `‖u‖_{M^s_{p,q}}`.
pub fn mod_norm(u: &Field, params: ModNormParams, dec: &UniformDecomposition) -> Result<f64> {
    params.validate()?;
    let norms = block_lp_norms(u, &[params.p], dec)?;
    Ok(weighted_lq(&norms[0], dec.k_max(), params.s, params.q))
}

/// Embedding index `ν₁(p, q)` of `H^{s₁}_p ⊂ M^{s₂}_{p,q}`.
pub fn nu1(p: f64, q: f64) -> f64 {
    let a = 1.0 / p;
    let b = 1.0 / q;
    if b <= a && b <= 1.0 - a {
        0.0
    } else if a >= 0.5 && b >= 1.0 - a {
        a + b - 1.0
    } else {
        b - a
    }
}

/// Order of the space and time integrations in a mixed norm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Nesting {
    /// `‖(1+|k|)^s ‖□_k u‖_{L^γ_t L^p_x}‖_{ℓ^q_k}`
    BlocksOutside,
    /// `‖ ‖u(t)‖_{M^s_{p,q}} ‖_{L^γ_t}`
    TimeOutside,
}

/// `‖□_k u(t)‖_p` for every sample time and block.
#[derive(Clone, Debug)]
pub struct BlockNormTable {
    times: Vec<f64>,
    k_max: i64,
    rows: Vec<Vec<f64>>,
}

impl BlockNormTable {
    pub fn compute(traj: &Trajectory, p: f64, dec: &UniformDecomposition) -> Result<Self> {
        if traj.is_empty() {
            return Err(Error::EmptyTrajectory);
        }
        let rows = traj
            .states()
            .iter()
            .map(|u| block_lp_norms(u, &[p], dec).map(|mut r| r.swap_remove(0)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            times: traj.times().to_vec(),
            k_max: dec.k_max(),
            rows,
        })
    }

    pub fn from_rows(times: Vec<f64>, k_max: i64, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() != times.len() {
            return Err(Error::LengthMismatch {
                expected: times.len(),
                got: rows.len(),
            });
        }
        let width = (2 * k_max + 1) as usize;
        if let Some(r) = rows.iter().find(|r| r.len() != width) {
            return Err(Error::LengthMismatch {
                expected: width,
                got: r.len(),
            });
        }
        Ok(Self { times, k_max, rows })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// `‖u(t)‖_{M^s_{p,q}}` at each sample time.
    pub fn mod_norms(&self, s: f64, q: f64) -> Vec<f64> {
        self.rows.iter().map(|r| weighted_lq(r, self.k_max, s, q)).collect()
    }

    pub fn sup_in_time(&self, s: f64, q: f64) -> f64 {
        self.mod_norms(s, q).into_iter().fold(0.0, f64::max)
    }

    pub fn mixed(&self, nesting: Nesting, s: f64, q: f64, gamma: f64, rule: QuadratureRule) -> Result<f64> {
        match nesting {
            Nesting::TimeOutside => time_lebesgue(&self.times, &self.mod_norms(s, q), gamma, rule),
            Nesting::BlocksOutside => {
                let width = (2 * self.k_max + 1) as usize;
                let per_block = (0..width)
                    .map(|i| {
                        let col: Vec<f64> = self.rows.iter().map(|r| r[i]).collect();
                        time_lebesgue(&self.times, &col, gamma, rule)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(weighted_lq(&per_block, self.k_max, s, q))
            }
        }
    }
}

/// `(∫ |g|^γ dt)^{1/γ}` over the sampled window; `γ = ∞` gives the sample max.
pub fn time_lebesgue(times: &[f64], values: &[f64], gamma: f64, rule: QuadratureRule) -> Result<f64> {
    if values.len() != times.len() {
        return Err(Error::LengthMismatch {
            expected: times.len(),
            got: values.len(),
        });
    }
    if gamma.is_nan() || gamma < 1.0 {
        return Err(Error::InvalidExponent(gamma));
    }
    let m = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if gamma.is_infinite() {
        return Ok(m);
    }
    let w = quadrature_weights(times, rule)?;
    if m == 0.0 {
        return Ok(0.0);
    }
    let integral: f64 = values
        .iter()
        .zip(&w)
        .map(|(v, wi)| wi * (v.abs() / m).powf(gamma))
        .sum();
    Ok(m * integral.max(0.0).powf(1.0 / gamma))
}

/// `‖u‖_{l^{s,q}_□(L^γ L^p)}` or `‖u‖_{L^γ(M^s_{p,q})}` on the trajectory window.
pub fn mixed_time_norm(
    traj: &Trajectory,
    params: ModNormParams,
    gamma: f64,
    nesting: Nesting,
    dec: &UniformDecomposition,
    rule: QuadratureRule,
) -> Result<f64> {
    params.validate()?;
    BlockNormTable::compute(traj, params.p, dec)?.mixed(nesting, params.s, params.q, gamma, rule)
}

/// `sup_t (1+|t|)^ρ ‖u(t)‖_{M^s_{p,q}}` over the sample times.
pub fn weighted_sup_norm(
    traj: &Trajectory,
    rho: f64,
    params: ModNormParams,
    dec: &UniformDecomposition,
) -> Result<f64> {
    if rho.is_nan() || rho <= 0.0 {
        return Err(Error::precondition("rho > 0", format!("got rho = {rho}")));
    }
    params.validate()?;
    let table = BlockNormTable::compute(traj, params.p, dec)?;
    Ok(table
        .mod_norms(params.s, params.q)
        .iter()
        .zip(table.times())
        .map(|(m, t)| (1.0 + t.abs()).powf(rho) * m)
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modspace::{sigma, BumpProfile};
    use crate::spectral::{lp_norm, GridSpec};
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn dec() -> UniformDecomposition {
        UniformDecomposition::build(GridSpec::new(16.0 * PI, 1024).unwrap(), BumpProfile::default(), 12).unwrap()
    }

    #[test]
    fn l2_blocks_from_spectrum_match_samples() {
        let d = dec();
        let u = Field::from_fn(d.grid(), |x| {
            Complex64::new(
                (-(x * x) / 6.0).exp() * (2.3 * x).cos(),
                0.4 * (-(x - 1.0).powi(2)).exp(),
            )
        });
        let fast = block_lp_norms(&u, &[2.0], &d).unwrap().swap_remove(0);
        let sampled = block_lp_norms(&u, &[2.0, 3.0], &d).unwrap().swap_remove(0);
        let peak = sampled.iter().copied().fold(0.0, f64::max);
        for (a, b) in fast.iter().zip(&sampled) {
            assert!((a - b).abs() <= 1e-12 * peak, "{a} vs {b}");
        }
    }

    #[test]
    fn nu1_values_and_boundaries() {
        assert_eq!(nu1(2.0, 2.0), 0.0);
        assert_eq!(nu1(1.0, 1.0), 1.0);
        assert_eq!(nu1(f64::INFINITY, 1.0), 1.0);
        // the three formulas agree on shared boundaries
        for i in 0..=100 {
            let a = i as f64 / 100.0;
            // b = a with a ≤ 1/2: regions 1 and 3
            if a <= 0.5 {
                assert!((0.0f64 - (a - a)).abs() < 1e-15);
            }
            // b = 1 − a with a ≥ 1/2: regions 1 and 2
            if a >= 0.5 {
                let b = 1.0 - a;
                assert!((a + b - 1.0).abs() < 1e-15);
            }
        }
        // a = 1/2, b ≥ 1/2: regions 2 and 3
        for i in 50..=100 {
            let b = i as f64 / 100.0;
            assert!(((0.5 + b - 1.0) - (b - 0.5)).abs() < 1e-15);
            assert!((nu1(2.0, 1.0 / b) - (b - 0.5)).abs() < 1e-12);
        }
    }

    #[test]
    fn params_validation() {
        assert!(ModNormParams::new(0.0, 2.0, 2.0).is_ok());
        assert!(matches!(
            ModNormParams::new(0.0, 0.5, 2.0),
            Err(Error::InvalidExponent(_))
        ));
        assert!(matches!(
            ModNormParams::new(0.0, 2.0, f64::INFINITY),
            Err(Error::UnsupportedSupNorm)
        ));
    }

    #[test]
    fn single_mode_hand_evaluation() {
        let d = dec();
        let g = d.grid();
        let kappa = 3.0;
        let u = Field::from_fn(g, |x| Complex64::new(0.0, kappa * x).exp());
        for (p, q) in [(2.0, 2.0), (1.0, 1.5), (4.0, 1.0), (f64::INFINITY, 3.0)] {
            let got = mod_norm(&u, ModNormParams::new(0.0, p, q).unwrap(), &d).unwrap();
            let mode_norm = lp_norm(&u, p).unwrap();
            let expect = (2..=4)
                .map(|k| (sigma(BumpProfile::default(), k, kappa) * mode_norm).powf(q))
                .sum::<f64>()
                .powf(1.0 / q);
            assert!((got - expect).abs() < 1e-10 * expect, "p={p} q={q}: {got} vs {expect}");
        }
    }

    #[test]
    fn zero_and_homogeneity() {
        let d = dec();
        let g = d.grid();
        let params = ModNormParams::new(0.7, 3.0, 1.5).unwrap();
        assert_eq!(mod_norm(&Field::zeros(g), params, &d).unwrap(), 0.0);
        let u = Field::from_real_fn(g, |x| (-(x * x) / 4.0).exp() * (1.7 * x).sin());
        let a = mod_norm(&u, params, &d).unwrap();
        let b = mod_norm(&u.scale(Complex64::new(-2.5, 0.0)), params, &d).unwrap();
        assert!((b - 2.5 * a).abs() < 1e-12 * b);
    }

    fn gaussian_traj(amps: &[f64]) -> Trajectory {
        let g = dec().grid();
        let times: Vec<f64> = (0..amps.len()).map(|i| i as f64 * 0.5).collect();
        let states = amps
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                Field::from_real_fn(g, |x| {
                    a * (-(x - i as f64).powi(2) / 3.0).exp() * (0.9 * i as f64 * x).cos()
                })
            })
            .collect();
        Trajectory::new(times, states).unwrap()
    }

    #[test]
    fn time_constant_trajectory() {
        let d = dec();
        let u0 = Field::from_real_fn(d.grid(), |x| (-(x * x) / 5.0).exp() * (2.0 * x).cos());
        let t_end = 3.0;
        let times: Vec<f64> = (0..=12).map(|i| t_end * i as f64 / 12.0).collect();
        let traj = Trajectory::new(times.clone(), vec![u0.clone(); times.len()]).unwrap();
        let params = ModNormParams::new(0.5, 4.0, 2.0).unwrap();
        let m0 = mod_norm(&u0, params, &d).unwrap();
        for nesting in [Nesting::BlocksOutside, Nesting::TimeOutside] {
            let v = mixed_time_norm(&traj, params, 6.0, nesting, &d, QuadratureRule::Simpson).unwrap();
            assert!((v - t_end.powf(1.0 / 6.0) * m0).abs() < 1e-10 * v, "{nesting:?}");
        }
    }

    #[test]
    fn minkowski_ordering() {
        let d = dec();
        let traj = gaussian_traj(&[1.0, 0.3, 2.0, 0.7, 1.1, 0.2, 0.9]);
        let params = ModNormParams::new(0.3, 3.0, 2.0).unwrap();
        for gamma in [2.0, 4.0, 8.0] {
            let inner = mixed_time_norm(
                &traj,
                params,
                gamma,
                Nesting::TimeOutside,
                &d,
                QuadratureRule::Trapezoid,
            )
            .unwrap();
            let outer = mixed_time_norm(
                &traj,
                params,
                gamma,
                Nesting::BlocksOutside,
                &d,
                QuadratureRule::Trapezoid,
            )
            .unwrap();
            assert!(inner <= outer * (1.0 + 1e-8), "gamma={gamma}: {inner} > {outer}");
        }
    }

    #[test]
    fn weighted_sup_cases() {
        let d = dec();
        let params = ModNormParams::new(0.0, 2.0, 2.0).unwrap();
        let u0 = Field::from_real_fn(d.grid(), |x| (-(x * x) / 5.0).exp());
        let single = Trajectory::new(vec![0.0], vec![u0.clone()]).unwrap();
        let m0 = mod_norm(&u0, params, &d).unwrap();
        assert!((weighted_sup_norm(&single, 1.0, params, &d).unwrap() - m0).abs() < 1e-14);

        let times: Vec<f64> = (0..=40).map(|i| i as f64 * 0.25).collect();
        let traj = Trajectory::from_fn(times, |t| u0.scale(Complex64::new((-t).exp(), 0.0))).unwrap();
        // (1+t)e^{-t} is maximal at t = 0
        assert!((weighted_sup_norm(&traj, 1.0, params, &d).unwrap() - m0).abs() < 1e-12 * m0);
        assert!(weighted_sup_norm(&traj, 0.0, params, &d).is_err());
    }

    #[test]
    fn empty_and_zero_trajectory() {
        let d = dec();
        let zero = Trajectory::new(vec![0.0, 1.0], vec![Field::zeros(d.grid()); 2]).unwrap();
        let params = ModNormParams::new(0.0, 2.0, 2.0).unwrap();
        for nesting in [Nesting::BlocksOutside, Nesting::TimeOutside] {
            assert_eq!(
                mixed_time_norm(&zero, params, 4.0, nesting, &d, QuadratureRule::Simpson).unwrap(),
                0.0
            );
        }
    }
}
