use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{apply_sampled_multiplier, Field, GridSpec, REAL_TOLERANCE};

/// `φ(ξ) = ξ/(1+ξ²)`.
pub fn phi(xi: f64) -> f64 {
    xi / (1.0 + xi * xi)
}

/// `φ'(ξ) = (1−ξ²)/(1+ξ²)²`.
pub fn phi_prime(xi: f64) -> f64 {
    let d = 1.0 + xi * xi;
    (1.0 - xi * xi) / (d * d)
}

/// `φ''(ξ) = 2ξ(ξ²−3)/(1+ξ²)³`.
pub fn phi_second(xi: f64) -> f64 {
    let d = 1.0 + xi * xi;
    2.0 * xi * (xi * xi - 3.0) / (d * d * d)
}

/// Second derivative of the shifted symbol `φ_k(ξ) = φ(ξ−k)`.
pub fn shifted_phi_second(xi: f64, k: i64) -> f64 {
    phi_second(xi - k as f64)
}

/// Decay exponent `β_σ` of the `L^{p'} → H^σ_p` estimate for `S(t)`.
pub fn beta(sigma: f64) -> Result<f64> {
    if sigma.is_nan() || sigma >= -1.0 {
        return Err(Error::hypothesis("sigma < -1", format!("got sigma = {sigma}")));
    }
    let [near, far] = beta_branches(sigma);
    Ok(if sigma >= -4.0 { near } else { far })
}

/// Both closed forms of `β_σ`: `(σ+1)/(1−2σ)` (used on `[−4, −1)`) and
/// `−3/(1−2σ)` (used below `−4`). They agree at `σ = −4`.
pub fn beta_branches(sigma: f64) -> [f64; 2] {
    let d = 1.0 - 2.0 * sigma;
    [(sigma + 1.0) / d, -3.0 / d]
}

/// `φ` at every grid frequency in FFT order. The unpaired Nyquist mode gets
/// `0`, the symmetric value of an odd symbol, so real fields stay real.
pub fn sampled_phi(grid: GridSpec) -> Vec<f64> {
    let n = grid.samples();
    (0..n).map(|i| if i == n / 2 { 0.0 } else { phi(grid.xi(i)) }).collect()
}

fn real_preserving(u: &Field, symbol: &[Complex64]) -> Result<Field> {
    let out = apply_sampled_multiplier(u, symbol)?;
    if u.is_flagged_real() && out.imag_mass_fraction() <= REAL_TOLERANCE * REAL_TOLERANCE {
        Ok(out.with_real_flag(true))
    } else {
        Ok(out)
    }
}

/// Bessel potential `J^σ = (1−∂²)^{σ/2}`.
pub fn apply_j(u: &Field, sigma: f64) -> Result<Field> {
    let g = u.grid();
    let symbol: Vec<Complex64> = (0..g.samples())
        .map(|i| {
            let xi = g.xi(i);
            Complex64::new((1.0 + xi * xi).powf(0.5 * sigma), 0.0)
        })
        .collect();
    real_preserving(u, &symbol)
}

/// `S(t) = e^{−itφ(D)}`.
pub fn apply_s(u: &Field, t: f64) -> Result<Field> {
    let symbol: Vec<Complex64> = sampled_phi(u.grid())
        .into_iter()
        .map(|ph| Complex64::new(0.0, -t * ph).exp())
        .collect();
    real_preserving(u, &symbol)
}

/// `S(t)J^σ` in one transform pair.
pub fn apply_s_j(u: &Field, t: f64, sigma: f64) -> Result<Field> {
    let g = u.grid();
    let symbol: Vec<Complex64> = sampled_phi(g)
        .into_iter()
        .enumerate()
        .map(|(i, ph)| {
            let xi = g.xi(i);
            Complex64::new(0.0, -t * ph).exp() * (1.0 + xi * xi).powf(0.5 * sigma)
        })
        .collect();
    real_preserving(u, &symbol)
}

/// `φ(D)`.
pub fn apply_phi_d(u: &Field) -> Result<Field> {
    let symbol: Vec<Complex64> = sampled_phi(u.grid())
        .into_iter()
        .map(|ph| Complex64::new(ph, 0.0))
        .collect();
    apply_sampled_multiplier(u, &symbol)
}

/// `−iφ(D)`, which maps real fields to real fields.
pub fn apply_minus_i_phi_d(u: &Field) -> Result<Field> {
    let symbol: Vec<Complex64> = sampled_phi(u.grid())
        .into_iter()
        .map(|ph| Complex64::new(0.0, -ph))
        .collect();
    real_preserving(u, &symbol)
}

/// Dispersion relation `P` of a group `U(t) = 𝓕⁻¹e^{itP(ξ)}𝓕`.
#[derive(Clone, Serialize, Deserialize, Default, JsonSchema)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SymbolSpec {
    /// `P = −φ`, so that `U(t) = S(t)`.
    #[default]
    BbmPhi,
    /// `P(ξ) = Σ c_i ξ^i`.
    Polynomial { coefficients: Vec<f64> },
    /// Arbitrary `P`; must be real at every grid frequency.
    #[serde(skip)]
    Custom(Arc<dyn Fn(f64) -> Complex64 + Send + Sync>),
}

impl fmt::Debug for SymbolSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolSpec::BbmPhi => write!(f, "BbmPhi"),
            SymbolSpec::Polynomial { coefficients } => f
                .debug_struct("Polynomial")
                .field("coefficients", coefficients)
                .finish(),
            SymbolSpec::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl SymbolSpec {
    pub fn custom(p: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        SymbolSpec::Custom(Arc::new(p))
    }

    /// `P(ξ_j)` in FFT order, validated real and finite.
    pub fn sample(&self, grid: GridSpec) -> Result<Vec<f64>> {
        match self {
            SymbolSpec::BbmPhi => Ok(sampled_phi(grid).into_iter().map(|v| -v).collect()),
            SymbolSpec::Polynomial { coefficients } => (0..grid.samples())
                .map(|i| {
                    let xi = grid.xi(i);
                    let v = coefficients.iter().rev().fold(0.0, |acc, c| acc * xi + c);
                    if v.is_finite() {
                        Ok(v)
                    } else {
                        Err(Error::NonFiniteSymbol { xi })
                    }
                })
                .collect(),
            SymbolSpec::Custom(p) => (0..grid.samples())
                .map(|i| {
                    let xi = grid.xi(i);
                    let v = p(xi);
                    if !(v.re.is_finite() && v.im.is_finite()) {
                        Err(Error::NonFiniteSymbol { xi })
                    } else if v.im != 0.0 {
                        Err(Error::ComplexSymbol { xi, imag: v.im })
                    } else {
                        Ok(v.re)
                    }
                })
                .collect(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            SymbolSpec::BbmPhi => "bbm-phi".into(),
            SymbolSpec::Polynomial { coefficients } => format!("polynomial{coefficients:?}"),
            SymbolSpec::Custom(_) => "custom".into(),
        }
    }
}

/// Group `U(t)` sampled once on a grid, for repeated application.
#[derive(Clone, Debug)]
pub struct SampledGroup {
    grid: GridSpec,
    p: Vec<f64>,
    real_preserving: bool,
}

impl SampledGroup {
    pub fn new(sym: &SymbolSpec, grid: GridSpec) -> Result<Self> {
        Ok(Self {
            grid,
            p: sym.sample(grid)?,
            real_preserving: matches!(sym, SymbolSpec::BbmPhi),
        })
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    /// `P(ξ_j)` in FFT order.
    pub fn symbol(&self) -> &[f64] {
        &self.p
    }

    pub fn apply(&self, u: &Field, t: f64) -> Result<Field> {
        if u.grid() != self.grid {
            return Err(Error::GridMismatch);
        }
        let symbol: Vec<Complex64> = self.p.iter().map(|&p| Complex64::new(0.0, t * p).exp()).collect();
        if self.real_preserving {
            real_preserving(u, &symbol)
        } else {
            apply_sampled_multiplier(u, &symbol)
        }
    }
}

/// `U(t) = 𝓕⁻¹e^{itP(ξ)}𝓕`.
pub fn apply_u(u: &Field, t: f64, sym: &SymbolSpec) -> Result<Field> {
    SampledGroup::new(sym, u.grid())?.apply(u, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::lp_norm;
    use std::f64::consts::PI;

    fn grid() -> GridSpec {
        GridSpec::new(8.0 * PI, 512).unwrap()
    }

    fn mode(g: GridSpec, k: f64) -> Field {
        Field::from_fn(g, |x| Complex64::new(0.0, k * x).exp())
    }

    fn dist(a: &Field, b: &Field) -> f64 {
        lp_norm(&a.sub(b).unwrap(), 2.0).unwrap()
    }

    #[test]
    fn phi_values() {
        assert_eq!(phi(0.0), 0.0);
        assert_eq!(phi(1.0), 0.5);
        assert_eq!(phi(-1.0), -0.5);
        assert!(phi_second(3f64.sqrt()).abs() < 1e-15);
        for i in 0..2000 {
            let x = -50.0 + 0.05 * i as f64;
            assert!(phi(x).abs() <= 0.5);
            assert_eq!(phi(-x), -phi(x));
            let h = 1e-4;
            let fd = (phi(x + h) - 2.0 * phi(x) + phi(x - h)) / (h * h);
            assert!((fd - phi_second(x)).abs() < 1e-6);
        }
    }

    #[test]
    fn shifted_second_derivative_bound() {
        for k in -40..=40 {
            for i in 0..=400 {
                let xi = -20.0 + 0.1 * i as f64;
                let y = xi - k as f64;
                assert!(shifted_phi_second(xi, k).abs() <= 6.0 * (1.0 + y * y).powf(-1.5) + 1e-15);
            }
        }
    }

    #[test]
    fn beta_branches() {
        assert!((beta(-2.0).unwrap() + 0.2).abs() < 1e-15);
        assert!((beta(-4.0).unwrap() + 1.0 / 3.0).abs() < 1e-15);
        // both branch formulas at σ = −4
        let (first, second): (f64, f64) = ((-4.0 + 1.0) / (1.0 + 8.0), -3.0 / (1.0 + 8.0));
        assert!((first - second).abs() < 1e-15);
        assert!((beta(-100.0).unwrap() + 3.0 / 201.0).abs() < 1e-15);
        assert!(beta(-1.0).is_err());
        assert!(beta(0.5).is_err());
    }

    #[test]
    fn single_mode_actions() {
        let g = grid();
        let u = mode(g, 1.0);
        let s = apply_s(&u, 2.7).unwrap();
        assert!(dist(&s, &u.scale(Complex64::new(0.0, -2.7 * 0.5).exp())) < 1e-12);
        let j = apply_j(&u, -3.0).unwrap();
        assert!(dist(&j, &u.scale(Complex64::new(2f64.powf(-1.5), 0.0))) < 1e-12);
        assert!(dist(&apply_j(&u, 0.0).unwrap(), &u) < 1e-13);
        assert!(dist(&apply_s(&u, 0.0).unwrap(), &u) < 1e-13);
    }

    #[test]
    fn minus_i_phi_d_on_sine() {
        let g = grid();
        let u = Field::from_real_fn(g, f64::sin);
        let v = apply_minus_i_phi_d(&u).unwrap();
        assert!(v.is_flagged_real());
        assert!(dist(&v, &Field::from_real_fn(g, |x| -0.5 * x.cos())) < 1e-12);
        let c = Field::from_real_fn(g, |_| 3.0);
        assert!(lp_norm(&apply_phi_d(&c).unwrap(), 2.0).unwrap() < 1e-12);
    }

    #[test]
    fn u_reduces_to_s_and_rejects_complex() {
        let g = grid();
        let u = Field::from_real_fn(g, |x| (-(x * x) / 3.0).exp());
        let a = apply_u(&u, 1.9, &SymbolSpec::BbmPhi).unwrap();
        let b = apply_s(&u, 1.9).unwrap();
        assert!(dist(&a, &b) < 1e-13);
        let zero = SymbolSpec::Polynomial { coefficients: vec![] };
        assert!(dist(&apply_u(&u, 5.0, &zero).unwrap(), &u) < 1e-13);
        let bad = SymbolSpec::custom(|xi| Complex64::new(xi, 1e-3));
        assert!(matches!(apply_u(&u, 1.0, &bad), Err(Error::ComplexSymbol { .. })));
    }
}
