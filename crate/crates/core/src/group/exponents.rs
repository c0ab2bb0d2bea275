use serde::Serialize;

use super::symbols::beta;
use crate::error::{Error, Result};

/// Tolerance for the scaling identities.
pub const IDENTITY_TOLERANCE: f64 = 1e-12;

/// Exponent algebra of the global well-posedness results.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExponentPack {
    pub lambda: u32,
    pub sigma: f64,
    pub theta: f64,
    pub p: f64,
    pub q: f64,
    pub s: f64,
    pub beta: f64,
    pub r: f64,
    pub gamma: f64,
    pub mu: f64,
    pub rho: f64,
}

/// One named identity with both sides evaluated.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl IdentityCheck {
    fn new(name: &'static str, lhs: f64, rhs: f64) -> Self {
        let holds = (lhs - rhs).abs() <= IDENTITY_TOLERANCE * lhs.abs().max(rhs.abs()).max(1.0);
        Self { name, lhs, rhs, holds }
    }
}

impl ExponentPack {
    /// Derives `p = λ+2`, `β_σ`, `r`, `γ`, `μ`, `ρ` after checking the hypotheses
    /// `λ ≥ 1`, `σ < −1`, `0 < θ ≤ −1/σ` and `0 < −λθβ_σ/(λ+2) < 1`.
    pub fn new(lambda: u32, sigma: f64, theta: f64, q: f64, s: f64) -> Result<Self> {
        if lambda < 1 {
            return Err(Error::hypothesis("lambda >= 1", format!("got lambda = {lambda}")));
        }
        let beta = beta(sigma)?;
        if !(theta > 0.0 && theta <= -1.0 / sigma) {
            return Err(Error::hypothesis(
                "0 < theta <= -1/sigma",
                format!("got theta = {theta}, -1/sigma = {}", -1.0 / sigma),
            ));
        }
        let l = lambda as f64;
        let hls = -l * theta * beta / (l + 2.0);
        if !(hls > 0.0 && hls < 1.0) {
            return Err(Error::hypothesis(
                "0 < -lambda*theta*beta/(lambda+2) < 1",
                format!("got {hls}"),
            ));
        }
        if q.is_nan() || q < 1.0 {
            return Err(Error::hypothesis("q >= 1", format!("got q = {q}")));
        }
        if !s.is_finite() {
            return Err(Error::hypothesis("s finite", format!("got s = {s}")));
        }
        let p = l + 2.0;
        let decay = -2.0 * theta * (0.5 - 1.0 / p) * beta;
        let pack = Self {
            lambda,
            sigma,
            theta,
            p,
            q,
            s,
            beta,
            r: l * (l + 2.0) / (l + 2.0 + l * theta * beta),
            gamma: -2.0 * (l + 2.0) / (l * theta * beta),
            mu: decay,
            rho: decay,
        };
        if let Some(bad) = pack.identities().into_iter().find(|c| !c.holds) {
            return Err(Error::hypothesis(
                bad.name,
                format!("lhs = {:e}, rhs = {:e}", bad.lhs, bad.rhs),
            ));
        }
        Ok(pack)
    }

    /// `1 + 2θ(1/2 − 1/p)β_σ`, the Hardy–Littlewood–Sobolev exponent; in `(0, 1)`.
    pub fn hls_factor(&self) -> f64 {
        1.0 + 2.0 * self.theta * (0.5 - 1.0 / self.p) * self.beta
    }

    /// Smoothing index `δ = −σθ` of the modulation decay estimate for `S(t)`.
    pub fn delta(&self) -> f64 {
        -self.sigma * self.theta
    }

    /// `γ' = γ/(γ−1)`.
    pub fn gamma_conjugate(&self) -> f64 {
        self.gamma / (self.gamma - 1.0)
    }

    /// Whether `0 < μ < 1`, required by the Strichartz estimates.
    pub fn strichartz_admissible(&self) -> bool {
        self.mu > 0.0 && self.mu < 1.0
    }

    /// Identities tying the derived exponents together.
    pub fn identities(&self) -> Vec<IdentityCheck> {
        let l = self.lambda as f64;
        let mut out = vec![
            IdentityCheck::new(
                "1/r = (lambda+1)/r - hls_factor",
                1.0 / self.r,
                (l + 1.0) / self.r - self.hls_factor(),
            ),
            IdentityCheck::new("gamma = 2/mu", self.gamma, 2.0 / self.mu),
            IdentityCheck::new(
                "rho = -2 theta (1/2 - 1/p) beta",
                self.rho,
                -2.0 * self.theta * (0.5 - 1.0 / self.p) * self.beta,
            ),
        ];
        let f = self.hls_factor();
        out.push(IdentityCheck {
            name: "0 < hls_factor < 1",
            lhs: f,
            rhs: f.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON),
            holds: f > 0.0 && f < 1.0,
        });
        out
    }
}

/// The two admissible `σ` for the Strichartz route: `(λ+2)/(4−λ)` and `(2−3λ)/4`.
pub fn strichartz_sigma_choices(lambda: u32) -> Result<[f64; 2]> {
    if lambda < 6 {
        return Err(Error::hypothesis("lambda >= 6", format!("got lambda = {lambda}")));
    }
    let l = lambda as f64;
    Ok([(l + 2.0) / (4.0 - l), (2.0 - 3.0 * l) / 4.0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bbm_reference_pack() {
        let pack = ExponentPack::new(1, -2.0, 0.5, 1.0, 0.0).unwrap();
        assert!((pack.beta + 0.2).abs() < 1e-15);
        assert_eq!(pack.p, 3.0);
        assert!((pack.r - 30.0 / 29.0).abs() < 1e-14);
        assert!(pack.identities().iter().all(|c| c.holds));
    }

    #[test]
    fn strichartz_point() {
        let pack = ExponentPack::new(6, -4.0, 0.25, 2.0, 0.0).unwrap();
        assert!((pack.beta + 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(pack.p, 8.0);
        assert!((pack.gamma - 32.0).abs() < 1e-12);
        assert!((pack.mu - 1.0 / 16.0).abs() < 1e-15);
        assert!((pack.delta() - 1.0).abs() < 1e-15);
        assert!(pack.strichartz_admissible());
    }

    #[test]
    fn sigma_choices_share_beta() {
        for lambda in 6..30u32 {
            let [a, b] = strichartz_sigma_choices(lambda).unwrap();
            let l = lambda as f64;
            assert!((beta(a).unwrap() + 2.0 / l).abs() < 1e-14);
            assert!((beta(b).unwrap() + 2.0 / l).abs() < 1e-14);
        }
        assert_eq!(strichartz_sigma_choices(6).unwrap(), [-4.0, -4.0]);
        assert!(strichartz_sigma_choices(5).is_err());
    }

    #[test]
    fn hypotheses_named() {
        let err = ExponentPack::new(1, -2.0, 1.0, 1.0, 0.0).unwrap_err();
        assert!(matches!(
            err,
            Error::Hypothesis {
                name: "0 < theta <= -1/sigma",
                ..
            }
        ));
        let err = ExponentPack::new(0, -2.0, 0.5, 1.0, 0.0).unwrap_err();
        assert!(matches!(
            err,
            Error::Hypothesis {
                name: "lambda >= 1",
                ..
            }
        ));
        let err = ExponentPack::new(2, -0.5, 0.5, 1.0, 0.0).unwrap_err();
        assert!(matches!(err, Error::Hypothesis { name: "sigma < -1", .. }));
    }
}
