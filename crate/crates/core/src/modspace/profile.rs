use std::f64::consts::PI;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

/// Bump `ρ` with `ρ = 1` on `|ξ| ≤ 1/2` and `ρ = 0` on `|ξ| ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum BumpProfile {
    /// `exp(1 − 1/(1 − (2|ξ|−1)²))` on the transition band; C^∞.
    #[default]
    SmoothExp,
    /// `(1 + cos(π(2|ξ|−1)))/2` on the transition band; C¹.
    RaisedCosine,
}

impl BumpProfile {
    pub const ALL: [BumpProfile; 2] = [BumpProfile::SmoothExp, BumpProfile::RaisedCosine];

    pub fn name(self) -> &'static str {
        match self {
            BumpProfile::SmoothExp => "smooth-exp",
            BumpProfile::RaisedCosine => "raised-cosine",
        }
    }

    pub fn eval(self, xi: f64) -> f64 {
        let a = xi.abs();
        if a <= 0.5 {
            return 1.0;
        }
        if a >= 1.0 {
            return 0.0;
        }
        let s = 2.0 * a - 1.0;
        match self {
            BumpProfile::SmoothExp => (1.0 - 1.0 / (1.0 - s * s)).exp(),
            BumpProfile::RaisedCosine => 0.5 * (1.0 + (PI * s).cos()),
        }
    }
}
