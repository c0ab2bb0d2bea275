use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{truncation_fraction, Field, GridSpec};

/// Largest admissible fraction of `L²` mass outside `|x| ≤ L/2`.
pub const TRUNCATION_LIMIT: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    /// One real packet `A e^{−(x−x₀)²/2w²} cos(κx + φ)` per member.
    #[default]
    GaussianPackets,
    /// Sum of `terms` random packets per member.
    BandLimitedRandom,
}

/// Deterministic family of smooth real test functions.
///
/// Member `j` draws its parameters from a ChaCha8 stream selected by `j`, so
/// members do not depend on the family size or on the grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct TestFamily {
    pub seed: u64,
    pub count: usize,
    pub kind: FamilyKind,
    /// Envelope width range `[w_min, w_max]`.
    pub width: [f64; 2],
    /// Center range `[x_min, x_max]`.
    pub center: [f64; 2],
    /// Modulation range `[κ_min, κ_max]` (absolute frequency).
    pub modulation: [f64; 2],
    /// Packets per member for `band-limited-random`.
    pub terms: usize,
}

impl Default for TestFamily {
    fn default() -> Self {
        Self {
            seed: 20_240_601,
            count: 32,
            kind: FamilyKind::GaussianPackets,
            width: [1.0, 4.0],
            center: [-20.0, 20.0],
            modulation: [0.0, 12.0],
            terms: 6,
        }
    }
}

/// Parameters of one packet.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Packet {
    pub amplitude: f64,
    pub center: f64,
    pub width: f64,
    pub modulation: f64,
    pub phase: f64,
}

impl Packet {
    pub fn eval(&self, x: f64) -> f64 {
        let y = (x - self.center) / self.width;
        self.amplitude * (-0.5 * y * y).exp() * (self.modulation * x + self.phase).cos()
    }
}

impl TestFamily {
    pub fn validate(&self) -> Result<()> {
        let ranges = [
            ("width", self.width),
            ("center", self.center),
            ("modulation", self.modulation),
        ];
        for (name, [lo, hi]) in ranges {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::precondition(
                    "family ranges ordered",
                    format!("{name} = [{lo}, {hi}]"),
                ));
            }
        }
        if self.width[0] <= 0.0 {
            return Err(Error::precondition(
                "family width > 0",
                format!("got {}", self.width[0]),
            ));
        }
        if self.count == 0 {
            return Err(Error::precondition("family count > 0", "got 0"));
        }
        if self.kind == FamilyKind::BandLimitedRandom && self.terms == 0 {
            return Err(Error::precondition("family terms > 0", "got 0"));
        }
        Ok(())
    }

    fn rng(&self, member: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(member as u64);
        rng
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> Packet {
        let uniform = |rng: &mut ChaCha8Rng, [lo, hi]: [f64; 2]| if lo == hi { lo } else { rng.gen_range(lo..hi) };
        Packet {
            amplitude: rng.gen_range(0.5..1.5),
            center: uniform(rng, self.center),
            width: uniform(rng, self.width),
            modulation: uniform(rng, self.modulation),
            phase: rng.gen_range(0.0..std::f64::consts::TAU),
        }
    }

    /// Packet parameters of member `j`.
    pub fn packets(&self, member: usize) -> Vec<Packet> {
        let mut rng = self.rng(member);
        let n = match self.kind {
            FamilyKind::GaussianPackets => 1,
            FamilyKind::BandLimitedRandom => self.terms,
        };
        (0..n).map(|_| self.draw(&mut rng)).collect()
    }

    /// Member `j` sampled on `grid`, after the truncation diagnostic.
    pub fn member(&self, member: usize, grid: GridSpec) -> Result<Field> {
        let packets = self.packets(member);
        let field = Field::from_real_fn(grid, |x| packets.iter().map(|p| p.eval(x)).sum());
        let fraction = truncation_fraction(&field);
        if fraction >= TRUNCATION_LIMIT {
            return Err(Error::Truncation { fraction });
        }
        Ok(field)
    }

    pub fn members(&self, grid: GridSpec) -> Result<Vec<Field>> {
        self.validate()?;
        (0..self.count).map(|j| self.member(j, grid)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn deterministic_and_grid_independent() {
        let fam = TestFamily::default();
        let g = GridSpec::new(64.0 * PI, 2048).unwrap();
        let a = fam.member(5, g).unwrap();
        let b = fam.member(5, g).unwrap();
        assert_eq!(a, b);
        let fine = fam.member(5, g.refined()).unwrap();
        for m in 0..g.samples() {
            assert_eq!(a.values()[m], fine.values()[2 * m]);
        }
        let bigger = TestFamily {
            count: 100,
            ..fam.clone()
        };
        assert_eq!(fam.packets(7), bigger.packets(7));
        assert_ne!(fam.packets(7), fam.packets(8));
    }

    #[test]
    fn truncation_is_checked() {
        let g = GridSpec::new(20.0, 1024).unwrap();
        let fam = TestFamily {
            center: [9.0, 9.5],
            ..TestFamily::default()
        };
        assert!(matches!(fam.member(0, g), Err(Error::Truncation { .. })));
    }
}
