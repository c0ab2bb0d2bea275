use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Periodic truncation `[-L, L)` of the real line sampled at `N` points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    half_width: f64,
    samples: usize,
}

impl GridSpec {
    pub fn new(half_width: f64, samples: usize) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::Grid(format!("half width must be positive, got {half_width}")));
        }
        if samples < 4 || !samples.is_power_of_two() {
            return Err(Error::Grid(format!(
                "sample count must be a power of two >= 4, got {samples}"
            )));
        }
        Ok(Self { half_width, samples })
    }

    /// Default desk-scale grid: `L = 64π`, `N = 2^13`.
    pub fn desk() -> Self {
        Self {
            half_width: 64.0 * PI,
            samples: 1 << 13,
        }
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / self.samples as f64
    }

    /// Frequency spacing `π/L`.
    pub fn dxi(&self) -> f64 {
        PI / self.half_width
    }

    /// Largest resolved frequency `πN/(2L)`.
    pub fn nyquist(&self) -> f64 {
        self.dxi() * (self.samples / 2) as f64
    }

    pub fn x(&self, m: usize) -> f64 {
        -self.half_width + m as f64 * self.dx()
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.samples).map(move |m| self.x(m))
    }

    /// Signed mode number `j` stored at FFT-ordered index `i`.
    pub fn mode(&self, i: usize) -> i64 {
        let n = self.samples;
        if i < n / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    /// FFT-ordered index of signed mode `j`.
    pub fn index_of_mode(&self, j: i64) -> usize {
        j.rem_euclid(self.samples as i64) as usize
    }

    /// `ξ` at FFT-ordered index `i`.
    pub fn xi(&self, i: usize) -> f64 {
        self.mode(i) as f64 * self.dxi()
    }

    /// All frequencies in FFT order.
    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.samples).map(|i| self.xi(i)).collect()
    }

    /// Same window, twice the samples.
    pub fn refined(&self) -> Self {
        Self {
            half_width: self.half_width,
            samples: self.samples * 2,
        }
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        Self::desk()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_power_of_two() {
        assert!(GridSpec::new(1.0, 100).is_err());
        assert!(GridSpec::new(-1.0, 64).is_err());
        assert!(GridSpec::new(1.0, 64).is_ok());
    }

    #[test]
    fn node_and_mode_layout() {
        let g = GridSpec::new(PI, 8).unwrap();
        assert_eq!(g.x(0), -PI);
        assert!((g.x(4)).abs() < 1e-15);
        let modes: Vec<i64> = (0..8).map(|i| g.mode(i)).collect();
        assert_eq!(modes, vec![0, 1, 2, 3, -4, -3, -2, -1]);
        for j in -4..4 {
            assert_eq!(g.mode(g.index_of_mode(j)), j);
        }
        assert_eq!(g.nyquist(), 4.0);
    }

    #[test]
    fn desk_grid_resolves_frequency_fifty() {
        let g = GridSpec::desk();
        assert!((g.dxi() - 1.0 / 64.0).abs() < 1e-15);
        assert!((g.nyquist() - 64.0).abs() < 1e-12);
    }
}
