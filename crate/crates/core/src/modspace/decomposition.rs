use num_complex::Complex64;

use super::BumpProfile;
use crate::error::{Error, Result};
use crate::spectral::{forward_transform, inverse_transform, Field, GridSpec, InverseFft, Spectrum};

/// Relative spectral level below which a block is treated as empty.
/// Sits just above transform roundoff so that noise-only blocks are skipped.
pub(crate) const NEGLIGIBLE_BLOCK: f64 = 1e-14;

/// Samples of one `σ_k` on the grid: modes `first_mode..first_mode + weights.len()`.
#[derive(Clone, Debug)]
struct Window {
    first_mode: i64,
    weights: Vec<f64>,
}

/// Sampled partition of unity `σ_k(ξ) = ρ(ξ−k)/Σ_l ρ(ξ−l)`, `|k| ≤ k_max`.
#[derive(Clone, Debug)]
pub struct UniformDecomposition {
    grid: GridSpec,
    profile: BumpProfile,
    k_max: i64,
    windows: Vec<Window>,
}

/// `σ_k(ξ)` evaluated analytically.
pub fn sigma(profile: BumpProfile, k: i64, xi: f64) -> f64 {
    let num = profile.eval(xi - k as f64);
    if num == 0.0 {
        return 0.0;
    }
    let base = xi.floor() as i64;
    let den: f64 = (base - 1..=base + 2).map(|l| profile.eval(xi - l as f64)).sum();
    num / den
}

impl UniformDecomposition {
    pub fn build(grid: GridSpec, profile: BumpProfile, k_max: i64) -> Result<Self> {
        let limit = grid.nyquist().floor() as i64 - 2;
        if k_max < 1 || k_max > limit {
            return Err(Error::KmaxTooLarge { k_max, limit });
        }
        let dxi = grid.dxi();
        let windows = (-k_max..=k_max)
            .map(|k| {
                let lo = ((k as f64 - 1.0) / dxi).ceil() as i64;
                let hi = ((k as f64 + 1.0) / dxi).floor() as i64;
                let weights = (lo..=hi).map(|j| sigma(profile, k, j as f64 * dxi)).collect();
                Window {
                    first_mode: lo,
                    weights,
                }
            })
            .collect();
        Ok(Self {
            grid,
            profile,
            k_max,
            windows,
        })
    }

    /// Default profile with `k_max = 48`.
    pub fn desk(grid: GridSpec) -> Result<Self> {
        Self::build(grid, BumpProfile::default(), 48)
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn profile(&self) -> BumpProfile {
        self.profile
    }

    pub fn k_max(&self) -> i64 {
        self.k_max
    }

    /// Block indices in ascending order.
    pub fn indices(&self) -> std::ops::RangeInclusive<i64> {
        -self.k_max..=self.k_max
    }

    /// Number of blocks, `2·k_max + 1`.
    pub fn len(&self) -> usize {
        self.windows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }

    /// Half-width of the band on which the partition is complete.
    pub fn resolved_band(&self) -> f64 {
        (self.k_max - 2) as f64
    }

    fn window(&self, k: i64) -> Result<&Window> {
        if k.abs() > self.k_max {
            return Err(Error::BlockOutOfRange { k, k_max: self.k_max });
        }
        Ok(&self.windows[(k + self.k_max) as usize])
    }

    /// Sampled `σ_k(ξ_j)` at mode `j`; zero off the support.
    pub fn sigma_at_mode(&self, k: i64, j: i64) -> Result<f64> {
        let w = self.window(k)?;
        let off = j - w.first_mode;
        Ok(if off < 0 || off as usize >= w.weights.len() {
            0.0
        } else {
            w.weights[off as usize]
        })
    }

    /// `max_j |Σ_k σ_k(ξ_j) − 1|` over `|ξ_j| ≤ k_max − 2`.
    pub fn partition_residual(&self) -> f64 {
        let band = self.resolved_band();
        let n = self.grid.samples();
        let mut sum = vec![0.0; n];
        for w in &self.windows {
            for (o, &s) in w.weights.iter().enumerate() {
                sum[self.grid.index_of_mode(w.first_mode + o as i64)] += s;
            }
        }
        (0..n)
            .filter(|&i| self.grid.xi(i).abs() <= band)
            .map(|i| (sum[i] - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Realized `min σ_k(ξ_j)` over `|ξ_j − k| ≤ 1/2`, all blocks.
    pub fn lower_bound(&self) -> f64 {
        let dxi = self.grid.dxi();
        let mut c = f64::INFINITY;
        for (idx, w) in self.windows.iter().enumerate() {
            let k = idx as i64 - self.k_max;
            for (o, &s) in w.weights.iter().enumerate() {
                let xi = (w.first_mode + o as i64) as f64 * dxi;
                if (xi - k as f64).abs() <= 0.5 {
                    c = c.min(s);
                }
            }
        }
        c
    }

    /// `□_k u`.
    pub fn block(&self, u: &Field, k: i64) -> Result<Field> {
        self.window(k)?;
        self.grid_check(u)?;
        Ok(self.block_of_spectrum(&forward_transform(u), k))
    }

    /// `□_k` applied to an already transformed field; `k` must be in range.
    pub(crate) fn block_of_spectrum(&self, spec: &Spectrum, k: i64) -> Field {
        let w = &self.windows[(k + self.k_max) as usize];
        let mut out = vec![Complex64::new(0.0, 0.0); self.grid.samples()];
        for (o, &s) in w.weights.iter().enumerate() {
            let i = self.grid.index_of_mode(w.first_mode + o as i64);
            out[i] = spec.values()[i] * s;
        }
        inverse_transform(&Spectrum::new(self.grid, out).expect("length matches grid"))
    }

    /// Calls `visit(k, samples of □_k u)` for every `k` in `range` whose
    /// windowed spectrum exceeds the negligible level; one buffer is reused.
    pub(crate) fn for_each_block_in(
        &self,
        spec: &Spectrum,
        range: std::ops::RangeInclusive<i64>,
        mut visit: impl FnMut(i64, &[Complex64]),
    ) {
        let global = spec.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
        if global == 0.0 {
            return;
        }
        let n = self.grid.samples();
        let scale = 1.0 / (2.0 * self.grid.half_width());
        let mut fft = InverseFft::new(n);
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for k in range {
            if self.block_spectral_max(spec, k) <= NEGLIGIBLE_BLOCK * global {
                continue;
            }
            buf.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
            let w = &self.windows[(k + self.k_max) as usize];
            for (o, &s) in w.weights.iter().enumerate() {
                let i = self.grid.index_of_mode(w.first_mode + o as i64);
                let sign = if i.is_multiple_of(2) { scale } else { -scale };
                buf[i] = spec.values()[i] * (s * sign);
            }
            fft.process(&mut buf);
            visit(k, &buf);
        }
    }

    /// `‖□_k u‖_2` from the spectrum by discrete Parseval,
    /// `Δx Σ|□_k u|² = Σ|σ_k f̂|² / (2L)`.
    pub(crate) fn block_l2_from_spectrum(&self, spec: &Spectrum, k: i64) -> f64 {
        let w = &self.windows[(k + self.k_max) as usize];
        let sum: f64 = w
            .weights
            .iter()
            .enumerate()
            .map(|(o, &s)| (s * spec.values()[self.grid.index_of_mode(w.first_mode + o as i64)]).norm_sqr())
            .sum();
        (sum / (2.0 * self.grid.half_width())).sqrt()
    }

    /// `max_j σ_k(ξ_j)|f̂(ξ_j)|` for block `k`.
    pub(crate) fn block_spectral_max(&self, spec: &Spectrum, k: i64) -> f64 {
        let w = &self.windows[(k + self.k_max) as usize];
        w.weights
            .iter()
            .enumerate()
            .map(|(o, &s)| s * spec.values()[self.grid.index_of_mode(w.first_mode + o as i64)].norm())
            .fold(0.0, f64::max)
    }

    /// Relative L² spectral mass of `u` outside `|ξ| ≤ k_max − 2`.
    pub fn tail_fraction(&self, u: &Field) -> Result<f64> {
        self.grid_check(u)?;
        let spec = forward_transform(u);
        let band = self.resolved_band();
        let (mut tail, mut total) = (0.0, 0.0);
        for (xi, v) in spec.iter() {
            let e = v.norm_sqr();
            total += e;
            if xi.abs() > band {
                tail += e;
            }
        }
        Ok(if total == 0.0 { 0.0 } else { tail / total })
    }

    fn grid_check(&self, u: &Field) -> Result<()> {
        if u.grid() != self.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{apply_multiplier, lp_norm};
    use std::f64::consts::PI;

    fn small() -> UniformDecomposition {
        UniformDecomposition::build(GridSpec::new(16.0 * PI, 1024).unwrap(), BumpProfile::default(), 12).unwrap()
    }

    #[test]
    fn partition_and_lower_bound() {
        for p in BumpProfile::ALL {
            let d = UniformDecomposition::build(GridSpec::new(16.0 * PI, 1024).unwrap(), p, 12).unwrap();
            assert!(d.partition_residual() < 1e-12);
            assert!((d.lower_bound() - 0.5).abs() < 1e-12, "{}", d.lower_bound());
        }
    }

    #[test]
    fn sigma_zero_at_origin_block() {
        assert!(sigma(BumpProfile::default(), 0, 0.0) >= 1.0 / 3.0);
        assert_eq!(sigma(BumpProfile::default(), 0, 0.0), 1.0);
    }

    #[test]
    fn support() {
        let d = small();
        let g = d.grid();
        for k in d.indices() {
            for i in 0..g.samples() {
                let j = g.mode(i);
                if (g.xi(i) - k as f64).abs() >= 1.0 {
                    assert_eq!(d.sigma_at_mode(k, j).unwrap(), 0.0);
                }
            }
        }
    }

    #[test]
    fn k_max_limits() {
        let g = GridSpec::new(16.0 * PI, 1024).unwrap();
        // Nyquist is 32
        assert!(UniformDecomposition::build(g, BumpProfile::default(), 30).is_ok());
        assert!(matches!(
            UniformDecomposition::build(g, BumpProfile::default(), 31),
            Err(Error::KmaxTooLarge { k_max: 31, limit: 30 })
        ));
        assert!(matches!(
            small().block(&Field::zeros(g), 13),
            Err(Error::BlockOutOfRange { .. })
        ));
    }

    #[test]
    fn narrow_spectrum_splits_into_three_blocks() {
        let d = small();
        let g = d.grid();
        // grid modes with |ξ| ≤ 1/4 (Δξ = 1/16)
        let u = Field::from_real_fn(g, |x| {
            (0..=4)
                .map(|j| (1.0 + j as f64).recip() * (j as f64 * x / 16.0 + 0.3 * j as f64).cos())
                .sum()
        });
        let sum = d
            .block(&u, -1)
            .unwrap()
            .add(&d.block(&u, 0).unwrap())
            .unwrap()
            .add(&d.block(&u, 1).unwrap())
            .unwrap();
        assert!(lp_norm(&sum.sub(&u).unwrap(), 2.0).unwrap() < 1e-10 * lp_norm(&u, 2.0).unwrap());
        for k in [-3, 2, 5] {
            assert!(lp_norm(&d.block(&u, k).unwrap(), 2.0).unwrap() < 1e-14);
        }
    }

    #[test]
    fn block_commutes_with_multiplier() {
        let d = small();
        let g = d.grid();
        let u = Field::from_real_fn(g, |x| (-(x - 3.0).powi(2) / 8.0).exp() * (2.3 * x).cos());
        let m = |xi: f64| Complex64::new(1.0 / (1.0 + xi * xi), xi.sin());
        for k in [-2, 0, 2, 3] {
            let a = d.block(&apply_multiplier(&u, m).unwrap(), k).unwrap();
            let b = apply_multiplier(&d.block(&u, k).unwrap(), m).unwrap();
            assert!(lp_norm(&a.sub(&b).unwrap(), 2.0).unwrap() < 1e-12);
        }
    }
}
