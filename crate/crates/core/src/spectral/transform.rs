use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::{Field, Spectrum};
use crate::error::{Error, Result};

struct Plans {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

// Plans are immutable once built; the map only grows.
fn plans(n: usize) -> (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>) {
    static CACHE: OnceLock<Mutex<HashMap<usize, Plans>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().expect("fft plan cache poisoned");
    let entry = map.entry(n).or_insert_with(|| {
        let mut planner = FftPlanner::new();
        Plans {
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    });
    (entry.forward.clone(), entry.inverse.clone())
}

/// Inverse FFT with caller-owned scratch, for tight loops over many blocks.
pub(crate) struct InverseFft {
    plan: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
}

impl InverseFft {
    pub(crate) fn new(n: usize) -> Self {
        let (_, plan) = plans(n);
        let scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        Self { plan, scratch }
    }

    pub(crate) fn process(&mut self, values: &mut [Complex64]) {
        self.plan.process_with_scratch(values, &mut self.scratch);
    }
}

/// Unnormalized forward FFT in place (`Σ v_m e^{-2πijm/N}`).
pub(crate) fn fft_in_place(values: &mut [Complex64]) {
    let (fwd, _) = plans(values.len());
    fwd.process(values);
}

/// Unnormalized inverse FFT in place (`Σ v_j e^{+2πijm/N}`).
pub(crate) fn ifft_in_place(values: &mut [Complex64]) {
    let (_, inv) = plans(values.len());
    inv.process(values);
}

/// `f̂(ξ_j) = Δx Σ_m f(x_m) e^{-iξ_j x_m}`.
pub fn forward_transform(f: &Field) -> Spectrum {
    let grid = f.grid();
    let mut values = f.values().to_vec();
    fft_in_place(&mut values);
    let dx = grid.dx();
    // e^{-iξ_j x_m} = (-1)^j e^{-2πijm/N} because x_0 = -L
    for (i, v) in values.iter_mut().enumerate() {
        let sign = if i % 2 == 0 { dx } else { -dx };
        *v *= sign;
    }
    Spectrum::new(grid, values).expect("length preserved")
}

/// `f(x_m) = (1/2L) Σ_j f̂(ξ_j) e^{iξ_j x_m}`.
pub fn inverse_transform(s: &Spectrum) -> Field {
    let grid = s.grid();
    let mut values = s.values().to_vec();
    let scale = 1.0 / (2.0 * grid.half_width());
    for (i, v) in values.iter_mut().enumerate() {
        let sign = if i % 2 == 0 { scale } else { -scale };
        *v *= sign;
    }
    ifft_in_place(&mut values);
    Field::new(grid, values).expect("length preserved")
}

/// `F⁻¹[m · F f]` for a symbol evaluated at every grid frequency.
pub fn apply_multiplier(f: &Field, symbol: impl Fn(f64) -> Complex64) -> Result<Field> {
    let grid = f.grid();
    let sampled: Vec<Complex64> = (0..grid.samples())
        .map(|i| {
            let xi = grid.xi(i);
            let m = symbol(xi);
            if m.re.is_finite() && m.im.is_finite() {
                Ok(m)
            } else {
                Err(Error::NonFiniteSymbol { xi })
            }
        })
        .collect::<Result<_>>()?;
    apply_sampled_multiplier(f, &sampled)
}

/// Multiplier given by its samples in FFT order.
pub fn apply_sampled_multiplier(f: &Field, symbol: &[Complex64]) -> Result<Field> {
    let n = f.grid().samples();
    if symbol.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: symbol.len(),
        });
    }
    // the (-1)^j phase and the Δx/2L scale cancel between the two transforms
    let mut values = f.values().to_vec();
    fft_in_place(&mut values);
    let inv_n = 1.0 / n as f64;
    for (v, m) in values.iter_mut().zip(symbol) {
        *v *= m * inv_n;
    }
    ifft_in_place(&mut values);
    Ok(Field::new(f.grid(), values)?.with_real_flag(false))
}

/// Rectangle-rule `(Σ|f(x_m)|^p Δx)^{1/p}`; `p = ∞` gives the grid maximum.
pub fn lp_norm(f: &Field, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    Ok(lp_norm_values(f.values(), f.grid().dx(), p))
}

pub fn lp_norm_values(values: &[Complex64], dx: f64, p: f64) -> f64 {
    let max_sq = values.iter().map(|v| v.norm_sqr()).fold(0.0, f64::max);
    if p.is_infinite() || max_sq == 0.0 {
        return max_sq.sqrt();
    }
    let sum: f64 = if p == 2.0 {
        values.iter().map(|v| v.norm_sqr()).sum()
    } else if p == 1.0 {
        values.iter().map(|v| v.norm()).sum()
    } else {
        // scale by the maximum so large exponents cannot overflow, and skip
        // samples whose contribution is below (1e-20)^p of the peak
        let inv = 1.0 / max_sq;
        let floor = 1e-40;
        let half = p / 2.0;
        let term: Box<dyn Fn(f64) -> f64> = if p.fract() == 0.0 && p <= 64.0 {
            let k = p as i32;
            if k % 2 == 0 {
                Box::new(move |r: f64| r.powi(k / 2))
            } else {
                Box::new(move |r: f64| r.powi(k / 2) * r.sqrt())
            }
        } else {
            Box::new(move |r: f64| r.powf(half))
        };
        let scaled: f64 = values
            .iter()
            .map(|v| v.norm_sqr() * inv)
            .filter(|&r| r > floor)
            .map(term)
            .sum();
        return max_sq.sqrt() * (scaled * dx).powf(1.0 / p);
    };
    (sum * dx).powf(1.0 / p)
}

/// Fraction of `L²` mass outside `|x| <= L/2`.
pub fn truncation_fraction(f: &Field) -> f64 {
    let grid = f.grid();
    let half = grid.half_width() / 2.0;
    let mut inside = 0.0;
    let mut outside = 0.0;
    for (x, v) in grid.nodes().zip(f.values()) {
        if x.abs() <= half {
            inside += v.norm_sqr();
        } else {
            outside += v.norm_sqr();
        }
    }
    let total = inside + outside;
    if total == 0.0 {
        0.0
    } else {
        outside / total
    }
}
