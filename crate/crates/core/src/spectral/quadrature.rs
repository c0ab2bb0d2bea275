use num_complex::Complex64;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::field::check_strictly_increasing;
use crate::error::{Error, Result};

/// Quadrature rule over time samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureRule {
    Trapezoid,
    /// Composite Simpson; an odd interval count closes with a 3/8 panel on
    /// uniform grids and with a one-interval quadratic otherwise.
    #[default]
    Simpson,
    /// Local cubic interpolation through four neighbours, integrated by
    /// two-point Gauss on each subinterval.
    GaussOnSubintervals,
}

/// Values that can be summed with real weights.
pub trait Integrand: Copy {
    fn zero() -> Self;
    fn mul_add(self, w: f64, acc: Self) -> Self;
}

impl Integrand for f64 {
    fn zero() -> Self {
        0.0
    }
    fn mul_add(self, w: f64, acc: Self) -> Self {
        acc + w * self
    }
}

impl Integrand for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn mul_add(self, w: f64, acc: Self) -> Self {
        acc + self * w
    }
}

fn is_uniform(times: &[f64]) -> bool {
    let h = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
    times.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h.abs())
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.len() < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            got: times.len(),
        });
    }
    check_strictly_increasing(times)
}

/// Weights `w_i` with `∫ g ≈ Σ w_i g(t_i)` over `[t_0, t_last]`.
pub fn quadrature_weights(times: &[f64], rule: QuadratureRule) -> Result<Vec<f64>> {
    check_times(times)?;
    let n = times.len();
    let mut w = vec![0.0; n];
    match rule {
        QuadratureRule::Trapezoid => trapezoid(times, &mut w, 0, n - 1),
        QuadratureRule::Simpson => {
            if n == 2 {
                trapezoid(times, &mut w, 0, 1);
            } else if is_uniform(times) {
                simpson_uniform(times, &mut w);
            } else {
                simpson_nonuniform(times, &mut w);
            }
        }
        QuadratureRule::GaussOnSubintervals => gauss_cubic(times, &mut w),
    }
    Ok(w)
}

fn trapezoid(times: &[f64], w: &mut [f64], from: usize, to: usize) {
    for i in from..to {
        let h = times[i + 1] - times[i];
        w[i] += 0.5 * h;
        w[i + 1] += 0.5 * h;
    }
}

fn simpson_pairs_uniform(h: f64, w: &mut [f64], from: usize, to: usize) {
    let mut i = from;
    while i + 2 <= to {
        w[i] += h / 3.0;
        w[i + 1] += 4.0 * h / 3.0;
        w[i + 2] += h / 3.0;
        i += 2;
    }
}

fn three_eighths(h: f64, w: &mut [f64], from: usize) {
    w[from] += 3.0 * h / 8.0;
    w[from + 1] += 9.0 * h / 8.0;
    w[from + 2] += 9.0 * h / 8.0;
    w[from + 3] += 3.0 * h / 8.0;
}

fn simpson_uniform(times: &[f64], w: &mut [f64]) {
    let intervals = times.len() - 1;
    let h = (times[intervals] - times[0]) / intervals as f64;
    if intervals.is_multiple_of(2) {
        simpson_pairs_uniform(h, w, 0, intervals);
    } else {
        simpson_pairs_uniform(h, w, 0, intervals - 3);
        three_eighths(h, w, intervals - 3);
    }
}

fn simpson_nonuniform(times: &[f64], w: &mut [f64]) {
    let intervals = times.len() - 1;
    let paired = intervals - intervals % 2;
    let mut i = 0;
    while i + 2 <= paired {
        let h0 = times[i + 1] - times[i];
        let h1 = times[i + 2] - times[i + 1];
        let s = h0 + h1;
        w[i] += s / 6.0 * (2.0 - h1 / h0);
        w[i + 1] += s / 6.0 * s * s / (h0 * h1);
        w[i + 2] += s / 6.0 * (2.0 - h0 / h1);
        i += 2;
    }
    if intervals % 2 == 1 {
        // quadratic through the last three nodes, integrated over the last interval
        let k = intervals;
        let h0 = times[k - 1] - times[k - 2];
        let h1 = times[k] - times[k - 1];
        w[k - 2] += -h1 * h1 * h1 / (6.0 * h0 * (h0 + h1));
        w[k - 1] += h1 * (h1 + 3.0 * h0) / (6.0 * h0);
        w[k] += h1 * (2.0 * h1 + 3.0 * h0) / (6.0 * (h0 + h1));
    }
}

fn gauss_cubic(times: &[f64], w: &mut [f64]) {
    let n = times.len();
    let width = n.min(4);
    let g = 0.5 / 3f64.sqrt();
    for i in 0..n - 1 {
        let start = (i as isize - 1).clamp(0, (n - width) as isize) as usize;
        let stencil = &times[start..start + width];
        let h = times[i + 1] - times[i];
        let mid = 0.5 * (times[i] + times[i + 1]);
        for node in [mid - g * h, mid + g * h] {
            for (a, &ta) in stencil.iter().enumerate() {
                let mut basis = 1.0;
                for (b, &tb) in stencil.iter().enumerate() {
                    if a != b {
                        basis *= (node - tb) / (ta - tb);
                    }
                }
                w[start + a] += 0.5 * h * basis;
            }
        }
    }
}

/// `∫ g dt` over the sampled window.
pub fn time_quadrature<T: Integrand>(times: &[f64], values: &[T], rule: QuadratureRule) -> Result<T> {
    if values.len() != times.len() {
        return Err(Error::LengthMismatch {
            expected: times.len(),
            got: values.len(),
        });
    }
    let w = quadrature_weights(times, rule)?;
    Ok(values
        .iter()
        .zip(&w)
        .fold(T::zero(), |acc, (&v, &wi)| v.mul_add(wi, acc)))
}

/// `∫_{t_0}^{t_n} g` for every `n`, with vector-valued samples.
///
/// Entry `n` uses exactly the weights of [`quadrature_weights`] on
/// `times[..=n]` (trapezoid on the first interval).
pub fn cumulative_integrals(
    times: &[f64],
    rule: QuadratureRule,
    values: &[Vec<Complex64>],
) -> Result<Vec<Vec<Complex64>>> {
    if values.len() != times.len() {
        return Err(Error::LengthMismatch {
            expected: times.len(),
            got: values.len(),
        });
    }
    check_times(times)?;
    let dim = values[0].len();
    if values.iter().any(|v| v.len() != dim) {
        return Err(Error::LengthMismatch {
            expected: dim,
            got: values.iter().map(Vec::len).find(|&l| l != dim).unwrap_or(dim),
        });
    }
    let n = times.len();
    let zero = vec![Complex64::new(0.0, 0.0); dim];
    let mut out = Vec::with_capacity(n);
    out.push(zero.clone());

    let uniform = is_uniform(times);
    let axpy = |acc: &mut Vec<Complex64>, w: f64, v: &[Complex64]| {
        for (a, b) in acc.iter_mut().zip(v) {
            *a += b * w;
        }
    };

    match (rule, uniform) {
        (QuadratureRule::Trapezoid, _) => {
            let mut acc = zero;
            for i in 1..n {
                let h = times[i] - times[i - 1];
                axpy(&mut acc, 0.5 * h, &values[i - 1]);
                axpy(&mut acc, 0.5 * h, &values[i]);
                out.push(acc.clone());
            }
        }
        (QuadratureRule::Simpson, true) => {
            let h = times[1] - times[0];
            // even[m] = Simpson over [t_0, t_{2m}]
            let mut even: Vec<Vec<Complex64>> = vec![zero.clone()];
            for i in 1..n {
                if i % 2 == 0 {
                    let mut acc = even[i / 2 - 1].clone();
                    axpy(&mut acc, h / 3.0, &values[i - 2]);
                    axpy(&mut acc, 4.0 * h / 3.0, &values[i - 1]);
                    axpy(&mut acc, h / 3.0, &values[i]);
                    even.push(acc.clone());
                    out.push(acc);
                } else if i == 1 {
                    let mut acc = zero.clone();
                    axpy(&mut acc, 0.5 * h, &values[0]);
                    axpy(&mut acc, 0.5 * h, &values[1]);
                    out.push(acc);
                } else {
                    let mut acc = even[(i - 3) / 2].clone();
                    for (k, c) in [3.0, 9.0, 9.0, 3.0].iter().enumerate() {
                        axpy(&mut acc, c * h / 8.0, &values[i - 3 + k]);
                    }
                    out.push(acc);
                }
            }
        }
        _ => {
            for i in 1..n {
                let w = quadrature_weights(&times[..=i], rule)?;
                let mut acc = zero.clone();
                for (wi, v) in w.iter().zip(values) {
                    axpy(&mut acc, *wi, v);
                }
                out.push(acc);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn constant_integrates_exactly() {
        let t = linspace(0.0, 1.0, 7);
        let g = vec![1.0; 7];
        for rule in [
            QuadratureRule::Trapezoid,
            QuadratureRule::Simpson,
            QuadratureRule::GaussOnSubintervals,
        ] {
            assert!((time_quadrature(&t, &g, rule).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn cubic_exact_for_simpson_and_gauss() {
        for n in [3, 4, 5, 8, 11] {
            let t = linspace(0.0, 1.0, n);
            let g: Vec<f64> = t.iter().map(|x| x * x * x).collect();
            let s = time_quadrature(&t, &g, QuadratureRule::Simpson).unwrap();
            assert!((s - 0.25).abs() < 1e-12, "n={n} s={s}");
            if n >= 4 {
                let gq = time_quadrature(&t, &g, QuadratureRule::GaussOnSubintervals).unwrap();
                assert!((gq - 0.25).abs() < 1e-12, "n={n} g={gq}");
            }
        }
    }

    #[test]
    fn exponential_closed_form() {
        let t = linspace(0.0, 5.0, 101);
        let g: Vec<f64> = t.iter().map(|x| (-x).exp()).collect();
        let exact = 1.0 - (-5.0f64).exp();
        let trap = time_quadrature(&t, &g, QuadratureRule::Trapezoid).unwrap();
        let simp = time_quadrature(&t, &g, QuadratureRule::Simpson).unwrap();
        let gauss = time_quadrature(&t, &g, QuadratureRule::GaussOnSubintervals).unwrap();
        // leading Euler-Maclaurin term h²/12·|g'(b) − g'(a)|
        assert!((trap - exact).abs() < 1.01 * 0.05f64.powi(2) / 12.0 * exact);
        assert!((simp - exact).abs() < 1e-7);
        assert!((gauss - exact).abs() < 1e-6);
    }

    #[test]
    fn nonuniform_simpson_is_quadratic_exact() {
        let t = vec![0.0, 0.1, 0.35, 0.5, 0.9, 1.0];
        let g: Vec<f64> = t.iter().map(|x| 3.0 * x * x - x + 2.0).collect();
        let s = time_quadrature(&t, &g, QuadratureRule::Simpson).unwrap();
        assert!((s - (1.0 - 0.5 + 2.0)).abs() < 1e-13);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            time_quadrature(&[0.0], &[1.0], QuadratureRule::Simpson),
            Err(Error::TooFewSamples { .. })
        ));
        assert!(matches!(
            time_quadrature(&[0.0, 2.0, 1.0], &[1.0; 3], QuadratureRule::Simpson),
            Err(Error::UnsortedTimes { index: 2 })
        ));
    }

    #[test]
    fn cumulative_matches_prefix_quadrature() {
        for rule in [
            QuadratureRule::Trapezoid,
            QuadratureRule::Simpson,
            QuadratureRule::GaussOnSubintervals,
        ] {
            let t = linspace(0.0, 2.0, 12);
            let vals: Vec<Vec<Complex64>> = t
                .iter()
                .map(|&x| vec![Complex64::new(x.sin(), x * x), Complex64::new(1.0, -x)])
                .collect();
            let cum = cumulative_integrals(&t, rule, &vals).unwrap();
            assert_eq!(cum[0][0], Complex64::new(0.0, 0.0));
            for n in 1..t.len() {
                for d in 0..2 {
                    let g: Vec<Complex64> = vals[..=n].iter().map(|v| v[d]).collect();
                    let direct = time_quadrature(&t[..=n], &g, rule).unwrap();
                    assert!((cum[n][d] - direct).norm() < 1e-13, "rule={rule:?} n={n}");
                }
            }
        }
    }
}
