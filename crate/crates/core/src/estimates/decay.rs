use rayon::prelude::*;
use serde::Serialize;

use super::family::TestFamily;
use super::report::{relative_drift, QuotientReport, QuotientRow};
use crate::error::{Error, Result};
use crate::group::{apply_j, apply_s_j, beta};
use crate::spectral::{conjugate_exponent, lp_norm, Field, GridSpec};

/// `‖J^σ u‖_p`.
pub fn sobolev_norm(u: &Field, sigma: f64, p: f64) -> Result<f64> {
    lp_norm(&apply_j(u, sigma)?, p)
}

/// `n` points log-spaced on `[t_min, t_max]`, endpoints included.
pub fn log_spaced(t_min: f64, t_max: f64, n: usize) -> Result<Vec<f64>> {
    if !(t_min > 0.0 && t_max > t_min && n >= 2) {
        return Err(Error::precondition(
            "0 < t_min < t_max and n >= 2",
            format!("got [{t_min}, {t_max}] with n = {n}"),
        ));
    }
    let (a, b) = (t_min.ln(), t_max.ln());
    let mut ts: Vec<f64> = (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect();
    ts[0] = t_min;
    ts[n - 1] = t_max;
    Ok(ts)
}

/// Decay exponent `2(1/2 − 1/p)β_σ`.
pub fn decay_exponent(sigma: f64, p: f64) -> Result<f64> {
    Ok(2.0 * (0.5 - 1.0 / p) * beta(sigma)?)
}

fn decay_rows(family: &TestFamily, sigma: f64, p: f64, ts: &[f64], grid: GridSpec) -> Result<Vec<QuotientRow>> {
    let exponent = decay_exponent(sigma, p)?;
    let p_dual = conjugate_exponent(p);
    let members = family.members(grid)?;
    let per_member = members
        .par_iter()
        .enumerate()
        .map(|(j, f)| {
            let base = lp_norm(f, p_dual)?;
            ts.iter()
                .map(|&t| {
                    let num = lp_norm(&apply_s_j(f, t, sigma)?, p)?;
                    Ok(QuotientRow::new(j, Some(t), num, t.abs().powf(exponent) * base))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_member.into_iter().flatten().collect())
}

/// `‖S(t)f‖_{H^σ_p} / (|t|^{2(1/2−1/p)β_σ}‖f‖_{p′})` over the family and `ts`,
/// with the refinement drift measured on `grid.refined()`.
pub fn decay_quotients(family: &TestFamily, sigma: f64, p: f64, ts: &[f64], grid: GridSpec) -> Result<QuotientReport> {
    if p.is_nan() || p < 2.0 {
        return Err(Error::precondition("p in [2, inf]", format!("got p = {p}")));
    }
    beta(sigma)?;
    if let Some(&t) = ts.iter().find(|t| **t == 0.0 || !t.is_finite()) {
        return Err(Error::precondition("t != 0", format!("got t = {t}")));
    }
    let kind = format!("decay(sigma={sigma},p={p})");
    let mut report = QuotientReport::new(&kind, decay_rows(family, sigma, p, ts, grid)?);
    let fine = QuotientReport::new(&kind, decay_rows(family, sigma, p, ts, grid.refined())?);
    report.refinement_drift = relative_drift(report.sup_quotient, fine.sup_quotient);
    Ok(report)
}

/// Family supremum of `numerator/denominator · |t|^{exponent}` at each `t`:
/// undoes the time weight of a decay report.
pub fn raw_decay(report: &QuotientReport, exponent: f64) -> Vec<(f64, f64)> {
    report
        .sup_per_time()
        .into_iter()
        .map(|(t, q)| (t, q * t.abs().powf(exponent)))
        .collect()
}

/// Least-squares line through `(log t, log value)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayFit {
    pub t_window: [f64; 2],
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in log space.
    pub residual: f64,
    pub target_exponent: f64,
    pub points: usize,
}

impl DecayFit {
    /// Upper-bound acceptance: the measured decay is at least as fast as
    /// the target, up to `tol`.
    pub fn accepts(&self, tol: f64) -> bool {
        self.slope <= self.target_exponent + tol
    }
}

pub fn fit_decay_slope(samples: &[(f64, f64)], t_window: [f64; 2], target_exponent: f64) -> Result<DecayFit> {
    if !(t_window[0] >= 1.0 && t_window[1] > t_window[0]) {
        return Err(Error::precondition(
            "1 <= t_min < t_max",
            format!("got [{}, {}]", t_window[0], t_window[1]),
        ));
    }
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(t, v)| *t >= t_window[0] && *t <= t_window[1] && *v > 0.0)
        .map(|&(t, v)| (t.ln(), v.ln()))
        .collect();
    if pts.len() < 8 {
        return Err(Error::TooFewSamples {
            needed: 8,
            got: pts.len(),
        });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum::<f64>() / n).sqrt();
    Ok(DecayFit {
        t_window,
        slope,
        intercept,
        residual,
        target_exponent,
        points: pts.len(),
    })
}

/// `ε + (1−σ)|t|^{−1/2}ε^{−1/2} + |t|^{−1/2} max{N^{3/2}, ε^{−1/2}}[N^σ + (√3+ε)^σ] − N^{σ+1}/(σ+1)`,
/// the bound on `‖K(t)‖_∞` with `K(t) = S(t)J^σ` before optimizing in `ε` and `N`.
pub fn kernel_sup_envelope(t: f64, eps: f64, n: f64, sigma: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 0.125) {
        return Err(Error::precondition("0 < eps < 1/8", format!("got eps = {eps}")));
    }
    if !(n > 2.0) {
        return Err(Error::precondition("N > 2", format!("got N = {n}")));
    }
    if !(sigma < 0.0) {
        return Err(Error::precondition("sigma < 0", format!("got sigma = {sigma}")));
    }
    if t == 0.0 || !t.is_finite() {
        return Err(Error::precondition("t != 0", format!("got t = {t}")));
    }
    let it = t.abs().powf(-0.5);
    let tail = if sigma == -1.0 {
        0.0
    } else {
        -n.powf(sigma + 1.0) / (sigma + 1.0)
    };
    Ok(eps
        + (1.0 - sigma) * it / eps.sqrt()
        + it * n.powf(1.5).max(eps.powf(-0.5)) * (n.powf(sigma) + (3f64.sqrt() + eps).powf(sigma))
        + tail)
}

/// Balanced choice `N = 2|t|^θ`, `θ = 1/(1−2σ)`, `ε = N^{−3}` (so `N^{3/2} = ε^{−1/2}`).
/// Admissible only for `|t| > 1`, where `N > 2`.
pub fn calibrated_parameters(t: f64, sigma: f64) -> Result<(f64, f64)> {
    if !(t.abs() > 1.0) {
        return Err(Error::precondition("|t| > 1", format!("got t = {t}")));
    }
    let theta = 1.0 / (1.0 - 2.0 * sigma);
    let n = 2.0 * t.abs().powf(theta);
    Ok((n, n.powi(-3)))
}

pub fn calibrated_envelope(t: f64, sigma: f64) -> Result<f64> {
    let (n, eps) = calibrated_parameters(t, sigma)?;
    kernel_sup_envelope(t, eps, n, sigma)
}

/// One measured curve against `C · envelope(t)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnvelopeCurve {
    pub sigma: f64,
    /// `(t, measured, envelope)` for every sample.
    pub samples: Vec<(f64, f64, f64)>,
    /// Largest `measured/envelope` on the calibration window.
    pub local_constant: f64,
    pub holds: bool,
}

/// Result of bounding measured curves by one constant times the envelope.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnvelopeCheck {
    /// `C`, the largest `measured/envelope` over every curve with `t ≤ calibrate_until`.
    pub constant: f64,
    pub calibrate_until: f64,
    pub curves: Vec<EnvelopeCurve>,
    pub holds: bool,
}

/// Fixes one `C` from the samples with `t ≤ calibrate_until`, pooled over
/// all curves, and checks `measured ≤ C · envelope` at every sample.
pub fn check_envelopes(curves: &[(f64, Vec<(f64, f64)>)], calibrate_until: f64) -> Result<EnvelopeCheck> {
    let mut out = Vec::with_capacity(curves.len());
    for (sigma, measured) in curves {
        let samples = measured
            .iter()
            .map(|&(t, m)| Ok((t, m, calibrated_envelope(t, *sigma)?)))
            .collect::<Result<Vec<_>>>()?;
        let local_constant = samples
            .iter()
            .filter(|s| s.0 <= calibrate_until)
            .map(|s| s.1 / s.2)
            .fold(f64::NEG_INFINITY, f64::max);
        out.push(EnvelopeCurve {
            sigma: *sigma,
            samples,
            local_constant,
            holds: false,
        });
    }
    let constant = out.iter().map(|c| c.local_constant).fold(f64::NEG_INFINITY, f64::max);
    if !constant.is_finite() {
        return Err(Error::TooFewSamples { needed: 1, got: 0 });
    }
    for curve in &mut out {
        curve.holds = curve.samples.iter().all(|s| s.1 <= constant * s.2 * (1.0 + 1e-12));
    }
    Ok(EnvelopeCheck {
        constant,
        calibrate_until,
        holds: out.iter().all(|c| c.holds),
        curves: out,
    })
}

/// [`check_envelopes`] for a single curve.
pub fn check_envelope(measured: &[(f64, f64)], sigma: f64, calibrate_until: f64) -> Result<EnvelopeCheck> {
    check_envelopes(&[(sigma, measured.to_vec())], calibrate_until)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::apply_j;

    #[test]
    fn sobolev_norm_single_mode() {
        let g = GridSpec::new(16.0 * std::f64::consts::PI, 256).unwrap();
        let u = Field::from_fn(g, |x| num_complex::Complex64::new(0.0, x).exp());
        for sigma in [-2.0, -1.0, 0.5] {
            for p in [2.0, 3.0, f64::INFINITY] {
                let expected = 2f64.powf(sigma / 2.0) * lp_norm(&u, p).unwrap();
                assert!((sobolev_norm(&u, sigma, p).unwrap() - expected).abs() < 1e-12 * expected);
            }
        }
        assert_eq!(
            sobolev_norm(&u, 0.0, 3.0).unwrap(),
            lp_norm(&apply_j(&u, 0.0).unwrap(), 3.0).unwrap()
        );
    }

    #[test]
    fn exact_power_law_slope() {
        let ts = log_spaced(1.0, 100.0, 20).unwrap();
        let data: Vec<(f64, f64)> = ts.iter().map(|&t| (t, 3.0 * t.powf(-1.0 / 3.0))).collect();
        let fit = fit_decay_slope(&data, [1.0, 100.0], -1.0 / 3.0).unwrap();
        assert!((fit.slope + 1.0 / 3.0).abs() < 1e-10);
        assert!((fit.intercept - 3f64.ln()).abs() < 1e-10);
        assert!(fit.residual < 1e-10);
        assert!(fit.accepts(0.0 + 1e-9));
    }

    #[test]
    fn perturbed_power_law_slope() {
        // several periods of sin(log t) so the oscillation averages out
        let t_max = 20f64.exp();
        let ts = log_spaced(1.0, t_max, 400).unwrap();
        let data: Vec<(f64, f64)> = ts
            .iter()
            .map(|&t| (t, t.powf(-1.0 / 3.0) * (2.0 + t.ln().sin())))
            .collect();
        let fit = fit_decay_slope(&data, [1.0, t_max], -1.0 / 3.0).unwrap();
        assert!((fit.slope + 1.0 / 3.0).abs() < 0.02, "{}", fit.slope);
    }

    #[test]
    fn fit_needs_eight_points() {
        let data: Vec<(f64, f64)> = (1..=7).map(|i| (i as f64, 1.0 / i as f64)).collect();
        assert!(matches!(
            fit_decay_slope(&data, [1.0, 10.0], -1.0),
            Err(Error::TooFewSamples { needed: 8, got: 7 })
        ));
        assert!(fit_decay_slope(&data, [0.5, 10.0], -1.0).is_err());
    }

    #[test]
    fn envelope_preconditions_and_monotonicity() {
        assert!(kernel_sup_envelope(1.0, 0.2, 3.0, -2.0).is_err());
        assert!(kernel_sup_envelope(1.0, 0.1, 2.0, -2.0).is_err());
        assert!(kernel_sup_envelope(1.0, 0.1, 3.0, 0.5).is_err());
        assert!(kernel_sup_envelope(0.0, 0.1, 3.0, -2.0).is_err());
        let ts = log_spaced(1.0, 100.0, 50).unwrap();
        let vals: Vec<f64> = ts
            .iter()
            .map(|&t| kernel_sup_envelope(t, 0.05, 4.0, -2.0).unwrap())
            .collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn calibrated_n_at_sixteen() {
        let (n, eps) = calibrated_parameters(16.0, -2.0).unwrap();
        assert!((n - 2.0 * 16f64.powf(0.2)).abs() < 1e-14);
        assert!((n - 3.482).abs() < 5e-4);
        assert!((n.powf(1.5) - eps.powf(-0.5)).abs() < 1e-12 * n.powf(1.5));
        assert!(calibrated_parameters(1.0, -2.0).is_err());
    }

    #[test]
    fn decay_rejects_small_p() {
        let fam = TestFamily {
            count: 2,
            ..TestFamily::default()
        };
        assert!(decay_quotients(&fam, -2.0, 1.5, &[1.0], GridSpec::desk()).is_err());
        assert!(decay_quotients(&fam, -0.5, 2.0, &[1.0], GridSpec::desk()).is_err());
    }
}
