use super::report::{relative_drift, QuotientReport, QuotientRow};
use crate::error::{Error, Result};
use crate::integrate::integrate;

fn convolution(rho: f64, tail: f64, t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    let f = |tau: f64| (1.0 + (t - tau).abs()).powf(-rho) * (1.0 + tau).powf(-tail);
    integrate(&f, 0.0, t, 1e-13).value
}

fn rows(rho: f64, tail: f64, ts: &[f64]) -> Vec<QuotientRow> {
    ts.iter()
        .map(|&t| {
            let num = convolution(rho, tail, t);
            // t = 0 is a genuine zero of the quotient, not 0/0
            let mut row = QuotientRow::new(0, Some(t), num, (1.0 + t).powf(-rho));
            row.quotient = Some(num * (1.0 + t).powf(rho));
            row
        })
        .collect()
}

/// `(1+t)^ρ ∫₀ᵗ (1+|t−τ|)^{−ρ}(1+τ)^{−ρ(λ+1)} dτ` at each `t`, with the drift
/// of the supremum when the `t` grid is refined by midpoints.
pub fn weighted_convolution_bound(rho: f64, lambda: u32, ts: &[f64]) -> Result<QuotientReport> {
    let tail = rho * (lambda as f64 + 1.0);
    if !(rho > 0.0 && tail > 1.0) {
        return Err(Error::hypothesis(
            "λ≥3 regime",
            format!("need rho > 0 and rho(lambda+1) > 1, got rho = {rho}, rho(lambda+1) = {tail}"),
        ));
    }
    if let Some(&t) = ts.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(Error::precondition("t >= 0", format!("got t = {t}")));
    }
    let mut report = QuotientReport::new("convolution_bound", rows(rho, tail, ts));
    let mut sorted = ts.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut refined: Vec<f64> = sorted.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    refined.extend_from_slice(&sorted);
    let fine = QuotientReport::new("convolution_bound", rows(rho, tail, &refined));
    report.refinement_drift = relative_drift(report.sup_quotient, fine.sup_quotient);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_time_gives_zero() {
        let r = weighted_convolution_bound(0.3, 3, &[0.0]).unwrap();
        assert_eq!(r.rows[0].quotient, Some(0.0));
        assert_eq!(r.rows[0].numerator, 0.0);
    }

    #[test]
    fn closed_form_at_rho_one() {
        // ρ = 1, λ = 1: ∫₀ᵗ dτ/((1+t−τ)(1+τ)²) by partial fractions
        let t: f64 = 5.0;
        let a = 2.0 + t;
        let exact = (1.0 / a) * (1.0 - 1.0 / (1.0 + t)) + (1.0 / (a * a)) * 2.0 * (1.0 + t).ln();
        let r = weighted_convolution_bound(1.0, 1, &[t]).unwrap();
        assert!(
            (r.rows[0].numerator - exact).abs() < 1e-12,
            "{} vs {exact}",
            r.rows[0].numerator
        );
    }

    #[test]
    fn rejects_slow_tail() {
        let err = weighted_convolution_bound(0.3, 0, &[1.0]).unwrap_err();
        assert!(err.to_string().contains("hypothesis λ≥3 regime violated"), "{err}");
    }
}
