use std::f64::consts::PI;

use bbm_modlab::spectral::{
    apply_multiplier, forward_transform, inverse_transform, lp_norm, time_quadrature, Field, GridSpec, QuadratureRule,
};
use bbm_modlab::Complex64;
use proptest::prelude::*;

fn grid() -> GridSpec {
    GridSpec::new(8.0 * PI, 512).unwrap()
}

fn packet(a: f64, c: f64, w: f64, k: f64) -> impl Fn(f64) -> f64 {
    move |x: f64| a * (-((x - c) / w).powi(2) / 2.0).exp() * (k * x).cos()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parseval_holds(a in 0.1f64..3.0, c in -5.0f64..5.0, w in 0.5f64..3.0, k in 0.0f64..6.0) {
        let g = grid();
        let f = Field::from_real_fn(g, packet(a, c, w, k));
        let spectral: f64 = forward_transform(&f).values().iter().map(|v| v.norm_sqr()).sum::<f64>()
            / (2.0 * g.half_width());
        let physical = lp_norm(&f, 2.0).unwrap().powi(2);
        prop_assert!((spectral - physical).abs() <= 1e-10 * physical);
    }

    #[test]
    fn transform_round_trip(a in 0.1f64..3.0, c in -5.0f64..5.0, w in 0.5f64..3.0, k in 0.0f64..6.0) {
        let g = grid();
        let f = Field::from_real_fn(g, packet(a, c, w, k));
        let back = inverse_transform(&forward_transform(&f));
        let err = lp_norm(&back.sub(&f).unwrap(), 2.0).unwrap();
        prop_assert!(err <= 1e-12 * lp_norm(&f, 2.0).unwrap());
    }

    #[test]
    fn unimodular_multiplier_preserves_l2(shift in -10.0f64..10.0, c in -5.0f64..5.0) {
        let g = grid();
        let f = Field::from_real_fn(g, packet(1.0, c, 1.0, 2.0));
        let moved = apply_multiplier(&f, |xi| Complex64::new(0.0, -xi * shift).exp()).unwrap();
        let a = lp_norm(&f, 2.0).unwrap();
        let b = lp_norm(&moved, 2.0).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a);
    }

    #[test]
    fn lp_norms_ordered_on_unit_peak(p in 1.0f64..8.0, dp in 0.1f64..4.0) {
        // a peak-one function on a measure-small support: ‖f‖_q ≤ ‖f‖_p^{p/q} for q > p
        let f = Field::from_real_fn(grid(), |x| (-x * x).exp());
        let np = lp_norm(&f, p).unwrap();
        let nq = lp_norm(&f, p + dp).unwrap();
        prop_assert!(nq <= np.powf(p / (p + dp)) * (1.0 + 1e-12));
    }
}

#[test]
fn simpson_integrates_cubics_exactly() {
    let times: Vec<f64> = (0..=8).map(|i| i as f64 * 0.25).collect();
    let values: Vec<f64> = times.iter().map(|t| t * t * t - 2.0 * t).collect();
    let got: f64 = time_quadrature(&times, &values, QuadratureRule::Simpson).unwrap();
    assert!((got - (4.0 - 4.0)).abs() < 1e-14, "{got}");
}

#[test]
fn gaussian_spectrum_matches_closed_form() {
    // ∫ e^{−x²/2} e^{−iξx} dx = √(2π) e^{−ξ²/2}
    let g = grid();
    let f = Field::from_real_fn(g, |x| (-x * x / 2.0).exp());
    for (xi, v) in forward_transform(&f).iter() {
        let exact = (2.0 * PI).sqrt() * (-xi * xi / 2.0).exp();
        assert!((v.re - exact).abs() < 1e-12 && v.im.abs() < 1e-12, "xi = {xi}");
    }
}
