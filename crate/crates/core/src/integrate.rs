//! Adaptive Gauss–Kronrod (7/15) quadrature for scalar integrands.

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Value and error estimate of one 15-point panel.
pub fn gauss_kronrod_15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let (v, e, _) = panel(f, a, b);
    (v, e)
}

// value, error estimate, Kronrod estimate of ∫|f|
fn panel(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut abs = WGK[7] * fc.abs();
    for i in 0..7 {
        let dx = h * XGK[i];
        let (lo, hi) = (f(c - dx), f(c + dx));
        kronrod += WGK[i] * (lo + hi);
        abs += WGK[i] * (lo.abs() + hi.abs());
        if i % 2 == 1 {
            gauss += WG[i / 2] * (lo + hi);
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs(), abs * h.abs())
}

/// Result of an adaptive integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Adaptive bisection until each panel's error is below its share of `abs_tol`
/// or at the roundoff level of the panel.
pub fn integrate(f: &impl Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64) -> Integral {
    fn recurse(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32, out: &mut Integral) {
        let (v, e, abs) = panel(f, a, b);
        out.evaluations += 15;
        let floor = 50.0 * f64::EPSILON * abs;
        if e <= tol.max(floor) || depth == 0 || (b - a).abs() < 1e-14 * (a.abs() + b.abs()) {
            out.value += v;
            out.error += e;
            return;
        }
        let m = 0.5 * (a + b);
        recurse(f, a, m, 0.5 * tol, depth - 1, out);
        recurse(f, m, b, 0.5 * tol, depth - 1, out);
    }
    let mut out = Integral {
        value: 0.0,
        error: 0.0,
        evaluations: 0,
    };
    recurse(f, a, b, abs_tol, 30, &mut out);
    out
}

/// Splits `[a, b]` into panels no wider than `max_width` and integrates each adaptively.
pub fn integrate_panels(f: &impl Fn(f64) -> f64, a: f64, b: f64, max_width: f64, abs_tol: f64) -> Integral {
    let panels = (((b - a) / max_width).ceil() as usize).max(1);
    let h = (b - a) / panels as f64;
    let tol = abs_tol / panels as f64;
    let mut total = Integral {
        value: 0.0,
        error: 0.0,
        evaluations: 0,
    };
    for i in 0..panels {
        let lo = a + i as f64 * h;
        let hi = if i + 1 == panels { b } else { lo + h };
        let part = integrate(f, lo, hi, tol);
        total.value += part.value;
        total.error += part.error;
        total.evaluations += part.evaluations;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact_on_one_panel() {
        let (v, _) = gauss_kronrod_15(&|x: f64| x.powi(20) - 3.0 * x.powi(7), -1.0, 1.0);
        assert!((v - 2.0 / 21.0).abs() < 1e-14);
    }

    #[test]
    fn arctangent() {
        let r = integrate(&|x: f64| 1.0 / (1.0 + x * x), 0.0, 50.0, 1e-13);
        assert!((r.value - 50f64.atan()).abs() < 1e-12);
    }

    #[test]
    fn oscillatory_panels() {
        let w = 40.0;
        let r = integrate_panels(
            &|x: f64| (w * x).cos(),
            0.0,
            3.0,
            std::f64::consts::PI / (4.0 * w),
            1e-12,
        );
        assert!((r.value - (3.0 * w).sin() / w).abs() < 1e-12);
    }
}
