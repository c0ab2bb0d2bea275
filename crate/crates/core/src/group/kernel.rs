use std::f64::consts::PI;

use super::symbols::{phi, phi_prime, phi_second};
use crate::error::{Error, Result};
use crate::integrate::{integrate, integrate_panels, Integral};

/// Absolute accuracy target of the kernel quadratures.
pub const KERNEL_TOLERANCE: f64 = 1e-10;

/// Quadrature value with its accumulated error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelValue {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

fn panel_width(x: f64, t: f64) -> f64 {
    let scale = x.abs() + t.abs();
    if scale == 0.0 {
        1.0
    } else {
        (PI / (4.0 * scale)).min(1.0)
    }
}

fn accumulate(acc: &mut KernelValue, part: Integral) {
    acc.value += part.value;
    acc.error += part.error;
    acc.evaluations += part.evaluations;
}

/// `∫ (1+ξ²)^{σ/2} e^{i(xξ − tφ(ξ))} dξ` over the real line (no `1/2π`).
///
/// The integrand has an even amplitude and odd phase, so the kernel is real
/// and is computed as `2∫_0^∞ A cos ψ`. Beyond a core interval the tail is
/// integrated on panels until the two-term integration-by-parts remainder
/// (or, for `x = 0`, the amplitude tail `Ξ^{σ+1}/|σ+1|`) drops below
/// [`KERNEL_TOLERANCE`]; the boundary terms are then added.
pub fn kernel_direct(t: f64, sigma: f64, x: f64) -> Result<KernelValue> {
    if sigma.is_nan() || sigma >= -1.0 {
        return Err(Error::hypothesis("sigma < -1", format!("got sigma = {sigma}")));
    }
    let amp = |xi: f64| (1.0 + xi * xi).powf(0.5 * sigma);
    let f = |xi: f64| 2.0 * amp(xi) * (x * xi - t * phi(xi)).cos();
    let width = panel_width(x, t);

    let mut core_end: f64 = 16.0;
    if x != 0.0 {
        // past every stationary point of xξ − tφ(ξ)
        core_end = core_end.max(4.0 * (t.abs() / x.abs()).sqrt());
    }
    let mut out = KernelValue {
        value: 0.0,
        error: 0.0,
        evaluations: 0,
    };
    accumulate(
        &mut out,
        integrate_panels(&f, 0.0, core_end, width, 0.1 * KERNEL_TOLERANCE),
    );

    let tol = 0.1 * KERNEL_TOLERANCE;
    if x.abs() < 1e-12 {
        let mut a = core_end;
        while a.powf(sigma + 1.0) / (-(sigma + 1.0)) > tol {
            accumulate(&mut out, integrate(&f, a, 2.0 * a, 1e-3 * tol));
            a *= 2.0;
        }
        out.error += a.powf(sigma + 1.0) / (-(sigma + 1.0));
        return Ok(out);
    }

    let dpsi = |xi: f64| x - t * phi_prime(xi);
    // B = (A/ψ')'
    let b_term = |xi: f64| {
        let d = 1.0 + xi * xi;
        let a = d.powf(0.5 * sigma);
        let da = sigma * xi * d.powf(0.5 * sigma - 1.0);
        let p1 = dpsi(xi);
        let p2 = -t * phi_second(xi);
        da / p1 - a * p2 / (p1 * p1)
    };
    let mut tail_end = core_end;
    while (b_term(tail_end) / dpsi(tail_end)).abs() > tol {
        tail_end *= 2.0;
    }
    accumulate(
        &mut out,
        integrate_panels(&f, core_end, tail_end, PI / (4.0 * x.abs()), 0.1 * tol),
    );
    // ∫_Ξ^∞ A e^{iψ} ≈ e^{iψ(Ξ)} (iA − B)/ψ' at Ξ
    let xi = tail_end;
    let psi = x * xi - t * phi(xi);
    let (s, c) = psi.sin_cos();
    let (a, b, p1) = (amp(xi), b_term(xi), dpsi(xi));
    // real part of (c + is)(−b + ia)/p1
    out.value += 2.0 * (-c * b - s * a) / p1;
    out.error += 2.0 * (b / p1).abs();
    Ok(out)
}

/// `∫ (1+ξ²)^{σ/2} e^{−w²ξ²/2} e^{i(xξ − tφ(ξ))} dξ`: the kernel convolved
/// with a normalized Gaussian of width `w`, times `2π`.
pub fn kernel_direct_smoothed(t: f64, sigma: f64, x: f64, w: f64) -> Result<KernelValue> {
    if !(w > 0.0) {
        return Err(Error::precondition("w > 0", format!("got w = {w}")));
    }
    let end = (2.0 * 40.0f64).sqrt() / w;
    let f = |xi: f64| {
        2.0 * (1.0 + xi * xi).powf(0.5 * sigma) * (-0.5 * w * w * xi * xi).exp() * (x * xi - t * phi(xi)).cos()
    };
    let part = integrate_panels(&f, 0.0, end, panel_width(x, t), 0.01 * KERNEL_TOLERANCE);
    Ok(KernelValue {
        value: part.value,
        error: part.error,
        evaluations: part.evaluations,
    })
}
