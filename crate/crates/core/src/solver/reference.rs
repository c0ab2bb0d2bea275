use num_complex::Complex64;

use super::duhamel::nonlinear_spectrum;
use super::CauchyProblem;
use crate::error::{Error, Result};
use crate::group::sampled_phi;
use crate::spectral::{forward_transform, inverse_transform, Field, Spectrum, Trajectory, REAL_TOLERANCE};

/// Growth of the `L²` norm past which the stepper gives up.
const BLOWUP_FACTOR: f64 = 1e6;

/// Classical RK4 on the integrating-factor form of
/// `û_t = −iφ(ξ)û − (i/(λ+1))φ(ξ)(u^{λ+1})^`, independent of the Duhamel
/// quadrature.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReferenceStepper {
    pub dt: f64,
    /// With `false` only the linear flow is integrated (exactly).
    pub nonlinear: bool,
}

impl ReferenceStepper {
    pub fn new(dt: f64) -> Self {
        Self { dt, nonlinear: true }
    }

    pub fn linear(dt: f64) -> Self {
        Self { dt, nonlinear: false }
    }

    /// Steps of at most `dt` landing exactly on every requested time.
    fn check_dt(&self) -> Result<()> {
        if self.dt > 0.0 && self.dt.is_finite() {
            Ok(())
        } else {
            Err(Error::precondition("dt > 0", format!("got dt = {}", self.dt)))
        }
    }

    pub fn evolve_at(&self, prob: &CauchyProblem, times: &[f64]) -> Result<Trajectory> {
        self.check_dt()?;
        if times.first() != Some(&0.0) {
            return Err(Error::precondition(
                "sample times start at 0",
                format!("got {:?}", times.first()),
            ));
        }
        let grid = prob.u0.grid();
        let phi = sampled_phi(grid);
        let lambda = prob.lambda;
        let factor = -1.0 / (lambda as f64 + 1.0);
        // v̂ = e^{itφ}û, so v̂_t = e^{itφ}·(−(i/(λ+1))φ(u^{λ+1})^)
        let rhs = |t: f64, v: &[Complex64]| -> Result<Vec<Complex64>> {
            let u_hat: Vec<Complex64> = v
                .iter()
                .zip(&phi)
                .map(|(c, &ph)| c * Complex64::new(0.0, -t * ph).exp())
                .collect();
            let u = inverse_transform(&Spectrum::new(grid, u_hat)?).into_real(REAL_TOLERANCE)?;
            let w = nonlinear_spectrum(&u, lambda)?;
            Ok(w.values()
                .iter()
                .zip(&phi)
                .map(|(c, &ph)| c * Complex64::new(0.0, factor * ph) * Complex64::new(0.0, t * ph).exp())
                .collect())
        };
        let to_field = |t: f64, v: &[Complex64]| -> Result<Field> {
            let u_hat = v
                .iter()
                .zip(&phi)
                .map(|(c, &ph)| c * Complex64::new(0.0, -t * ph).exp())
                .collect();
            inverse_transform(&Spectrum::new(grid, u_hat)?).into_real(REAL_TOLERANCE)
        };

        let mut v = forward_transform(&prob.u0).into_values();
        let norm0: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let mut t = 0.0;
        let mut states = vec![prob.u0.clone()];
        for w in times.windows(2) {
            let (start, end) = (w[0], w[1]);
            if !(end > start) {
                return Err(Error::UnsortedTimes { index: 0 });
            }
            let steps = ((end - start) / self.dt).ceil().max(1.0) as usize;
            let h = (end - start) / steps as f64;
            for i in 0..steps {
                if self.nonlinear {
                    let k1 = rhs(t, &v)?;
                    let k2 = rhs(t + 0.5 * h, &axpy(&v, 0.5 * h, &k1))?;
                    let k3 = rhs(t + 0.5 * h, &axpy(&v, 0.5 * h, &k2))?;
                    let k4 = rhs(t + h, &axpy(&v, h, &k3))?;
                    for (j, x) in v.iter_mut().enumerate() {
                        *x += (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]) * (h / 6.0);
                    }
                }
                t = if i + 1 == steps {
                    end
                } else {
                    start + (i + 1) as f64 * h
                };
                let norm: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                if !norm.is_finite() || norm > BLOWUP_FACTOR * norm0.max(f64::MIN_POSITIVE) {
                    return Err(Error::Instability { t });
                }
            }
            states.push(to_field(end, &v)?);
        }
        Trajectory::new(times.to_vec(), states)
    }

    /// Uniform output every step on `[0, T]`.
    pub fn evolve(&self, prob: &CauchyProblem) -> Result<Trajectory> {
        self.check_dt()?;
        let steps = (prob.t_end / self.dt).ceil().max(1.0) as usize;
        let times: Vec<f64> = (0..=steps).map(|i| prob.t_end * i as f64 / steps as f64).collect();
        self.evolve_at(prob, &times)
    }
}

fn axpy(v: &[Complex64], h: f64, k: &[Complex64]) -> Vec<Complex64> {
    v.iter().zip(k).map(|(a, b)| a + b * h).collect()
}

/// [`ReferenceStepper::evolve`] with the nonlinearity on.
pub fn reference_evolve(prob: &CauchyProblem, dt: f64) -> Result<Trajectory> {
    ReferenceStepper::new(dt).evolve(prob)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::apply_s;
    use crate::spectral::{lp_norm, GridSpec};
    use std::f64::consts::PI;

    fn grid() -> GridSpec {
        GridSpec::new(16.0 * PI, 512).unwrap()
    }

    #[test]
    fn zero_data_stays_zero() {
        let prob = CauchyProblem::gaussian(2, 0.0, grid(), 1.0).unwrap();
        let traj = reference_evolve(&prob, 0.1).unwrap();
        assert!(traj.states().iter().all(|u| u.values().iter().all(|v| v.norm() == 0.0)));
    }

    #[test]
    fn linear_flow_is_exact() {
        let prob = CauchyProblem::gaussian(1, 1.0, grid(), 3.0).unwrap();
        let traj = ReferenceStepper::linear(0.5)
            .evolve_at(&prob, &[0.0, 1.3, 3.0])
            .unwrap();
        for (t, u) in traj.iter() {
            let exact = apply_s(&prob.u0, t).unwrap();
            assert!(lp_norm(&u.sub(&exact).unwrap(), 2.0).unwrap() < 1e-12);
        }
    }

    #[test]
    fn fourth_order_convergence() {
        let prob = CauchyProblem::gaussian(1, 2.0, grid(), 2.0).unwrap();
        let end = |dt: f64| {
            ReferenceStepper::new(dt)
                .evolve_at(&prob, &[0.0, 2.0])
                .unwrap()
                .last()
                .clone()
        };
        let (a, b, c) = (end(0.2), end(0.1), end(0.05));
        let e1 = lp_norm(&a.sub(&b).unwrap(), 2.0).unwrap();
        let e2 = lp_norm(&b.sub(&c).unwrap(), 2.0).unwrap();
        let ratio = e1 / e2;
        assert!((12.0..20.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn rejects_bad_times() {
        let prob = CauchyProblem::gaussian(1, 1.0, grid(), 1.0).unwrap();
        assert!(ReferenceStepper::new(0.1).evolve_at(&prob, &[0.5, 1.0]).is_err());
        assert!(ReferenceStepper::new(0.0).evolve(&prob).is_err());
    }
}
