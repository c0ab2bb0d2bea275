use num_complex::Complex64;

use super::GridSpec;
use crate::error::{Error, Result};

/// Tolerance on the imaginary mass fraction for a field to count as real.
pub const REAL_TOLERANCE: f64 = 1e-10;

/// Complex samples of a function on a [`GridSpec`].
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    grid: GridSpec,
    values: Vec<Complex64>,
    real: bool,
}

impl Field {
    pub fn new(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.samples() {
            return Err(Error::LengthMismatch {
                expected: grid.samples(),
                got: values.len(),
            });
        }
        Ok(Self {
            grid,
            values,
            real: false,
        })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.samples()],
            real: true,
        }
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn(f64) -> Complex64) -> Self {
        Self {
            grid,
            values: grid.nodes().map(f).collect(),
            real: false,
        }
    }

    /// Samples a real-valued function; the result is flagged real.
    pub fn from_real_fn(grid: GridSpec, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid,
            values: grid.nodes().map(|x| Complex64::new(f(x), 0.0)).collect(),
            real: true,
        }
    }

    pub fn from_real(grid: GridSpec, values: &[f64]) -> Result<Self> {
        let mut field = Self::new(grid, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())?;
        field.real = true;
        Ok(field)
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        self.real = false;
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn is_flagged_real(&self) -> bool {
        self.real
    }

    /// `Σ|Im f|² / Σ|f|²`, zero for the zero field.
    pub fn imag_mass_fraction(&self) -> f64 {
        let total: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        if total == 0.0 {
            return 0.0;
        }
        let imag: f64 = self.values.iter().map(|v| v.im * v.im).sum();
        imag / total
    }

    /// Drops the imaginary part and flags the field real, provided the
    /// imaginary mass fraction is below `tol`.
    pub fn into_real(mut self, tol: f64) -> Result<Self> {
        let frac = self.imag_mass_fraction();
        if frac > tol * tol {
            return Err(Error::NotReal(frac.sqrt()));
        }
        for v in &mut self.values {
            v.im = 0.0;
        }
        self.real = true;
        Ok(self)
    }

    /// Errors unless the field is flagged real or passes the realness check.
    pub fn ensure_real(&self) -> Result<()> {
        if self.real {
            return Ok(());
        }
        let frac = self.imag_mass_fraction().sqrt();
        if frac > REAL_TOLERANCE {
            Err(Error::NotReal(frac))
        } else {
            Ok(())
        }
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    fn check_grid(&self, other: &Field) -> Result<()> {
        if self.grid != other.grid {
            Err(Error::GridMismatch)
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &Field) -> Result<Field> {
        self.check_grid(other)?;
        Ok(Field {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
            real: self.real && other.real,
        })
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.check_grid(other)?;
        Ok(Field {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
            real: self.real && other.real,
        })
    }

    pub fn scale(&self, c: Complex64) -> Field {
        Field {
            grid: self.grid,
            values: self.values.iter().map(|v| v * c).collect(),
            real: self.real && c.im == 0.0,
        }
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Field) -> Result<Field> {
        self.check_grid(other)?;
        Ok(Field {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
            real: self.real && other.real,
        })
    }

    pub(crate) fn with_real_flag(mut self, real: bool) -> Self {
        self.real = real;
        self
    }
}

/// Samples of `f̂(ξ_j)`, stored in FFT order (use [`GridSpec::xi`]).
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    grid: GridSpec,
    values: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.samples() {
            return Err(Error::LengthMismatch {
                expected: grid.samples(),
                got: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Value at signed mode `j`, i.e. at `ξ = πj/L`.
    pub fn at_mode(&self, j: i64) -> Complex64 {
        self.values[self.grid.index_of_mode(j)]
    }

    /// `(ξ_j, f̂(ξ_j))` pairs in FFT order.
    pub fn iter(&self) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        self.values.iter().enumerate().map(move |(i, v)| (self.grid.xi(i), *v))
    }
}

/// Time-indexed family of fields on a common grid.
#[derive(Clone, Debug)]
pub struct Trajectory {
    grid: GridSpec,
    times: Vec<f64>,
    states: Vec<Field>,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, states: Vec<Field>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::EmptyTrajectory);
        }
        if times.len() != states.len() {
            return Err(Error::LengthMismatch {
                expected: times.len(),
                got: states.len(),
            });
        }
        check_strictly_increasing(&times)?;
        let grid = states[0].grid();
        if states.iter().any(|s| s.grid() != grid) {
            return Err(Error::GridMismatch);
        }
        Ok(Self { grid, times, states })
    }

    /// `t ↦ f(t)` sampled at `times`.
    pub fn from_fn(times: Vec<f64>, f: impl Fn(f64) -> Field) -> Result<Self> {
        let states = times.iter().map(|&t| f(t)).collect();
        Self::new(times, states)
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[Field] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn first(&self) -> &Field {
        &self.states[0]
    }

    pub fn last(&self) -> &Field {
        self.states.last().expect("trajectory is non-empty")
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &Field)> {
        self.times.iter().copied().zip(&self.states)
    }

    pub fn into_parts(self) -> (Vec<f64>, Vec<Field>) {
        (self.times, self.states)
    }
}

pub(crate) fn check_strictly_increasing(times: &[f64]) -> Result<()> {
    for (i, w) in times.windows(2).enumerate() {
        if !(w[1] > w[0]) {
            return Err(Error::UnsortedTimes { index: i + 1 });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridSpec {
        GridSpec::new(10.0, 64).unwrap()
    }

    #[test]
    fn rejects_wrong_length() {
        assert!(matches!(
            Field::new(grid(), vec![Complex64::new(0.0, 0.0); 3]),
            Err(Error::LengthMismatch { expected: 64, got: 3 })
        ));
    }

    #[test]
    fn realness_flag_and_check() {
        let f = Field::from_fn(grid(), |x| Complex64::new(x.sin(), 1e-14));
        assert!(!f.is_flagged_real());
        assert!(f.ensure_real().is_ok());
        let g = Field::from_fn(grid(), |x| Complex64::new(x.sin(), 0.1 * x.cos()));
        assert!(g.ensure_real().is_err());
        assert!(g.into_real(1e-10).is_err());
    }

    #[test]
    fn trajectory_rejects_unsorted_times() {
        let f = Field::zeros(grid());
        let err = Trajectory::new(vec![0.0, 1.0, 1.0], vec![f.clone(), f.clone(), f]).unwrap_err();
        assert!(matches!(err, Error::UnsortedTimes { index: 2 }));
        assert!(matches!(Trajectory::new(vec![], vec![]), Err(Error::EmptyTrajectory)));
    }
}
