use super::grid::GridSpec;
use crate::error::{Error, Result};
use rustfft::num_complex::Complex64;

/// Real samples at the grid nodes, row-major with axis 0 slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: GridSpec,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn constant(grid: GridSpec, c: f64) -> Self {
        Self {
            grid,
            values: vec![c; grid.len()],
        }
    }

    /// Samples `f(x)` where `x` holds the node coordinates (length `n`).
    pub fn from_fn(grid: GridSpec, f: impl Fn(&[f64]) -> f64) -> Self {
        let nodes = grid.nodes();
        let mut x = vec![0.0; grid.dim()];
        let values = (0..grid.len())
            .map(|flat| {
                let idx = grid.unravel(flat);
                for (axis, xa) in x.iter_mut().enumerate() {
                    *xa = nodes[idx[axis]];
                }
                f(&x)
            })
            .collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Trapezoid (periodic) approximation of `∫ f`.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_volume()
    }

    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v * v).sum::<f64>() * self.grid.cell_volume()).sqrt()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.check_grid(other)?;
        Ok(Self {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub(crate) fn check_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }
}

/// Fourier coefficients in FFT slot order (see [`GridSpec::mode_index`]).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: GridSpec,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn new(grid: GridSpec, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                got: coeffs.len(),
            });
        }
        Ok(Self { grid, coeffs })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    fn flat_of(&self, k: &[i64]) -> Option<usize> {
        if k.len() != self.grid.dim() {
            return None;
        }
        let strides = self.grid.strides();
        let mut flat = 0;
        for (axis, &ka) in k.iter().enumerate() {
            flat += self.grid.mode_slot(ka)? * strides[axis];
        }
        Some(flat)
    }

    /// Coefficient of the integer wavenumber tuple `k`.
    pub fn coefficient(&self, k: &[i64]) -> Option<Complex64> {
        self.flat_of(k).map(|f| self.coeffs[f])
    }

    /// Integer wavenumber tuple of a flat slot.
    pub fn mode_of(&self, flat: usize) -> Vec<i64> {
        let idx = self.grid.unravel(flat);
        (0..self.grid.dim())
            .map(|a| self.grid.mode_index(idx[a]))
            .collect()
    }

    /// Checks `F(-k) = conj(F(k))` relative to the largest coefficient.
    ///
    /// Slots whose negation is not representable (a Nyquist index on some
    /// axis) are compared with their own wrap-around partner, as the DFT does.
    pub fn is_conjugate_symmetric(&self, tol: f64) -> bool {
        let n = self.grid.points();
        let strides = self.grid.strides();
        let scale = self
            .coeffs
            .iter()
            .fold(0.0f64, |m, c| m.max(c.norm()))
            .max(1e-300);
        (0..self.coeffs.len()).all(|flat| {
            let idx = self.grid.unravel(flat);
            let partner: usize = (0..self.grid.dim())
                .map(|a| ((n - idx[a]) % n) * strides[a])
                .sum();
            (self.coeffs[flat] - self.coeffs[partner].conj()).norm() <= tol * scale
        })
    }
}

/// `n` scalar components sharing one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    components: Vec<ScalarField>,
}

impl VectorField {
    pub fn new(components: Vec<ScalarField>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidGrid("vector field needs components".into()))?;
        if components.len() != first.grid().dim() {
            return Err(Error::InvalidGrid(format!(
                "{} components on a {}-dimensional grid",
                components.len(),
                first.grid().dim()
            )));
        }
        if components.iter().any(|c| c.grid() != first.grid()) {
            return Err(Error::GridMismatch);
        }
        Ok(Self { components })
    }

    pub fn grid(&self) -> &GridSpec {
        self.components[0].grid()
    }

    pub fn components(&self) -> &[ScalarField] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &ScalarField {
        &self.components[i]
    }

    pub fn into_components(self) -> Vec<ScalarField> {
        self.components
    }

    /// Pointwise `|v|²`.
    pub fn norm_sq(&self) -> ScalarField {
        let mut out = ScalarField::zeros(*self.grid());
        for c in &self.components {
            for (o, v) in out.values_mut().iter_mut().zip(c.values()) {
                *o += v * v;
            }
        }
        out
    }

    /// `max_x |v(x)|` (Euclidean norm at each node).
    pub fn sup_norm(&self) -> f64 {
        self.norm_sq().max_abs().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().all(ScalarField::is_finite)
    }
}
