use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Periodic box `[-L, L)^n` sampled with `N` points per axis.
///
/// Nodes are `x_j = (j - N/2)·h` with `h = 2L/N`, which equals `-L + j·h` and
/// keeps the grid exactly symmetric about the origin (`x_{N-j} = -x_j`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    dim: usize,
    points: usize,
    half_length: f64,
}

impl GridSpec {
    pub fn new(dim: usize, points: usize, half_length: f64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidGrid(format!("dimension {dim} not in 1..=3")));
        }
        if points < 8 || !points.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "points per axis {points} must be even and at least 8"
            )));
        }
        if !(half_length > 0.0 && half_length.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "half length {half_length} must be positive"
            )));
        }
        Ok(Self {
            dim,
            points,
            half_length,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_length / self.points as f64
    }

    /// `N^n`.
    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Volume element `h^n` of the trapezoid rule on the box.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    pub fn box_volume(&self) -> f64 {
        (2.0 * self.half_length).powi(self.dim as i32)
    }

    pub fn node(&self, j: usize) -> f64 {
        (j as f64 - (self.points / 2) as f64) * self.spacing()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.points).map(|j| self.node(j)).collect()
    }

    /// Integer wavenumber of FFT slot `j`, in `[-N/2, N/2 - 1]`.
    pub fn mode_index(&self, j: usize) -> i64 {
        let n = self.points as i64;
        let j = j as i64;
        if j < n / 2 {
            j
        } else {
            j - n
        }
    }

    /// FFT slot holding integer wavenumber `k`, if it is representable.
    pub fn mode_slot(&self, k: i64) -> Option<usize> {
        let n = self.points as i64;
        if k < -n / 2 || k >= n / 2 {
            return None;
        }
        Some(k.rem_euclid(n) as usize)
    }

    /// Physical wavenumber `ξ = (π/L)·k` of FFT slot `j`.
    pub fn wavenumber(&self, j: usize) -> f64 {
        PI / self.half_length * self.mode_index(j) as f64
    }

    pub fn wavenumbers(&self) -> Vec<f64> {
        (0..self.points).map(|j| self.wavenumber(j)).collect()
    }

    /// Row-major strides, axis 0 slowest.
    pub fn strides(&self) -> [usize; 3] {
        let mut s = [0usize; 3];
        let mut acc = 1;
        for axis in (0..self.dim).rev() {
            s[axis] = acc;
            acc *= self.points;
        }
        s
    }

    /// Per-axis indices of a flat row-major offset.
    pub fn unravel(&self, mut flat: usize) -> [usize; 3] {
        let mut idx = [0usize; 3];
        for axis in (0..self.dim).rev() {
            idx[axis] = flat % self.points;
            flat /= self.points;
        }
        idx
    }

    /// `|ξ|²` for every flat offset, in transform order.
    pub fn wavenumber_sq(&self) -> Vec<f64> {
        let xi = self.wavenumbers();
        (0..self.len())
            .map(|flat| {
                let idx = self.unravel(flat);
                (0..self.dim).map(|a| xi[idx[a]] * xi[idx[a]]).sum()
            })
            .collect()
    }
}
