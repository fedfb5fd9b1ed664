//! Product quadrature on `[-1,1]^n` against the singular weight.
//!
//! Every rule is a set of node weights per axis obtained by integrating the
//! hat basis exactly against a weight `ω` cell by cell. Only the moments
//! `∫ω` and `∫xω` of each cell are needed and both are elementary. Cells are
//! assembled on `[0,1]` and mirrored, so odd rules are exactly antisymmetric.

use crate::error::{Error, Result};
use crate::setup::WeightSpec;
use crate::spectral::GridSpec;

/// `∫_a^b x^p dx` for `0 ≤ a < b`.
pub(crate) fn power_integral(a: f64, b: f64, p: f64) -> f64 {
    let q = p + 1.0;
    if a == 0.0 {
        debug_assert!(q > 0.0);
        return b.powf(q) / q;
    }
    let log_ratio = (b / a).ln();
    if q == 0.0 {
        return log_ratio;
    }
    a.powf(q) * (q * log_ratio).exp_m1() / q
}

/// Weight families on `(0, 1]`, extended by parity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum AxisWeight {
    /// `1`, even.
    Unit,
    /// `x^{-κ} - 1`, odd.
    Singular,
    /// `(x^{-κ} - 1)²`, even.
    SingularSq,
    /// `x^{-κ-1}`, even.
    Steep,
}

impl AxisWeight {
    fn is_odd(self) -> bool {
        matches!(self, Self::Singular)
    }

    /// Whether the hat of node 0 is used. The squared and steep weights only
    /// ever multiply data vanishing at 0, and sharing one reconstruction keeps
    /// their cell integrals comparable.
    fn uses_origin(self) -> bool {
        matches!(self, Self::Unit | Self::Singular)
    }

    /// `(∫_a^b ω, ∫_a^b xω)` on `0 ≤ a < b ≤ 1`.
    fn moments(self, a: f64, b: f64, kappa: f64) -> (f64, f64) {
        let p = |e: f64| power_integral(a, b, e);
        let (m0_unit, m1_unit) = (b - a, 0.5 * (b * b - a * a));
        match self {
            Self::Unit => (m0_unit, m1_unit),
            Self::Singular => (p(-kappa) - m0_unit, p(1.0 - kappa) - m1_unit),
            Self::SingularSq => (
                p(-2.0 * kappa) - 2.0 * p(-kappa) + m0_unit,
                p(1.0 - 2.0 * kappa) - 2.0 * p(1.0 - kappa) + m1_unit,
            ),
            Self::Steep => (p(-kappa - 1.0), p(-kappa)),
        }
    }

    /// `∫_0^h ω(x)·x/h dx`, the weight of node `h` when `g(0) = 0`.
    fn first_cell_vanishing(self, h: f64, kappa: f64) -> f64 {
        let p = |e: f64| power_integral(0.0, h, e);
        let m1 = match self {
            Self::Unit => 0.5 * h * h,
            Self::Singular => p(1.0 - kappa) - 0.5 * h * h,
            Self::SingularSq => p(1.0 - 2.0 * kappa) - 2.0 * p(1.0 - kappa) + 0.5 * h * h,
            Self::Steep => p(-kappa),
        };
        m1 / h
    }
}

/// Node weights for `∫_{-1}^{1} g ω` with `g` piecewise linear between nodes.
///
/// For the squared and steep weights the first cell on each side uses the
/// reconstruction `g(x) ≈ g(h)|x|/h`, which is second order when `g(0) = 0`.
/// Odd rules carry zero weight at the origin.
pub(crate) fn axis_weights(grid: &GridSpec, weight: AxisWeight, kappa: f64) -> Vec<f64> {
    let n = grid.points();
    let h = grid.spacing();
    let centre = n / 2;
    let nodes = grid.nodes();
    let mut out = vec![0.0; n];
    let mut origin = 0.0;
    for j in centre..n - 1 {
        let (xl, xr) = (nodes[j], nodes[j + 1]);
        if xl >= 1.0 {
            break;
        }
        let b = xr.min(1.0);
        if j == centre && !weight.uses_origin() {
            out[j + 1] += weight.first_cell_vanishing(h, kappa);
            continue;
        }
        let (m0, m1) = weight.moments(xl, b, kappa);
        let wl = (xr * m0 - m1) / h;
        let wr = (m1 - xl * m0) / h;
        if j == centre {
            origin += wl;
        } else {
            out[j] += wl;
        }
        out[j + 1] += wr;
    }
    let sign = if weight.is_odd() { -1.0 } else { 1.0 };
    for j in 1..centre {
        out[centre - j] = sign * out[centre + j];
    }
    out[centre] = if weight.is_odd() { 0.0 } else { 2.0 * origin };
    out
}

/// Per-axis rules for one grid and exponent.
#[derive(Debug, Clone)]
pub struct VirialQuadrature {
    grid: GridSpec,
    kappa: f64,
    pub(crate) unit: Vec<f64>,
    pub(crate) singular: Vec<f64>,
    pub(crate) singular_sq: Vec<f64>,
    pub(crate) steep: Vec<f64>,
}

impl VirialQuadrature {
    pub const MAX_SPACING: f64 = 0.25;

    pub fn new(grid: &GridSpec, ws: &WeightSpec) -> Result<Self> {
        let h = grid.spacing();
        if h > Self::MAX_SPACING {
            return Err(Error::CoarseGrid { spacing: h });
        }
        if grid.half_length() <= 1.0 + h {
            return Err(Error::InvalidGrid(format!(
                "half length {} does not contain [-1,1] with a margin cell",
                grid.half_length()
            )));
        }
        let kappa = ws.kappa();
        Ok(Self {
            grid: *grid,
            kappa,
            unit: axis_weights(grid, AxisWeight::Unit, kappa),
            singular: axis_weights(grid, AxisWeight::Singular, kappa),
            singular_sq: axis_weights(grid, AxisWeight::SingularSq, kappa),
            steep: axis_weights(grid, AxisWeight::Steep, kappa),
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// `Σ g(x) · special[x_axis] · Π_{j≠axis} unit[x_j]` over the grid.
    pub(crate) fn apply(&self, special: &[f64], axis: usize, g: &[f64]) -> f64 {
        let grid = &self.grid;
        let n = grid.points();
        let strides = grid.strides();
        let support: Vec<usize> = (0..n)
            .filter(|&j| self.unit[j] != 0.0 || special[j] != 0.0)
            .collect();
        let mut total = 0.0;
        match grid.dim() {
            1 => {
                for &j in &support {
                    total += special[j] * g[j];
                }
            }
            2 => {
                for &j0 in &support {
                    for &j1 in &support {
                        let w = if axis == 0 {
                            special[j0] * self.unit[j1]
                        } else {
                            self.unit[j0] * special[j1]
                        };
                        total += w * g[j0 * strides[0] + j1];
                    }
                }
            }
            _ => {
                for &j0 in &support {
                    for &j1 in &support {
                        for &j2 in &support {
                            let idx = [j0, j1, j2];
                            let mut w = 1.0;
                            for (a, &j) in idx.iter().enumerate() {
                                w *= if a == axis { special[j] } else { self.unit[j] };
                            }
                            total += w * g[j0 * strides[0] + j1 * strides[1] + j2];
                        }
                    }
                }
            }
        }
        total
    }

    /// `∫_{[-1,1]^n} g · w_i`.
    pub fn integrate_weighted(&self, axis: usize, g: &[f64]) -> f64 {
        self.apply(&self.singular, axis, g)
    }

    /// `∫_{[-1,1]^n} g · w_i²`, assuming `g` vanishes on `x_i = 0`.
    pub fn integrate_weighted_sq(&self, axis: usize, g: &[f64]) -> f64 {
        self.apply(&self.singular_sq, axis, g)
    }

    /// `∫_{[-1,1]^n} g · |x_i|^{-κ-1}`, assuming `g` vanishes on `x_i = 0`.
    pub fn integrate_steep(&self, axis: usize, g: &[f64]) -> f64 {
        self.apply(&self.steep, axis, g)
    }

    /// `∫_{[-1,1]^n} g`.
    pub fn integrate(&self, g: &[f64]) -> f64 {
        self.apply(&self.unit, 0, g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn power_integral_branches() {
        assert!((power_integral(0.0, 2.0, 1.0) - 2.0).abs() < 1e-15);
        assert!((power_integral(1.0, 2.0, -1.0) - 2f64.ln()).abs() < 1e-15);
        assert!((power_integral(1.0, 4.0, -0.5) - 2.0).abs() < 1e-14);
        let close = power_integral(1.0, 1.0 + 1e-9, 2.0);
        assert!((close / 1e-9 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn unit_rule_integrates_linears_exactly() {
        let g = GridSpec::new(1, 64, 2.0 * PI).unwrap();
        let q = VirialQuadrature::new(&g, &WeightSpec::new(0.5).unwrap()).unwrap();
        let ones = vec![1.0; 64];
        assert!((q.integrate(&ones) - 2.0).abs() < 1e-14);
        let lin: Vec<f64> = g.nodes().iter().map(|x| 3.0 * x + 1.0).collect();
        assert!((q.integrate(&lin) - 2.0).abs() < 1e-13);
    }

    #[test]
    fn singular_rule_integrates_odd_linear_exactly() {
        // ∫_{-1}^{1} x·w(x) dx = 2(1/(2-κ) - 1/2)
        for kappa in [0.1, 0.5, 0.9] {
            let g = GridSpec::new(1, 128, 2.0 * PI).unwrap();
            let q = VirialQuadrature::new(&g, &WeightSpec::new(kappa).unwrap()).unwrap();
            let x = g.nodes();
            let want = 2.0 * (1.0 / (2.0 - kappa) - 0.5);
            let got = q.integrate_weighted(0, &x);
            // the partial cell at x = 1 reconstructs x linearly as well
            assert!((got - want).abs() < 1e-13, "kappa={kappa}: {got} vs {want}");
        }
    }

    #[test]
    fn rejects_coarse_grid() {
        let g = GridSpec::new(1, 16, 2.0 * PI).unwrap();
        assert!(matches!(
            VirialQuadrature::new(&g, &WeightSpec::new(0.5).unwrap()),
            Err(Error::CoarseGrid { .. })
        ));
    }

    #[test]
    fn steep_cells_dominate_half_squared_weight() {
        for kappa in [0.1, 0.5, 0.7, 0.95] {
            let g = GridSpec::new(1, 256, 2.0 * PI).unwrap();
            let q = VirialQuadrature::new(&g, &WeightSpec::new(kappa).unwrap()).unwrap();
            for j in 0..256 {
                assert!(
                    q.steep[j] + 1e-15 >= 0.5 * q.singular_sq[j],
                    "kappa={kappa} j={j}"
                );
            }
        }
    }
}
