use super::field::{ScalarField, SpectralField, VectorField};
use super::grid::GridSpec;
use super::transform::{forward_real, inverse_real};
use crate::error::{Error, Result};
use rustfft::num_complex::Complex64;

/// Per-slot Fourier multipliers of a grid, laid out in transform order.
///
/// `deriv[a]` holds `ξ_a` with the Nyquist index zeroed, so that odd-order
/// derivatives of real fields stay real. `xi_sq` keeps the full `|ξ|²`.
#[derive(Debug, Clone)]
pub struct Multipliers {
    grid: GridSpec,
    pub(crate) deriv: Vec<Vec<f64>>,
    pub(crate) xi_sq: Vec<f64>,
    pub(crate) retained: Vec<bool>,
}

impl Multipliers {
    pub fn new(grid: &GridSpec) -> Self {
        let n = grid.points();
        let xi = grid.wavenumbers();
        let cutoff = (n / 3) as i64;
        let len = grid.len();
        let mut deriv = vec![vec![0.0; len]; grid.dim()];
        let mut xi_sq = vec![0.0; len];
        let mut retained = vec![true; len];
        for flat in 0..len {
            let idx = grid.unravel(flat);
            for a in 0..grid.dim() {
                let j = idx[a];
                let k = grid.mode_index(j);
                xi_sq[flat] += xi[j] * xi[j];
                if j != n / 2 {
                    deriv[a][flat] = xi[j];
                }
                if k.abs() > cutoff {
                    retained[flat] = false;
                }
            }
        }
        Self {
            grid: *grid,
            deriv,
            xi_sq,
            retained,
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// `|ξ|²` in transform order.
    pub fn xi_sq(&self) -> &[f64] {
        &self.xi_sq
    }

    pub(crate) fn derivative(&self, coeffs: &[Complex64], axis: usize) -> Vec<Complex64> {
        coeffs
            .iter()
            .zip(&self.deriv[axis])
            .map(|(c, &k)| Complex64::new(-k * c.im, k * c.re))
            .collect()
    }

    pub(crate) fn dealias_in_place(&self, coeffs: &mut [Complex64]) {
        for (c, &keep) in coeffs.iter_mut().zip(&self.retained) {
            if !keep {
                *c = Complex64::new(0.0, 0.0);
            }
        }
    }

    /// `Σ (1+|ξ|²)^s |F|²` with continuum-consistent weights, then square-rooted.
    pub(crate) fn sobolev_norm(&self, coeffs: &[Complex64], s: f64) -> f64 {
        let g = &self.grid;
        let n2 = (g.len() as f64).powi(2);
        let sum: f64 = coeffs
            .iter()
            .zip(&self.xi_sq)
            .map(|(c, &k2)| (1.0 + k2).powf(s) * c.norm_sqr())
            .sum();
        (sum * g.box_volume() / n2).sqrt()
    }
}

pub fn to_spectral(f: &ScalarField) -> SpectralField {
    let coeffs = forward_real(f.grid(), f.values());
    SpectralField::new(*f.grid(), coeffs).expect("transform preserves length")
}

pub fn to_physical(f: &SpectralField) -> ScalarField {
    let values = inverse_real(f.grid(), f.coeffs());
    ScalarField::new(*f.grid(), values).expect("transform preserves length")
}

pub fn gradient(u: &ScalarField) -> VectorField {
    let m = Multipliers::new(u.grid());
    gradient_with(&m, u)
}

pub(crate) fn gradient_with(m: &Multipliers, u: &ScalarField) -> VectorField {
    let g = u.grid();
    let hat = forward_real(g, u.values());
    let comps = (0..g.dim())
        .map(|a| {
            ScalarField::new(*g, inverse_real(g, &m.derivative(&hat, a)))
                .expect("transform preserves length")
        })
        .collect();
    VectorField::new(comps).expect("one component per axis")
}

pub fn laplacian(u: &ScalarField) -> ScalarField {
    let g = u.grid();
    let m = Multipliers::new(g);
    let mut hat = forward_real(g, u.values());
    for (c, &k2) in hat.iter_mut().zip(&m.xi_sq) {
        *c *= -k2;
    }
    ScalarField::new(*g, inverse_real(g, &hat)).expect("transform preserves length")
}

/// `Σ_i ∂_i v_i`, with the same Nyquist convention as [`gradient`].
pub fn divergence(v: &VectorField) -> ScalarField {
    let g = v.grid();
    let m = Multipliers::new(g);
    let mut acc = vec![Complex64::new(0.0, 0.0); g.len()];
    for (a, comp) in v.components().iter().enumerate() {
        let d = m.derivative(&forward_real(g, comp.values()), a);
        for (x, y) in acc.iter_mut().zip(d) {
            *x += y;
        }
    }
    ScalarField::new(*g, inverse_real(g, &acc)).expect("transform preserves length")
}

/// Exact heat flow `e^{tΔ}u` on the periodic box.
pub fn heat_propagate(u: &ScalarField, t: f64) -> Result<ScalarField> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    if t == 0.0 {
        return Ok(u.clone());
    }
    let g = u.grid();
    let m = Multipliers::new(g);
    let mut hat = forward_real(g, u.values());
    for (c, &k2) in hat.iter_mut().zip(&m.xi_sq) {
        *c *= (-k2 * t).exp();
    }
    Ok(ScalarField::new(*g, inverse_real(g, &hat)).expect("transform preserves length"))
}

pub fn sobolev_norm(u: &ScalarField, s: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "s",
            value: s,
            constraint: "s >= 0",
        });
    }
    let m = Multipliers::new(u.grid());
    Ok(m.sobolev_norm(&forward_real(u.grid(), u.values()), s))
}

/// 2/3 rule: zero every coefficient with some `|k_i| > N/3`.
pub fn dealias(f: &SpectralField) -> SpectralField {
    let m = Multipliers::new(f.grid());
    let mut out = f.clone();
    m.dealias_in_place(out.coeffs_mut());
    out
}

/// Pointwise product, optionally projected onto the 2/3-rule band.
pub fn product(f: &ScalarField, g: &ScalarField, dealiased: bool) -> Result<ScalarField> {
    let p = f.mul(g)?;
    if !dealiased {
        return Ok(p);
    }
    Ok(to_physical(&dealias(&to_spectral(&p))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid1(n: usize, l: f64) -> GridSpec {
        GridSpec::new(1, n, l).unwrap()
    }

    #[test]
    fn constant_has_only_zero_mode() {
        let g = GridSpec::new(2, 8, 1.0).unwrap();
        let f = ScalarField::constant(g, 3.0);
        let hat = to_spectral(&f);
        assert!((hat.coefficient(&[0, 0]).unwrap().re - 3.0 * 64.0).abs() < 1e-12);
        let rest: f64 = hat.coeffs()[1..].iter().map(|c| c.norm()).sum();
        assert!(rest < 1e-12);
    }

    #[test]
    fn cosine_modes() {
        let n = 32;
        let g = grid1(n, 3.0);
        let f = ScalarField::from_fn(g, |x| (PI * x[0] / 3.0).cos());
        let hat = to_spectral(&f);
        for k in -16..16i64 {
            let c = hat.coefficient(&[k]).unwrap();
            let want = if k.abs() == 1 { n as f64 / 2.0 } else { 0.0 };
            assert!((c.re - want).abs() < 1e-12 && c.im.abs() < 1e-12, "k={k}");
        }
        assert!(hat.is_conjugate_symmetric(1e-12));
    }

    #[test]
    fn gradient_of_cos() {
        let g = grid1(32, PI);
        let u = ScalarField::from_fn(g, |x| x[0].cos());
        let v = gradient(&u);
        for (x, d) in g.nodes().iter().zip(v.component(0).values()) {
            assert!((d + x.sin()).abs() < 1e-12);
        }
        let lap = laplacian(&u);
        for (x, d) in g.nodes().iter().zip(lap.values()) {
            assert!((d + x.cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn gradient_constant_is_zero() {
        let g = GridSpec::new(3, 8, 2.0).unwrap();
        let v = gradient(&ScalarField::constant(g, -4.0));
        assert!(v.sup_norm() < 1e-12);
        assert!(laplacian(&ScalarField::constant(g, 2.0)).max_abs() < 1e-12);
    }

    #[test]
    fn heat_single_mode() {
        let g = grid1(32, PI);
        let u = ScalarField::from_fn(g, |x| x[0].cos());
        let h = heat_propagate(&u, 1.0).unwrap();
        for (x, v) in g.nodes().iter().zip(h.values()) {
            assert!((v - (-1.0f64).exp() * x.cos()).abs() < 1e-14);
        }
        assert_eq!(heat_propagate(&u, 0.0).unwrap(), u);
        assert!(matches!(
            heat_propagate(&u, -1.0),
            Err(Error::NegativeTime(_))
        ));
    }

    #[test]
    fn sobolev_of_cos() {
        let g = grid1(64, PI);
        let u = ScalarField::from_fn(g, |x| x[0].cos());
        assert!((sobolev_norm(&u, 0.0).unwrap() - PI.sqrt()).abs() < 1e-13);
        assert!((sobolev_norm(&u, 2.0).unwrap() - (4.0 * PI).sqrt()).abs() < 1e-13);
        assert_eq!(sobolev_norm(&ScalarField::zeros(g), 3.0).unwrap(), 0.0);
        assert!(sobolev_norm(&u, -1.0).is_err());
    }

    #[test]
    fn dealias_cuts_high_modes() {
        let g = grid1(12, PI);
        let u = ScalarField::from_fn(g, |x| (4.0 * x[0]).cos() + (5.0 * x[0]).sin() + 1.0);
        let d = to_physical(&dealias(&to_spectral(&u)));
        for (x, v) in g.nodes().iter().zip(d.values()) {
            assert!((v - (4.0 * x).cos() - 1.0).abs() < 1e-12);
        }
    }
}
