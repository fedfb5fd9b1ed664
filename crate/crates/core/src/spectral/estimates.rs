//! Ratios that probe the heat smoothing and the Sobolev algebra property.

use super::field::ScalarField;
use super::ops::{heat_propagate, product, sobolev_norm};
use crate::error::{Error, Result};

/// `‖e^{tΔ}φ‖_{H^{s1+s2}} / ((1 + t^{-s2})‖φ‖_{H^{s1}})`.
pub fn check_smoothing_estimate(phi: &ScalarField, t: f64, s1: f64, s2: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidParameter {
            name: "t",
            value: t,
            constraint: "t > 0",
        });
    }
    if !(s2 >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "s2",
            value: s2,
            constraint: "s2 >= 0",
        });
    }
    let den = sobolev_norm(phi, s1)?;
    if den == 0.0 {
        return Err(Error::ZeroField);
    }
    let num = sobolev_norm(&heat_propagate(phi, t)?, s1 + s2)?;
    Ok(num / ((1.0 + t.powf(-s2)) * den))
}

/// `‖fg‖_{H^s} / (‖f‖_{H^s}‖g‖_{H^s})` with a dealiased product.
pub fn check_algebra(f: &ScalarField, g: &ScalarField, s: f64) -> Result<f64> {
    let half_dim = f.grid().dim() as f64 / 2.0;
    if !(s > half_dim) {
        return Err(Error::InvalidParameter {
            name: "s",
            value: s,
            constraint: "s > n/2",
        });
    }
    let nf = sobolev_norm(f, s)?;
    let ng = sobolev_norm(g, s)?;
    if nf == 0.0 || ng == 0.0 {
        return Err(Error::ZeroField);
    }
    let fg = product(f, g, true)?;
    Ok(sobolev_norm(&fg, s)? / (nf * ng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::GridSpec;
    use std::f64::consts::PI;

    #[test]
    fn single_mode_smoothing() {
        let g = GridSpec::new(1, 32, PI).unwrap();
        let phi = ScalarField::from_fn(g, |x| x[0].cos());
        let r = check_smoothing_estimate(&phi, 1.0, 0.0, 1.0).unwrap();
        assert!((r - (-1.0f64).exp() * 2f64.sqrt() / 2.0).abs() < 1e-13);
        assert!(check_smoothing_estimate(&ScalarField::zeros(g), 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn constant_algebra_ratio() {
        for dim in 1..=3 {
            let g = GridSpec::new(dim, 8, 2.0).unwrap();
            let one = ScalarField::constant(g, 1.0);
            let r = check_algebra(&one, &one, 2.0).unwrap();
            assert!((r - 4f64.powf(-(dim as f64) / 2.0)).abs() < 1e-13);
        }
    }

    #[test]
    fn cos_squared_algebra() {
        let g = GridSpec::new(1, 16, PI).unwrap();
        let f = ScalarField::from_fn(g, |x| x[0].cos());
        let r = check_algebra(&f, &f, 2.0).unwrap();
        // cos² = 1/2 + cos(2x)/2; ‖·‖² = 2π/4 + π/4·25; ‖cos‖² = 4π
        let num = (PI / 2.0 + 25.0 * PI / 4.0).sqrt();
        assert!((r - num / (4.0 * PI)).abs() < 1e-13);
    }
}
