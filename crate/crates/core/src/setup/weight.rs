use crate::error::{Error, Result};
use crate::spectral::{GridSpec, ScalarField, VectorField};

/// Exponent of the singular weight, `0 < κ < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightSpec {
    kappa: f64,
}

impl WeightSpec {
    pub fn new(kappa: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa < 1.0) {
            return Err(Error::InvalidKappa(kappa));
        }
        Ok(Self { kappa })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// `sign(x)(|x|^{-κ} - 1)` on `(-1, 1)`, zero elsewhere and at `x = 0`.
    pub fn component(&self, x: f64) -> f64 {
        if x == 0.0 || x.abs() >= 1.0 {
            return 0.0;
        }
        x.signum() * (x.abs().powf(-self.kappa) - 1.0)
    }
}

/// Component `i` is `w(x_i)`, independent of the other coordinates.
pub fn build_weight(ws: &WeightSpec, grid: &GridSpec) -> Result<VectorField> {
    let line: Vec<f64> = grid.nodes().iter().map(|&x| ws.component(x)).collect();
    let comps = (0..grid.dim())
        .map(|axis| {
            let values = (0..grid.len())
                .map(|flat| line[grid.unravel(flat)[axis]])
                .collect();
            ScalarField::new(*grid, values)
        })
        .collect::<Result<Vec<_>>>()?;
    VectorField::new(comps)
}

/// `∫_{-1}^{1} |w(x)| dx = 2κ/(1-κ)`.
pub fn weight_l1_norm(kappa: f64) -> Result<f64> {
    let ws = WeightSpec::new(kappa)?;
    Ok(2.0 * ws.kappa / (1.0 - ws.kappa))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pointwise_values() {
        let ws = WeightSpec::new(0.5).unwrap();
        assert_eq!(ws.component(0.25), 1.0);
        assert_eq!(ws.component(-0.25), -1.0);
        assert_eq!(ws.component(1.5), 0.0);
        assert_eq!(ws.component(0.0), 0.0);
    }

    #[test]
    fn rejects_kappa_outside_unit_interval() {
        for k in [0.0, 1.0, -0.3, 1.5, f64::NAN] {
            assert!(matches!(WeightSpec::new(k), Err(Error::InvalidKappa(_))));
            assert!(weight_l1_norm(k).is_err());
        }
    }

    #[test]
    fn l1_norm_values() {
        assert_eq!(weight_l1_norm(0.5).unwrap(), 2.0);
        assert!((weight_l1_norm(0.9).unwrap() - 18.0).abs() < 1e-12);
        // 2κ/(1-κ) → 0 as κ → 0; at κ = 5e-4 it is 1e-3/0.9995
        assert!((weight_l1_norm(5e-4).unwrap() - 1e-3 / 0.9995).abs() < 1e-18);
        assert!(weight_l1_norm(1e-8).unwrap() < 3e-8);
    }

    #[test]
    fn odd_on_symmetric_grid() {
        let g = GridSpec::new(2, 32, 2.0).unwrap();
        let w = build_weight(&WeightSpec::new(0.3).unwrap(), &g).unwrap();
        let n = g.points();
        for axis in 0..2 {
            let c = w.component(axis).values();
            for flat in 0..g.len() {
                let idx = g.unravel(flat);
                let mirrored: usize = (0..2)
                    .map(|a| {
                        let j = if a == axis { (n - idx[a]) % n } else { idx[a] };
                        j * g.strides()[a]
                    })
                    .sum();
                assert_eq!(c[flat], -c[mirrored]);
            }
        }
    }
}
