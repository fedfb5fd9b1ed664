use crate::error::{Error, Result};
use crate::spectral::{GridSpec, ScalarField};
use std::fmt;
use std::sync::Arc;

/// A one-dimensional factor `b_i` of the product coefficient.
///
/// Implementations must be nonnegative, vanish at the origin and be
/// non-constant; [`CoefficientProfile::validate`] checks this on a grid.
pub trait AxisProfile: Send + Sync {
    fn value(&self, x: f64) -> f64;
    fn derivative(&self, x: f64) -> f64;
    fn name(&self) -> &str {
        "custom"
    }
}

/// One axis factor of the coefficient.
#[derive(Clone)]
pub enum CoefficientProfile {
    /// `a·x²·exp(-x²/σ²)`.
    QuadraticGaussian {
        amplitude: f64,
        width: f64,
    },
    Custom(Arc<dyn AxisProfile>),
}

impl fmt::Debug for CoefficientProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::QuadraticGaussian { amplitude, width } => f
                .debug_struct("QuadraticGaussian")
                .field("amplitude", amplitude)
                .field("width", width)
                .finish(),
            Self::Custom(p) => write!(f, "Custom({})", p.name()),
        }
    }
}

impl CoefficientProfile {
    pub fn quadratic_gaussian(amplitude: f64, width: f64) -> Result<Self> {
        if !(amplitude > 0.0 && amplitude.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "coefficient.a",
                value: amplitude,
                constraint: "a > 0",
            });
        }
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "coefficient.sigma",
                value: width,
                constraint: "sigma > 0",
            });
        }
        Ok(Self::QuadraticGaussian { amplitude, width })
    }

    pub fn value(&self, x: f64) -> f64 {
        match self {
            Self::QuadraticGaussian { amplitude, width } => {
                amplitude * x * x * (-(x * x) / (width * width)).exp()
            }
            Self::Custom(p) => p.value(x),
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match self {
            Self::QuadraticGaussian { amplitude, width } => {
                let s2 = width * width;
                amplitude * 2.0 * x * (1.0 - x * x / s2) * (-(x * x) / s2).exp()
            }
            Self::Custom(p) => p.derivative(x),
        }
    }

    /// Checks the admissibility conditions on the grid nodes of one axis.
    pub fn validate(&self, axis: usize, grid: &GridSpec) -> Result<()> {
        let bad = |reason: String| Error::InadmissibleProfile { axis, reason };
        if let Self::QuadraticGaussian { amplitude, width } = *self {
            Self::quadratic_gaussian(amplitude, width)?;
        }
        let v0 = self.value(0.0);
        if v0 != 0.0 {
            return Err(bad(format!("value at 0 is {v0}, must vanish")));
        }
        let samples: Vec<f64> = grid.nodes().iter().map(|&x| self.value(x)).collect();
        if let Some(v) = samples.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(bad(format!("sample {v} is negative or non-finite")));
        }
        let max = samples.iter().fold(0.0f64, |m, v| m.max(*v));
        if max == 0.0 {
            return Err(bad("profile is identically zero on the grid".into()));
        }
        let l = grid.half_length();
        let edge = self.value(l).abs().max(self.value(-l).abs());
        let ratio = edge / max;
        if ratio >= 1e-12 {
            return Err(Error::ProfileNotLocalized { ratio });
        }
        Ok(())
    }
}

/// Product coefficient, or one of the two constant flags used by oracles.
#[derive(Debug, Clone)]
pub enum CoefficientSpec {
    Product(Vec<CoefficientProfile>),
    /// `b ≡ 0`: linear heat flow. Not an admissible blow-up coefficient.
    Zero,
    /// `b ≡ 1`: Cole–Hopf case. Not an admissible blow-up coefficient.
    One,
}

impl CoefficientSpec {
    /// Same builtin profile on every axis.
    pub fn builtin(dim: usize, amplitude: f64, width: f64) -> Result<Self> {
        let p = CoefficientProfile::quadratic_gaussian(amplitude, width)?;
        Ok(Self::Product(vec![p; dim]))
    }

    pub fn is_compliant(&self) -> bool {
        matches!(self, Self::Product(_))
    }
}

/// Sampled coefficient together with its per-axis factors.
#[derive(Debug, Clone)]
pub struct CoefficientField {
    field: ScalarField,
    spec: CoefficientSpec,
    axis_values: Vec<Vec<f64>>,
    axis_derivatives: Vec<Vec<f64>>,
}

impl CoefficientField {
    pub fn build(spec: &CoefficientSpec, grid: &GridSpec) -> Result<Self> {
        let nodes = grid.nodes();
        let (axis_values, axis_derivatives): (Vec<Vec<f64>>, Vec<Vec<f64>>) = match spec {
            CoefficientSpec::Product(profiles) => {
                if profiles.len() != grid.dim() {
                    return Err(Error::InvalidGrid(format!(
                        "{} coefficient profiles for a {}-dimensional grid",
                        profiles.len(),
                        grid.dim()
                    )));
                }
                for (axis, p) in profiles.iter().enumerate() {
                    p.validate(axis, grid)?;
                }
                profiles
                    .iter()
                    .map(|p| {
                        (
                            nodes.iter().map(|&x| p.value(x)).collect(),
                            nodes.iter().map(|&x| p.derivative(x)).collect(),
                        )
                    })
                    .unzip()
            }
            CoefficientSpec::Zero => (
                vec![vec![0.0; nodes.len()]; grid.dim()],
                vec![vec![0.0; nodes.len()]; grid.dim()],
            ),
            CoefficientSpec::One => (
                vec![vec![1.0; nodes.len()]; grid.dim()],
                vec![vec![0.0; nodes.len()]; grid.dim()],
            ),
        };
        let values = (0..grid.len())
            .map(|flat| {
                let idx = grid.unravel(flat);
                (0..grid.dim()).map(|a| axis_values[a][idx[a]]).product()
            })
            .collect();
        Ok(Self {
            field: ScalarField::new(*grid, values)?,
            spec: spec.clone(),
            axis_values,
            axis_derivatives,
        })
    }

    pub fn field(&self) -> &ScalarField {
        &self.field
    }

    pub fn grid(&self) -> &GridSpec {
        self.field.grid()
    }

    pub fn spec(&self) -> &CoefficientSpec {
        &self.spec
    }

    pub fn is_compliant(&self) -> bool {
        self.spec.is_compliant()
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.spec, CoefficientSpec::Zero)
    }

    /// `b_i` sampled at the nodes of axis `i`.
    pub fn axis_values(&self, axis: usize) -> &[f64] {
        &self.axis_values[axis]
    }

    /// `b_i'` sampled at the nodes of axis `i`.
    pub fn axis_derivatives(&self, axis: usize) -> &[f64] {
        &self.axis_derivatives[axis]
    }
}

/// Samples `∏ b_i(x_i)` on the grid.
pub fn build_coefficient(spec: &CoefficientSpec, grid: &GridSpec) -> Result<ScalarField> {
    Ok(CoefficientField::build(spec, grid)?.field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn builtin_values() {
        let g = GridSpec::new(1, 64, 2.0 * PI).unwrap();
        let p = CoefficientProfile::quadratic_gaussian(1.0, 1.0).unwrap();
        assert!((p.value(1.0) - (-1.0f64).exp()).abs() < 1e-15);
        let b = build_coefficient(&CoefficientSpec::builtin(1, 1.0, 1.0).unwrap(), &g).unwrap();
        assert!(b.min() >= 0.0);
        assert_eq!(b.values()[32], 0.0);
    }

    #[test]
    fn product_at_one_one() {
        // N = 32 on [-8, 8): h = 0.5, node 18 is x = 1
        let g = GridSpec::new(2, 32, 8.0).unwrap();
        let cf = CoefficientField::build(&CoefficientSpec::builtin(2, 1.0, 1.0).unwrap(), &g);
        let b = cf.unwrap();
        let flat = 18 * 32 + 18;
        assert!((b.field().values()[flat] - (-2.0f64).exp()).abs() < 1e-15);
        for j in 0..32 {
            assert_eq!(b.field().values()[16 * 32 + j], 0.0);
            assert_eq!(b.field().values()[j * 32 + 16], 0.0);
        }
    }

    #[test]
    fn derivative_matches_difference() {
        let p = CoefficientProfile::quadratic_gaussian(2.0, 0.7).unwrap();
        for x in [-1.3, -0.2, 0.0, 0.4, 1.1] {
            let h = 1e-5;
            let fd = (p.value(x + h) - p.value(x - h)) / (2.0 * h);
            assert!((fd - p.derivative(x)).abs() < 1e-8);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(CoefficientProfile::quadratic_gaussian(0.0, 1.0).is_err());
        assert!(CoefficientProfile::quadratic_gaussian(1.0, -1.0).is_err());
        let g = GridSpec::new(1, 64, 2.0).unwrap();
        let wide = CoefficientSpec::builtin(1, 1.0, 1.0).unwrap();
        assert!(matches!(
            CoefficientField::build(&wide, &g),
            Err(Error::ProfileNotLocalized { .. })
        ));
    }

    struct Shifted;
    impl AxisProfile for Shifted {
        fn value(&self, x: f64) -> f64 {
            (x - 0.5) * (x - 0.5) * (-x * x).exp()
        }
        fn derivative(&self, _x: f64) -> f64 {
            0.0
        }
    }

    #[test]
    fn custom_profile_must_vanish_at_origin() {
        let g = GridSpec::new(1, 64, 2.0 * PI).unwrap();
        let spec = CoefficientSpec::Product(vec![CoefficientProfile::Custom(Arc::new(Shifted))]);
        assert!(matches!(
            CoefficientField::build(&spec, &g),
            Err(Error::InadmissibleProfile { axis: 0, .. })
        ));
    }
}
