use crate::error::{Error, Result};
use crate::spectral::{GridSpec, ScalarField};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialDataSpec {
    /// `-(A/2)·Σ_i exp(-x_i²)`.
    GaussianSum { amplitude: f64 },
    /// `A·Σ_i cos(ξ x_i)`; `ξ` must be a multiple of `π/L`.
    Cosine { amplitude: f64, wavenumber: f64 },
}

impl InitialDataSpec {
    pub fn amplitude(&self) -> f64 {
        match *self {
            Self::GaussianSum { amplitude } | Self::Cosine { amplitude, .. } => amplitude,
        }
    }

    pub fn with_amplitude(self, amplitude: f64) -> Self {
        match self {
            Self::GaussianSum { .. } => Self::GaussianSum { amplitude },
            Self::Cosine { wavenumber, .. } => Self::Cosine {
                amplitude,
                wavenumber,
            },
        }
    }
}

pub fn build_initial_data(spec: &InitialDataSpec, grid: &GridSpec) -> Result<ScalarField> {
    if !spec.amplitude().is_finite() {
        return Err(Error::InvalidParameter {
            name: "initial.A",
            value: spec.amplitude(),
            constraint: "A finite",
        });
    }
    match *spec {
        InitialDataSpec::GaussianSum { amplitude } => Ok(ScalarField::from_fn(*grid, |x| {
            -0.5 * amplitude * x.iter().map(|xi| (-xi * xi).exp()).sum::<f64>()
        })),
        InitialDataSpec::Cosine {
            amplitude,
            wavenumber,
        } => {
            let k = wavenumber * grid.half_length() / PI;
            if !wavenumber.is_finite() || (k - k.round()).abs() > 1e-9 {
                return Err(Error::InvalidParameter {
                    name: "initial.k",
                    value: wavenumber,
                    constraint: "wavenumber is an integer multiple of pi/L",
                });
            }
            if k.round().abs() >= (grid.points() / 2) as f64 {
                return Err(Error::InvalidParameter {
                    name: "initial.k",
                    value: wavenumber,
                    constraint: "wavenumber below the Nyquist limit",
                });
            }
            Ok(ScalarField::from_fn(*grid, |x| {
                amplitude * x.iter().map(|xi| (wavenumber * xi).cos()).sum::<f64>()
            }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_sum_values() {
        let g = GridSpec::new(1, 64, 2.0 * PI).unwrap();
        let zero =
            build_initial_data(&InitialDataSpec::GaussianSum { amplitude: 0.0 }, &g).unwrap();
        assert_eq!(zero.max_abs(), 0.0);
        let u = build_initial_data(&InitialDataSpec::GaussianSum { amplitude: 1.0 }, &g).unwrap();
        assert_eq!(u.values()[32], -0.5);
    }

    #[test]
    fn cosine_wavenumber_checked() {
        let g = GridSpec::new(1, 64, 2.0 * PI).unwrap();
        let ok = InitialDataSpec::Cosine {
            amplitude: 0.1,
            wavenumber: 1.0,
        };
        assert!(build_initial_data(&ok, &g).is_ok());
        let bad = InitialDataSpec::Cosine {
            amplitude: 0.1,
            wavenumber: 0.3,
        };
        assert!(build_initial_data(&bad, &g).is_err());
    }
}
