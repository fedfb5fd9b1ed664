//! Periodic-box discretization and Fourier-side operators.

mod estimates;
mod field;
mod grid;
mod ops;
mod snapshot;
mod transform;

pub use estimates::{check_algebra, check_smoothing_estimate};
pub use field::{ScalarField, SpectralField, VectorField};
pub use grid::GridSpec;
pub use ops::{
    dealias, divergence, gradient, heat_propagate, laplacian, product, sobolev_norm, to_physical,
    to_spectral, Multipliers,
};
pub use snapshot::Snapshot;

pub(crate) use ops::gradient_with;
pub(crate) use transform::{forward_real, inverse_real};
