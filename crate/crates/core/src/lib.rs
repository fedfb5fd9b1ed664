//! Numerical laboratory for `∂ₜu = Δu + |∇u|²b` on a periodic box.
//!
//! The crate is organised bottom-up:
//!
//! * [`spectral`]: grids, fields, FFT-based operators, Sobolev norms.
//! * [`setup`]: coefficient and weight fields, initial data, blow-up preconditions.
//! * [`dynamics`]: exponential integrators, adaptive evolution, Picard iteration.
//! * [`virial`]: weighted virial functional, identity terms, Riccati comparison.
//! * [`oracles`]: exact heat decay and the Cole–Hopf solution for `b ≡ 1`.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod oracles;
pub mod setup;
pub mod spectral;
pub mod virial;

pub use error::{Error, Result};
