//! Virial functional, its identity terms, and the Riccati comparison.

mod functional;
mod quadrature;
mod riccati;

pub use functional::{check_identity, identity_terms, virial_i, VirialBreakdown, VirialEvaluator};
pub use quadrature::VirialQuadrature;
pub use riccati::{
    blowup_time, comparison_check, fit_c2, riccati_c1, riccati_j, ComparisonVerdict, RiccatiParams,
    Violation, COMPARISON_TOL,
};
