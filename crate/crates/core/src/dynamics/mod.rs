//! Time integration, blow-up detection and the Picard construction.

mod config;
mod evolve;
mod picard;
mod stepper;

pub use config::{
    default_sobolev_index, AdaptConfig, DiagnosticsConfig, Integrator, SolverConfig, Thresholds,
};
pub use evolve::{
    evolve, evolve_field, evolve_with_source, tail_mass, DetectionReason, RunResult, RunStatus,
    TrajectoryRecord,
};
pub use picard::{
    duhamel_gain, fit_time_shape, picard_iterate, PicardConfig, PicardReport, ShapeFit,
};
pub use stepper::{nonlinear_term, step, CoefficientSource, TimeSliced};
