//! Coefficient, weight and initial-data constructors, plus blow-up preconditions.

mod coefficient;
mod conditions;
mod initial;
mod weight;

pub use coefficient::{
    build_coefficient, AxisProfile, CoefficientField, CoefficientProfile, CoefficientSpec,
};
pub use conditions::{check_blowup_conditions, ConditionsReport};
pub use initial::{build_initial_data, InitialDataSpec};
pub use weight::{build_weight, weight_l1_norm, WeightSpec};
