//! Configuration, orchestration and output for `blowup` runs.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod plot;

pub use error::{CliError, Result};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INTERNAL: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const BLOWUP: i32 = 10;
    pub const DT_UNDERFLOW: i32 = 11;
    pub const RICCATI_DOMAIN: i32 = 12;
    pub const CONDITIONS_FAIL: i32 = 13;
    pub const PROPERTY_FAIL: i32 = 14;
}
