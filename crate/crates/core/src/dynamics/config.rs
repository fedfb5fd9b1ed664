use crate::error::{Error, Result};
use crate::setup::WeightSpec;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Integrator {
    /// Classical RK4 on the integrating-factor variable `e^{|ξ|²t}û`.
    #[default]
    IfRk4,
    /// Second-order exponential time differencing (ETD2RK).
    Etd2,
}

impl fmt::Display for Integrator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::IfRk4 => "if-rk4",
            Self::Etd2 => "etd2",
        })
    }
}

impl FromStr for Integrator {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "if-rk4" | "ifrk4" | "rk4" => Ok(Self::IfRk4),
            "etd2" | "etd2rk" => Ok(Self::Etd2),
            other => Err(format!(
                "unknown integrator `{other}` (expected if-rk4 or etd2)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptConfig {
    /// With adaptivity off the step stays at `dt0` except when landing on
    /// output times.
    pub enabled: bool,
    pub safety: f64,
    pub growth_cap: f64,
    pub dt_min: f64,
    pub dt_max: f64,
    /// Target relative change of `‖∇u‖_∞` per step.
    pub target_change: f64,
}

impl Default for AdaptConfig {
    fn default() -> Self {
        Self {
            enabled: true,
            safety: 0.9,
            growth_cap: 2.0,
            dt_min: 1e-10,
            dt_max: 1e-2,
            target_change: 0.02,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// `Θ` for `‖u‖_{H^s}`.
    pub norm_blowup: f64,
    /// `Θ'` for `‖∇u‖_∞`.
    pub gradient_blowup: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            norm_blowup: 1e6,
            gradient_blowup: 1e5,
        }
    }
}

/// Which diagnostics are computed at each accepted step.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DiagnosticsConfig {
    /// Weight for the virial functional. Without it `I` is recorded as 0.
    pub weight: Option<WeightSpec>,
    /// Also evaluate the identity terms `A, B, I2, I3, I1_i`.
    pub breakdown: bool,
    /// Store snapshots of `u` at multiples of this interval (and at `t = 0`).
    pub snapshot_interval: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub dt0: f64,
    pub t_end: f64,
    pub integrator: Integrator,
    pub dealias: bool,
    /// Sobolev index of the recorded norm.
    pub sobolev_index: f64,
    pub adapt: AdaptConfig,
    pub thresholds: Thresholds,
    pub diagnostics: DiagnosticsConfig,
}

impl SolverConfig {
    /// Defaults for dimension `dim`, with `s = ⌊n/2⌋ + 4`.
    pub fn for_dim(dim: usize) -> Self {
        Self {
            dt0: 1e-3,
            t_end: 1.0,
            integrator: Integrator::IfRk4,
            dealias: true,
            sobolev_index: default_sobolev_index(dim),
            adapt: AdaptConfig::default(),
            thresholds: Thresholds::default(),
            diagnostics: DiagnosticsConfig::default(),
        }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        let bad = |name: &'static str, value: f64, constraint: &'static str| {
            Err(Error::InvalidParameter {
                name,
                value,
                constraint,
            })
        };
        if !(self.dt0 > 0.0 && self.dt0.is_finite()) {
            return bad("solver.dt0", self.dt0, "dt0 > 0");
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return bad("solver.t_end", self.t_end, "t_end > 0");
        }
        let a = &self.adapt;
        if !(a.dt_min > 0.0 && a.dt_min < self.dt0) {
            return bad("solver.dt_min", a.dt_min, "0 < dt_min < dt0");
        }
        if !(a.dt_max >= self.dt0) {
            return bad("solver.dt_max", a.dt_max, "dt_max >= dt0");
        }
        if !(a.safety > 0.0 && a.safety <= 1.0) {
            return bad("solver.safety", a.safety, "0 < safety <= 1");
        }
        if !(a.growth_cap >= 1.0 && a.growth_cap.is_finite()) {
            return bad("solver.growth_cap", a.growth_cap, "growth_cap >= 1");
        }
        if !(a.target_change > 0.0 && a.target_change.is_finite()) {
            return bad("solver.target_change", a.target_change, "target_change > 0");
        }
        if !(self.thresholds.norm_blowup > 1.0) {
            return bad(
                "solver.norm_blowup",
                self.thresholds.norm_blowup,
                "norm_blowup > 1",
            );
        }
        if !(self.thresholds.gradient_blowup > 1.0) {
            return bad(
                "solver.gradient_blowup",
                self.thresholds.gradient_blowup,
                "gradient_blowup > 1",
            );
        }
        if !(self.sobolev_index > dim as f64 / 2.0 + 3.0) {
            return bad("diagnostics.s", self.sobolev_index, "s > n/2 + 3");
        }
        if let Some(dt) = self.diagnostics.snapshot_interval {
            if !(dt > 0.0 && dt.is_finite()) {
                return bad("diagnostics.snapshot_interval", dt, "snapshot_interval > 0");
            }
        }
        Ok(())
    }
}

/// `⌊n/2⌋ + 4`, the smallest integer above `n/2 + 3`.
pub fn default_sobolev_index(dim: usize) -> f64 {
    (dim / 2 + 4) as f64
}
