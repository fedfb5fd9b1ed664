//! Flat `section.key = value` configuration files.
//!
//! Blank lines and lines starting with `#` are ignored. Every key is
//! optional; unknown or repeated keys are rejected.

use crate::error::{CliError, Result};
use blowup_core::dynamics::{default_sobolev_index, Integrator, SolverConfig};
use blowup_core::setup::{CoefficientField, CoefficientSpec, InitialDataSpec, WeightSpec};
use blowup_core::spectral::{GridSpec, ScalarField};
use blowup_core::virial::VirialQuadrature;
use blowup_core::Error as CoreError;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

pub const KNOWN_KEYS: &[&str] = &[
    "grid.n",
    "grid.N",
    "grid.L",
    "coefficient.family",
    "coefficient.a",
    "coefficient.sigma",
    "initial.family",
    "initial.A",
    "initial.k",
    "weight.kappa",
    "solver.dt0",
    "solver.t_end",
    "solver.integrator",
    "solver.dealias",
    "solver.adapt",
    "solver.safety",
    "solver.growth_cap",
    "solver.dt_min",
    "solver.dt_max",
    "solver.target_change",
    "solver.norm_blowup",
    "solver.gradient_blowup",
    "diagnostics.s",
    "diagnostics.snapshot_interval",
    "diagnostics.fit_fraction",
    "conditions.frakC",
    "conditions.m_star",
    "output.dir",
    "seed",
    "picard.T",
    "picard.M",
    "picard.K",
    "oracle.kind",
    "oracle.horizon",
    "oracle.tol",
    "oracle.interval",
    "sweep.param",
    "sweep.values",
    "sweep.min",
    "sweep.max",
    "sweep.count",
    "sweep.workers",
];

/// Key/value pairs in file order, checked against [`KNOWN_KEYS`].
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    entries: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::config(format!("line {}", lineno + 1), "expected `key = value`")
            })?;
            let (key, value) = (key.trim(), value.trim());
            if !KNOWN_KEYS.contains(&key) {
                return Err(CliError::config(key, "unknown key"));
            }
            if entries.insert(key.to_string(), value.to_string()).is_some() {
                return Err(CliError::config(key, "key given more than once"));
            }
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        if !KNOWN_KEYS.contains(&key) {
            return Err(CliError::config(key, "unknown key"));
        }
        self.entries.insert(key.to_string(), value.into());
        Ok(())
    }

    fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        self.get(key).map_or(Ok(default), |v| parse_f64(key, v))
    }

    fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        self.get(key).map_or(Ok(default), |v| {
            v.parse()
                .map_err(|_| CliError::config(key, format!("`{v}` is not a nonnegative integer")))
        })
    }

    fn bool_or(&self, key: &str, default: bool) -> Result<bool> {
        self.get(key).map_or(Ok(default), |v| match v {
            "true" => Ok(true),
            "false" => Ok(false),
            _ => Err(CliError::config(key, format!("`{v}` is not true or false"))),
        })
    }

    fn list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.get(key)
            .map(|v| v.split(',').map(|x| parse_f64(key, x.trim())).collect())
            .transpose()
    }
}

/// Decimal number, optionally written as a multiple of pi (`pi`, `2pi`, `0.5*pi`).
pub fn parse_f64(key: &str, text: &str) -> Result<f64> {
    let bad = || CliError::config(key, format!("`{text}` is not a number"));
    let value = if let Some(head) = text.strip_suffix("pi") {
        let head = head.trim().trim_end_matches('*').trim();
        let factor = if head.is_empty() {
            1.0
        } else {
            head.parse::<f64>().map_err(|_| bad())?
        };
        factor * PI
    } else {
        text.parse::<f64>().map_err(|_| bad())?
    };
    if !value.is_finite() {
        return Err(bad());
    }
    Ok(value)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoefficientFamily {
    Builtin { a: f64, sigma: f64 },
    Zero,
    One,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleChoice {
    ColeHopf,
    HeatMode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PicardSettings {
    pub horizons: Vec<f64>,
    pub slices: usize,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSettings {
    pub kind: OracleChoice,
    pub horizon: f64,
    pub tol: f64,
    pub interval: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub dim: usize,
    pub points: usize,
    pub half_length: f64,
    pub coefficient: CoefficientFamily,
    pub initial: InitialDataSpec,
    pub kappa: f64,
    pub solver: SolverConfig,
    pub fit_fraction: f64,
    pub frak_c: f64,
    pub m_star: f64,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub picard: PicardSettings,
    pub oracle: OracleSettings,
}

/// Validated objects ready for computation.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub grid: GridSpec,
    pub coeff: CoefficientField,
    pub u0: ScalarField,
    pub weight: WeightSpec,
    pub solver: SolverConfig,
}

impl RunConfig {
    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        let dim = raw.usize_or("grid.n", 1)?;
        if !(1..=3).contains(&dim) {
            return Err(CliError::config(
                "grid.n",
                format!("dimension {dim} outside 1..=3"),
            ));
        }
        let coefficient = match raw.get("coefficient.family").unwrap_or("builtin") {
            "builtin" => CoefficientFamily::Builtin {
                a: raw.f64_or("coefficient.a", 1.0)?,
                sigma: raw.f64_or("coefficient.sigma", 1.0)?,
            },
            "zero" => CoefficientFamily::Zero,
            "one" => CoefficientFamily::One,
            other => {
                return Err(CliError::config(
                    "coefficient.family",
                    format!("unknown family `{other}` (expected builtin, zero or one)"),
                ))
            }
        };
        if !matches!(coefficient, CoefficientFamily::Builtin { .. }) {
            for key in ["coefficient.a", "coefficient.sigma"] {
                if raw.get(key).is_some() {
                    return Err(CliError::config(key, "only used by the builtin family"));
                }
            }
        }
        let amplitude = raw.f64_or("initial.A", 1.0)?;
        let initial = match raw.get("initial.family").unwrap_or("gaussian_sum") {
            "gaussian_sum" => {
                if raw.get("initial.k").is_some() {
                    return Err(CliError::config(
                        "initial.k",
                        "only used by the cosine family",
                    ));
                }
                InitialDataSpec::GaussianSum { amplitude }
            }
            "cosine" => InitialDataSpec::Cosine {
                amplitude,
                wavenumber: raw.f64_or("initial.k", 1.0)?,
            },
            other => {
                return Err(CliError::config(
                    "initial.family",
                    format!("unknown family `{other}` (expected gaussian_sum or cosine)"),
                ))
            }
        };

        let mut solver = SolverConfig::for_dim(dim);
        solver.dt0 = raw.f64_or("solver.dt0", solver.dt0)?;
        solver.t_end = raw.f64_or("solver.t_end", solver.t_end)?;
        if let Some(name) = raw.get("solver.integrator") {
            solver.integrator = name
                .parse::<Integrator>()
                .map_err(|m| CliError::config("solver.integrator", m))?;
        }
        solver.dealias = raw.bool_or("solver.dealias", solver.dealias)?;
        solver.adapt.enabled = raw.bool_or("solver.adapt", solver.adapt.enabled)?;
        solver.adapt.safety = raw.f64_or("solver.safety", solver.adapt.safety)?;
        solver.adapt.growth_cap = raw.f64_or("solver.growth_cap", solver.adapt.growth_cap)?;
        solver.adapt.dt_min = raw.f64_or("solver.dt_min", solver.adapt.dt_min)?;
        solver.adapt.dt_max = raw.f64_or("solver.dt_max", solver.adapt.dt_max)?;
        solver.adapt.target_change =
            raw.f64_or("solver.target_change", solver.adapt.target_change)?;
        solver.thresholds.norm_blowup =
            raw.f64_or("solver.norm_blowup", solver.thresholds.norm_blowup)?;
        solver.thresholds.gradient_blowup =
            raw.f64_or("solver.gradient_blowup", solver.thresholds.gradient_blowup)?;
        solver.sobolev_index = raw.f64_or("diagnostics.s", default_sobolev_index(dim))?;
        solver.diagnostics.snapshot_interval = raw
            .get("diagnostics.snapshot_interval")
            .map(|v| parse_f64("diagnostics.snapshot_interval", v))
            .transpose()?;
        solver.diagnostics.breakdown = true;

        let fit_fraction = raw.f64_or("diagnostics.fit_fraction", 0.1)?;
        if !(fit_fraction > 0.0 && fit_fraction <= 1.0) {
            return Err(CliError::config(
                "diagnostics.fit_fraction",
                "must lie in (0, 1]",
            ));
        }
        let seed = raw.get("seed").map_or(Ok(0), |v| {
            v.parse::<u64>()
                .map_err(|_| CliError::config("seed", format!("`{v}` is not a u64")))
        })?;

        let picard = PicardSettings {
            horizons: raw.list("picard.T")?.unwrap_or_else(|| vec![0.2]),
            slices: raw.usize_or("picard.M", 32)?,
            iterations: raw.usize_or("picard.K", 8)?,
        };
        if picard.horizons.iter().any(|&t| !(t > 0.0)) {
            return Err(CliError::config("picard.T", "horizons must be positive"));
        }
        if picard.slices < 8 {
            return Err(CliError::config("picard.M", "need at least 8 slices"));
        }
        if picard.iterations < 3 {
            return Err(CliError::config("picard.K", "need at least 3 iterations"));
        }

        let kind = match raw.get("oracle.kind").unwrap_or(match coefficient {
            CoefficientFamily::Zero => "heat_mode",
            _ => "cole_hopf",
        }) {
            "cole_hopf" => OracleChoice::ColeHopf,
            "heat_mode" => OracleChoice::HeatMode,
            other => {
                return Err(CliError::config(
                    "oracle.kind",
                    format!("unknown oracle `{other}` (expected cole_hopf or heat_mode)"),
                ))
            }
        };
        let oracle = OracleSettings {
            kind,
            horizon: raw.f64_or("oracle.horizon", 0.5)?,
            tol: raw.f64_or("oracle.tol", 1e-4)?,
            interval: raw.f64_or("oracle.interval", 0.05)?,
        };
        for (key, v) in [
            ("oracle.horizon", oracle.horizon),
            ("oracle.tol", oracle.tol),
            ("oracle.interval", oracle.interval),
        ] {
            if !(v > 0.0) {
                return Err(CliError::config(key, "must be positive"));
            }
        }

        let cfg = Self {
            dim,
            points: raw.usize_or("grid.N", 256)?,
            half_length: raw.f64_or("grid.L", 2.0 * PI)?,
            coefficient,
            initial,
            kappa: raw.f64_or("weight.kappa", 0.5)?,
            solver,
            fit_fraction,
            frak_c: raw.f64_or("conditions.frakC", 1e-4)?,
            m_star: raw.f64_or("conditions.m_star", 1.0)?,
            out_dir: PathBuf::from(raw.get("output.dir").unwrap_or("out")),
            seed,
            picard,
            oracle,
        };
        cfg.prepare()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_raw(&RawConfig::load(path)?)
    }

    pub fn coefficient_spec(&self) -> Result<CoefficientSpec> {
        Ok(match self.coefficient {
            CoefficientFamily::Builtin { a, sigma } => {
                CoefficientSpec::builtin(self.dim, a, sigma).map_err(config_error)?
            }
            CoefficientFamily::Zero => CoefficientSpec::Zero,
            CoefficientFamily::One => CoefficientSpec::One,
        })
    }

    /// Builds every object a command needs, mapping domain errors to the
    /// offending key.
    pub fn prepare(&self) -> Result<Prepared> {
        let grid = GridSpec::new(self.dim, self.points, self.half_length).map_err(config_error)?;
        let weight = WeightSpec::new(self.kappa).map_err(config_error)?;
        let coeff =
            CoefficientField::build(&self.coefficient_spec()?, &grid).map_err(config_error)?;
        let u0 =
            blowup_core::setup::build_initial_data(&self.initial, &grid).map_err(config_error)?;
        let mut solver = self.solver.clone();
        solver.diagnostics.weight = Some(weight);
        solver.validate(self.dim).map_err(config_error)?;
        if !(self.frak_c > 0.0) {
            return Err(CliError::config("conditions.frakC", "must be positive"));
        }
        if !(self.m_star > 0.0) {
            return Err(CliError::config("conditions.m_star", "must be positive"));
        }
        VirialQuadrature::new(&grid, &weight).map_err(config_error)?;
        Ok(Prepared {
            grid,
            coeff,
            u0,
            weight,
            solver,
        })
    }
}

/// Maps a validation failure from the core crate to the config key behind it.
pub fn config_error(e: CoreError) -> CliError {
    let key = match &e {
        CoreError::InvalidGrid(_) => "grid",
        CoreError::CoarseGrid { .. } => "grid.N",
        CoreError::InvalidKappa(_) => "weight.kappa",
        CoreError::ProfileNotLocalized { .. } => "grid.L",
        CoreError::InadmissibleProfile { .. } => "coefficient",
        CoreError::InvalidParameter { name, .. } => name,
        _ => "config",
    };
    CliError::config(key, e.to_string())
}

/// Swept parameter of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Amplitude,
    Kappa,
    CoefficientAmplitude,
}

impl SweepParam {
    pub fn key(&self) -> &'static str {
        match self {
            Self::Amplitude => "initial.A",
            Self::Kappa => "weight.kappa",
            Self::CoefficientAmplitude => "coefficient.a",
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Amplitude => "A",
            Self::Kappa => "kappa",
            Self::CoefficientAmplitude => "a",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub base: RunConfig,
    pub param: SweepParam,
    pub values: Vec<f64>,
    pub workers: usize,
    /// One validated config per value, in `values` order.
    pub runs: Vec<RunConfig>,
}

impl SweepConfig {
    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        let base = RunConfig::from_raw(raw)?;
        let param = match raw.get("sweep.param").unwrap_or("A") {
            "A" => SweepParam::Amplitude,
            "kappa" => SweepParam::Kappa,
            "a" => SweepParam::CoefficientAmplitude,
            other => {
                return Err(CliError::config(
                    "sweep.param",
                    format!("unknown parameter `{other}` (expected A, kappa or a)"),
                ))
            }
        };
        let values = match raw.list("sweep.values")? {
            Some(v) => {
                for key in ["sweep.min", "sweep.max", "sweep.count"] {
                    if raw.get(key).is_some() {
                        return Err(CliError::config(
                            key,
                            "give either sweep.values or sweep.min/max/count",
                        ));
                    }
                }
                v
            }
            None => {
                let lo = raw.f64_or("sweep.min", 0.0)?;
                let hi = raw.f64_or("sweep.max", 1.0)?;
                let count = raw.usize_or("sweep.count", 5)?;
                if count == 0 {
                    return Err(CliError::config("sweep.count", "must be positive"));
                }
                if hi < lo {
                    return Err(CliError::config("sweep.max", "must be at least sweep.min"));
                }
                if count == 1 {
                    vec![lo]
                } else {
                    (0..count)
                        .map(|k| lo + (hi - lo) * k as f64 / (count - 1) as f64)
                        .collect()
                }
            }
        };
        if values.is_empty() {
            return Err(CliError::config("sweep.values", "empty list"));
        }
        let mut runs = Vec::with_capacity(values.len());
        for &v in &values {
            let mut r = raw.clone();
            r.set(param.key(), format!("{v:e}"))?;
            let cfg = RunConfig::from_raw(&r).map_err(|e| match e {
                CliError::Config { key, message } => CliError::config(
                    "sweep.values",
                    format!("{} = {v}: {key}: {message}", param.name()),
                ),
                other => other,
            })?;
            runs.push(cfg);
        }
        Ok(Self {
            base,
            param,
            values,
            workers: raw.usize_or("sweep.workers", 0)?,
            runs,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_raw(&RawConfig::load(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        let cfg = RunConfig::from_raw(&RawConfig::parse("").unwrap()).unwrap();
        assert_eq!(cfg.points, 256);
        assert_eq!(cfg.solver.sobolev_index, 4.0);
        assert_eq!(cfg.kappa, 0.5);
    }

    #[test]
    fn unknown_and_repeated_keys() {
        match RawConfig::parse("grid.N = 64\nsolver.bogus = 1\n") {
            Err(CliError::Config { key, .. }) => assert_eq!(key, "solver.bogus"),
            other => panic!("{other:?}"),
        }
        assert!(RawConfig::parse("grid.N = 64\ngrid.N = 32").is_err());
        assert!(RawConfig::parse("grid.N 64").is_err());
    }

    #[test]
    fn kappa_error_cites_constraint() {
        let raw = RawConfig::parse("weight.kappa = 1.5").unwrap();
        let err = RunConfig::from_raw(&raw).unwrap_err();
        assert!(err.to_string().contains("weight.kappa"), "{err}");
        assert!(err.to_string().contains("κ ∈ (0,1)"), "{err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn pi_multiples() {
        assert_eq!(parse_f64("k", "pi").unwrap(), PI);
        assert_eq!(parse_f64("k", "2pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_f64("k", "0.5*pi").unwrap(), 0.5 * PI);
        assert!(parse_f64("k", "two").is_err());
        assert!(parse_f64("k", "inf").is_err());
    }

    #[test]
    fn sweep_ranges() {
        let raw = RawConfig::parse("sweep.min = 1\nsweep.max = 3\nsweep.count = 3").unwrap();
        let s = SweepConfig::from_raw(&raw).unwrap();
        assert_eq!(s.values, vec![1.0, 2.0, 3.0]);
        assert_eq!(s.runs[2].initial.amplitude(), 3.0);
        let bad = RawConfig::parse("sweep.param = kappa\nsweep.values = 0.5, 1.2").unwrap();
        assert!(SweepConfig::from_raw(&bad).is_err());
    }
}
