//! Closed-form reference solutions.

use crate::dynamics::RunResult;
use crate::error::{Error, Result};
use crate::setup::CoefficientSpec;
use crate::spectral::{heat_propagate, sobolev_norm, to_spectral, ScalarField, Snapshot};

/// Maximum `‖u0‖_∞` accepted by [`cole_hopf`].
pub const EXP_GUARD: f64 = 30.0;

/// Relative size below which a coefficient counts as absent.
const MODE_TOL: f64 = 1e-10;

/// Exact heat flow of a single real Fourier mode.
pub fn heat_exact(u0: &ScalarField, t: f64) -> Result<ScalarField> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    let hat = to_spectral(u0);
    let grid = *u0.grid();
    let coeffs = hat.coeffs();
    let (peak, max) = coeffs
        .iter()
        .enumerate()
        .fold((0, 0.0f64), |(pi, pm), (i, c)| {
            if c.norm() > pm {
                (i, c.norm())
            } else {
                (pi, pm)
            }
        });
    if max == 0.0 {
        return Ok(u0.clone());
    }
    let k = hat.mode_of(peak);
    let neg: Vec<i64> = k.iter().map(|&x| -x).collect();
    let in_mode = |flat: usize| {
        let m = hat.mode_of(flat);
        m == k || m == neg
    };
    if (0..coeffs.len()).any(|f| !in_mode(f) && coeffs[f].norm() > MODE_TOL * max) {
        return Err(Error::NotSingleMode);
    }
    let xi2: f64 = k
        .iter()
        .map(|&ki| {
            let x = std::f64::consts::PI / grid.half_length() * ki as f64;
            x * x
        })
        .sum();
    Ok(u0.scale((-xi2 * t).exp()))
}

/// `log(e^{tΔ} e^{u0})`, the exact solution for `b ≡ 1`.
pub fn cole_hopf(u0: &ScalarField, t: f64) -> Result<ScalarField> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    let sup = u0.max_abs();
    if !(sup <= EXP_GUARD) {
        return Err(Error::ExpOverflow(sup));
    }
    if t == 0.0 {
        return Ok(u0.clone());
    }
    let heated = heat_propagate(&u0.map(f64::exp), t)?;
    let min = heated.min();
    if !(min > 1e-300) {
        return Err(Error::LostPositivity(min));
    }
    Ok(heated.map(f64::ln))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleKind {
    HeatMode,
    ColeHopf,
}

#[derive(Debug, Clone)]
pub struct OracleCase {
    kind: OracleKind,
    initial: ScalarField,
    horizon: f64,
}

impl OracleCase {
    /// `ColeHopf` requires the `One` flag and `HeatMode` the `Zero` flag.
    pub fn new(
        kind: OracleKind,
        initial: ScalarField,
        coefficient: &CoefficientSpec,
        horizon: f64,
    ) -> Result<Self> {
        match (kind, coefficient) {
            (OracleKind::ColeHopf, CoefficientSpec::One)
            | (OracleKind::HeatMode, CoefficientSpec::Zero) => {}
            (OracleKind::ColeHopf, _) => {
                return Err(Error::OracleMismatch(
                    "cole_hopf needs coefficient ONE".into(),
                ))
            }
            (OracleKind::HeatMode, _) => {
                return Err(Error::OracleMismatch(
                    "heat_mode needs coefficient ZERO".into(),
                ))
            }
        }
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "oracle.horizon",
                value: horizon,
                constraint: "horizon > 0",
            });
        }
        if kind == OracleKind::HeatMode {
            heat_exact(&initial, 0.0)?;
        }
        Ok(Self {
            kind,
            initial,
            horizon,
        })
    }

    pub fn kind(&self) -> OracleKind {
        self.kind
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn initial(&self) -> &ScalarField {
        &self.initial
    }

    pub fn exact_at(&self, t: f64) -> Result<ScalarField> {
        match self.kind {
            OracleKind::HeatMode => heat_exact(&self.initial, t),
            OracleKind::ColeHopf => cole_hopf(&self.initial, t),
        }
    }

    pub fn exact_snapshots(&self, times: &[f64]) -> Result<Vec<Snapshot>> {
        times
            .iter()
            .map(|&t| Ok(Snapshot::new("u", t, self.exact_at(t)?)))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleError {
    pub t: f64,
    pub linf: f64,
    pub hs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleErrorReport {
    pub samples: Vec<SampleError>,
    pub max_linf: f64,
    pub max_hs: f64,
}

/// Compares stored snapshots with the oracle up to its horizon.
pub fn oracle_error(
    case: &OracleCase,
    snapshots: &[Snapshot],
    s: f64,
) -> Result<OracleErrorReport> {
    let used: Vec<&Snapshot> = snapshots
        .iter()
        .filter(|snap| snap.time <= case.horizon * (1.0 + 1e-12))
        .collect();
    if used.is_empty() {
        return Err(Error::SamplingMismatch(
            "no snapshots within the oracle horizon".into(),
        ));
    }
    let mut samples = Vec::with_capacity(used.len());
    for snap in used {
        if snap.field.grid() != case.initial.grid() {
            return Err(Error::GridMismatch);
        }
        let diff = snap.field.sub(&case.exact_at(snap.time)?)?;
        samples.push(SampleError {
            t: snap.time,
            linf: diff.max_abs(),
            hs: sobolev_norm(&diff, s)?,
        });
    }
    let max_linf = samples.iter().map(|e| e.linf).fold(0.0, f64::max);
    let max_hs = samples.iter().map(|e| e.hs).fold(0.0, f64::max);
    Ok(OracleErrorReport {
        samples,
        max_linf,
        max_hs,
    })
}

/// [`oracle_error`] on the snapshots of a run.
pub fn oracle_error_run(case: &OracleCase, run: &RunResult, s: f64) -> Result<OracleErrorReport> {
    oracle_error(case, &run.snapshots, s)
}
