use super::config::SolverConfig;
use super::stepper::{CoefficientSource, Stepper};
use crate::error::{Error, Result};
use crate::setup::CoefficientField;
use crate::spectral::{
    forward_real, inverse_real, Multipliers, ScalarField, Snapshot, VectorField,
};
use crate::virial::{VirialBreakdown, VirialEvaluator};
use rustfft::num_complex::Complex64;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Completed,
    BlowupDetected,
    DtUnderflow,
    Diverged,
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Completed => "completed",
            Self::BlowupDetected => "blowup_detected",
            Self::DtUnderflow => "dt_underflow",
            Self::Diverged => "diverged",
        })
    }
}

/// What triggered a blow-up detection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetectionReason {
    NormThreshold,
    GradientThreshold,
    /// `dt` fell below `dt_min` while `‖∇u‖_∞` kept rising.
    DtCollapse,
}

impl fmt::Display for DetectionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::NormThreshold => "norm_threshold",
            Self::GradientThreshold => "gradient_threshold",
            Self::DtCollapse => "dt_collapse",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub t: f64,
    pub i: f64,
    pub hs_norm: f64,
    pub grad_sup: f64,
    /// Step that produced this sample; 0 for the initial record.
    pub dt: f64,
    pub tail_mass: f64,
    pub terms: Option<VirialBreakdown>,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub status: RunStatus,
    pub reason: Option<DetectionReason>,
    pub t_final: f64,
    pub samples: Vec<TrajectoryRecord>,
    pub snapshots: Vec<Snapshot>,
    /// Last finite state.
    pub final_field: ScalarField,
    /// Smallest step proposed by the controller.
    pub dt_smallest: f64,
}

impl RunResult {
    pub fn steps(&self) -> usize {
        self.samples.len().saturating_sub(1)
    }
}

/// Steps of monotone gradient growth required to call a `dt` collapse blow-up.
const COLLAPSE_WINDOW: usize = 10;

struct Diagnostics<'a> {
    mult: Multipliers,
    virial: Option<VirialEvaluator>,
    coeff: Option<&'a CoefficientField>,
    s: f64,
}

impl Diagnostics<'_> {
    fn record(
        &self,
        u_hat: &[Complex64],
        u: &ScalarField,
        b: &ScalarField,
        t: f64,
        dt: f64,
    ) -> Result<TrajectoryRecord> {
        let grid = u.grid();
        let comps = (0..grid.dim())
            .map(|a| ScalarField::new(*grid, inverse_real(grid, &self.mult.derivative(u_hat, a))))
            .collect::<Result<Vec<_>>>()?;
        let v = VectorField::new(comps)?;
        let (i, terms) = match (&self.virial, self.coeff) {
            (Some(ev), Some(cf)) => {
                let bd = ev.breakdown(&v, cf)?;
                (bd.i, Some(bd))
            }
            (Some(ev), None) => (ev.virial(&v, b)?, None),
            _ => (0.0, None),
        };
        Ok(TrajectoryRecord {
            t,
            i,
            hs_norm: self.mult.sobolev_norm(u_hat, self.s),
            grad_sup: v.sup_norm(),
            dt,
            tail_mass: tail_mass(u),
            terms,
        })
    }
}

/// Fraction of `∫|u|` carried within `L/8` of the box boundary.
pub fn tail_mass(u: &ScalarField) -> f64 {
    let g = u.grid();
    let edge = g.half_length() - g.half_length() / 8.0;
    let nodes = g.nodes();
    let near: Vec<bool> = nodes.iter().map(|x| x.abs() > edge).collect();
    let (mut tail, mut total) = (0.0, 0.0);
    for (flat, v) in u.values().iter().enumerate() {
        let idx = g.unravel(flat);
        let a = v.abs();
        total += a;
        if (0..g.dim()).any(|k| near[idx[k]]) {
            tail += a;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        tail / total
    }
}

/// Integrates with a fixed coefficient, recording virial diagnostics.
pub fn evolve(u0: &ScalarField, coeff: &CoefficientField, cfg: &SolverConfig) -> Result<RunResult> {
    run(u0, coeff.field(), Some(coeff), cfg)
}

/// Integrates with a plain coefficient field (no identity terms).
pub fn evolve_field(u0: &ScalarField, b: &ScalarField, cfg: &SolverConfig) -> Result<RunResult> {
    run(u0, b, None, cfg)
}

/// Integrates with a time-dependent coefficient. Virial diagnostics use the
/// coefficient sampled at each record time.
pub fn evolve_with_source(
    u0: &ScalarField,
    source: &dyn CoefficientSource,
    cfg: &SolverConfig,
) -> Result<RunResult> {
    run_inner(u0, source, None, cfg)
}

fn run(
    u0: &ScalarField,
    b: &ScalarField,
    coeff: Option<&CoefficientField>,
    cfg: &SolverConfig,
) -> Result<RunResult> {
    if u0.grid() != b.grid() {
        return Err(Error::GridMismatch);
    }
    run_inner(u0, b, coeff, cfg)
}

fn run_inner(
    u0: &ScalarField,
    source: &dyn CoefficientSource,
    coeff: Option<&CoefficientField>,
    cfg: &SolverConfig,
) -> Result<RunResult> {
    let grid = *u0.grid();
    cfg.validate(grid.dim())?;
    if !u0.is_finite() {
        return Err(Error::InvalidParameter {
            name: "u0",
            value: f64::NAN,
            constraint: "finite samples",
        });
    }
    let mult = Multipliers::new(&grid);
    let virial = match cfg.diagnostics.weight {
        Some(ws) => Some(VirialEvaluator::new(&grid, &ws, cfg.dealias)?),
        None => None,
    };
    let diag = Diagnostics {
        mult: mult.clone(),
        virial,
        coeff: if cfg.diagnostics.breakdown {
            coeff
        } else {
            None
        },
        s: cfg.sobolev_index,
    };
    let mut stepper = Stepper::new(mult, cfg.integrator, cfg.dealias);

    let mut t = 0.0;
    let mut u_hat = forward_real(&grid, u0.values());
    let mut u = u0.clone();
    let mut samples = vec![diag.record(&u_hat, &u, &source.sample(0.0), 0.0, 0.0)?];
    let mut snapshots = Vec::new();
    let snap_dt = cfg.diagnostics.snapshot_interval;
    let mut next_snap_k = 1usize;
    if snap_dt.is_some() {
        snapshots.push(Snapshot::new("u", 0.0, u.clone()));
    }
    let mut dt = cfg.dt0.min(cfg.adapt.dt_max);
    let mut dt_smallest = dt;

    let finish = |status, reason, t, samples, snapshots, u, dt_smallest| RunResult {
        status,
        reason,
        t_final: t,
        samples,
        snapshots,
        final_field: u,
        dt_smallest,
    };

    loop {
        let next_snap = snap_dt
            .map(|s| next_snap_k as f64 * s)
            .filter(|&ts| ts < cfg.t_end);
        let stop = next_snap.unwrap_or(cfg.t_end).min(cfg.t_end);
        let landing = t + dt >= stop - 1e-12 * stop.max(1.0);
        let dt_used = if landing { stop - t } else { dt };

        let new_hat = match stepper.step(&u_hat, t, dt_used, source) {
            Ok(h) => h,
            Err(Error::Diverged { .. }) => {
                return Ok(finish(
                    RunStatus::Diverged,
                    None,
                    t,
                    samples,
                    snapshots,
                    u,
                    dt_smallest,
                ));
            }
            Err(e) => return Err(e),
        };
        let t_new = if landing { stop } else { t + dt_used };
        let u_new = ScalarField::new(grid, inverse_real(&grid, &new_hat))?;
        if !u_new.is_finite() {
            return Ok(finish(
                RunStatus::Diverged,
                None,
                t,
                samples,
                snapshots,
                u,
                dt_smallest,
            ));
        }
        let rec = diag.record(&new_hat, &u_new, &source.sample(t_new), t_new, dt_used)?;
        let prev_grad = samples.last().map(|r| r.grad_sup).unwrap_or(0.0);
        let grad = rec.grad_sup;
        let hs = rec.hs_norm;
        if !(hs.is_finite() && grad.is_finite()) {
            return Ok(finish(
                RunStatus::Diverged,
                None,
                t,
                samples,
                snapshots,
                u,
                dt_smallest,
            ));
        }
        t = t_new;
        u_hat = new_hat;
        u = u_new;
        samples.push(rec);
        if let Some(ts) = next_snap {
            if landing && t == ts {
                snapshots.push(Snapshot::new("u", t, u.clone()));
                next_snap_k += 1;
            }
        }

        if hs > cfg.thresholds.norm_blowup {
            return Ok(finish(
                RunStatus::BlowupDetected,
                Some(DetectionReason::NormThreshold),
                t,
                samples,
                snapshots,
                u,
                dt_smallest,
            ));
        }
        if grad > cfg.thresholds.gradient_blowup {
            return Ok(finish(
                RunStatus::BlowupDetected,
                Some(DetectionReason::GradientThreshold),
                t,
                samples,
                snapshots,
                u,
                dt_smallest,
            ));
        }
        if t >= cfg.t_end {
            if snap_dt.is_some() && snapshots.last().map(|s| s.time) != Some(t) {
                snapshots.push(Snapshot::new("u", t, u.clone()));
            }
            return Ok(finish(
                RunStatus::Completed,
                None,
                t,
                samples,
                snapshots,
                u,
                dt_smallest,
            ));
        }

        if cfg.adapt.enabled {
            let base = if landing { dt.max(dt_used) } else { dt_used };
            let change = if prev_grad > 0.0 {
                (grad - prev_grad).abs() / prev_grad
            } else {
                0.0
            };
            let factor = if change > 0.0 {
                (cfg.adapt.safety * cfg.adapt.target_change / change)
                    .clamp(0.5, cfg.adapt.growth_cap)
            } else {
                cfg.adapt.growth_cap
            };
            dt = (base * factor).min(cfg.adapt.dt_max);
            dt_smallest = dt_smallest.min(dt);
            if dt < cfg.adapt.dt_min {
                let rising = samples.len() > COLLAPSE_WINDOW
                    && samples[samples.len() - COLLAPSE_WINDOW - 1..]
                        .windows(2)
                        .all(|w| w[1].grad_sup > w[0].grad_sup);
                let (status, reason) = if rising {
                    (RunStatus::BlowupDetected, Some(DetectionReason::DtCollapse))
                } else {
                    (RunStatus::DtUnderflow, None)
                };
                return Ok(finish(
                    status,
                    reason,
                    t,
                    samples,
                    snapshots,
                    u,
                    dt_smallest,
                ));
            }
        }
    }
}
