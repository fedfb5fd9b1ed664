//! Closed-form solution of `J' = c1 J² - c2` and its comparison with `I(t)`.

use crate::dynamics::TrajectoryRecord;
use crate::error::{Error, Result};

/// Below this, `c2` is treated as zero in [`blowup_time`].
const C2_FLOOR: f64 = 1e-300;
/// Relative size below which the closed-form denominator counts as zero.
const DENOM_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiccatiParams {
    pub c1: f64,
    pub c2: f64,
    pub i0: f64,
}

impl RiccatiParams {
    pub fn new(c1: f64, c2: f64, i0: f64) -> Result<Self> {
        if !(c1 > 0.0 && c1.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "c1",
                value: c1,
                constraint: "c1 > 0",
            });
        }
        if !(c2 >= 0.0 && c2.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "c2",
                value: c2,
                constraint: "c2 >= 0",
            });
        }
        if !i0.is_finite() {
            return Err(Error::InvalidParameter {
                name: "I0",
                value: i0,
                constraint: "I0 finite",
            });
        }
        Ok(Self { c1, c2, i0 })
    }

    /// `I0·√c1 - √c2`; positive exactly when `J` blows up.
    pub fn margin(&self) -> f64 {
        self.i0 * self.c1.sqrt() - self.c2.sqrt()
    }
}

/// `κ / 2^{n+1}`.
pub fn riccati_c1(dim: usize, kappa: f64) -> Result<f64> {
    if dim == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            value: 0.0,
            constraint: "n >= 1",
        });
    }
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(Error::InvalidKappa(kappa));
    }
    Ok(kappa / 2f64.powi(dim as i32 + 1))
}

/// Finite blow-up time of `J`, or a domain error carrying the margin.
pub fn blowup_time(p: &RiccatiParams) -> Result<f64> {
    let margin = p.margin();
    if !(margin > 0.0) {
        return Err(Error::RiccatiDomain { margin });
    }
    if p.c2 < C2_FLOOR {
        return Ok(1.0 / (p.c1 * p.i0));
    }
    // (1/(2k))·ln((1+ε)/(1-ε)) = atanh(ε)/k with k = √(c1c2)
    let eps = p.c2.sqrt() / (p.i0 * p.c1.sqrt());
    Ok(eps.atanh() / (p.c1 * p.c2).sqrt())
}

/// `J(t)` for `0 ≤ t < t*`.
pub fn riccati_j(p: &RiccatiParams, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    let t_star = blowup_time(p).ok();
    if let Some(ts) = t_star {
        if t >= ts {
            return Err(Error::RiccatiSingular {
                t,
                denominator: 0.0,
                t_star,
            });
        }
    }
    if p.c2 == 0.0 {
        let d = 1.0 - p.c1 * p.i0 * t;
        if d <= DENOM_TOL {
            return Err(Error::RiccatiSingular {
                t,
                denominator: d,
                t_star,
            });
        }
        return Ok(p.i0 / d);
    }
    let r = (p.c2 / p.c1).sqrt();
    let e = (2.0 * (p.c1 * p.c2).sqrt() * t).exp_m1();
    let num = p.i0 * (2.0 + e) - r * e;
    let den = r * (2.0 + e) - p.i0 * e;
    let scale = r * (2.0 + e) + p.i0.abs() * e;
    if den <= DENOM_TOL * scale {
        return Err(Error::RiccatiSingular {
            t,
            denominator: den,
            t_star,
        });
    }
    Ok(r * num / den)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub t: f64,
    pub i: f64,
    pub j: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonVerdict {
    pub params: RiccatiParams,
    pub t_star: Option<f64>,
    /// Samples compared (those strictly before `t*`).
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl ComparisonVerdict {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first_violation(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

/// Default relative tolerance of [`comparison_check`].
pub const COMPARISON_TOL: f64 = 1e-6;

/// Checks `I(t_k) ≥ J(t_k) - tol·(1 + |J|)` on every sample before `t*`.
pub fn comparison_check(
    series: &[TrajectoryRecord],
    p: &RiccatiParams,
    tol: f64,
) -> Result<ComparisonVerdict> {
    let first = series
        .first()
        .ok_or_else(|| Error::SamplingMismatch("empty series".into()))?;
    if (first.i - p.i0).abs() > 1e-9 * (1.0 + p.i0.abs()) {
        return Err(Error::SamplingMismatch(format!(
            "series starts at I = {} but I0 = {}",
            first.i, p.i0
        )));
    }
    let t0 = first.t;
    let t_star = blowup_time(p).ok();
    let mut checked = 0;
    let mut violations = Vec::new();
    for rec in series {
        let t = rec.t - t0;
        let j = match riccati_j(p, t) {
            Ok(j) => j,
            Err(Error::RiccatiSingular { .. }) => break,
            Err(e) => return Err(e),
        };
        checked += 1;
        if rec.i < j - tol * (1.0 + j.abs()) {
            violations.push(Violation {
                t: rec.t,
                i: rec.i,
                j,
            });
        }
    }
    Ok(ComparisonVerdict {
        params: *p,
        t_star,
        checked,
        violations,
    })
}

/// `max (c1·I² - dI/dt)₊` over the interior of the leading `fraction` of
/// the samples, with central differences on the stored times.
pub fn fit_c2(series: &[TrajectoryRecord], c1: f64, fraction: f64) -> Result<f64> {
    let count = ((series.len() as f64 * fraction).ceil() as usize).clamp(3, series.len().max(3));
    if series.len() < 3 {
        return Err(Error::TooFewSnapshots {
            needed: 3,
            got: series.len(),
        });
    }
    let early = &series[..count.min(series.len())];
    let mut c2: f64 = 0.0;
    for k in 1..early.len() - 1 {
        let didt = (early[k + 1].i - early[k - 1].i) / (early[k + 1].t - early[k - 1].t);
        c2 = c2.max(c1 * early[k].i * early[k].i - didt);
    }
    Ok(c2.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_examples() {
        let p = RiccatiParams::new(1.0, 1.0, 2.0).unwrap();
        assert!((blowup_time(&p).unwrap() - 0.5 * 3f64.ln()).abs() < 1e-15);
        assert_eq!(riccati_j(&p, 0.0).unwrap(), 2.0);
        let q = RiccatiParams::new(1.0, 1.0, 0.0).unwrap();
        assert!((riccati_j(&q, 1.0).unwrap() + 1f64.tanh()).abs() < 1e-15);
        let z = RiccatiParams::new(1.0, 0.0, 2.0).unwrap();
        assert_eq!(blowup_time(&z).unwrap(), 0.5);
        assert!((riccati_j(&z, 0.25).unwrap() - 4.0).abs() < 1e-15);
    }

    #[test]
    fn domain_errors() {
        let p = RiccatiParams::new(1.0, 1.0, 1.0).unwrap();
        match blowup_time(&p) {
            Err(Error::RiccatiDomain { margin }) => assert_eq!(margin, 0.0),
            other => panic!("{other:?}"),
        }
        let q = RiccatiParams::new(1.0, 1.0, 2.0).unwrap();
        assert!(riccati_j(&q, 0.6).is_err());
        assert!(RiccatiParams::new(0.0, 1.0, 1.0).is_err());
        assert!(RiccatiParams::new(1.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn c1_values() {
        assert_eq!(riccati_c1(1, 0.5).unwrap(), 0.125);
        assert_eq!(riccati_c1(3, 0.5).unwrap(), 0.03125);
        assert!(riccati_c1(1, 1.0).is_err());
        assert!(riccati_c1(1, 1e-12).unwrap() < 1e-12);
    }

    #[test]
    fn ode_residual() {
        let p = RiccatiParams::new(1.0, 1.0, 2.0).unwrap();
        let h = 1e-5;
        let t = 0.2;
        let d = (riccati_j(&p, t + h).unwrap() - riccati_j(&p, t - h).unwrap()) / (2.0 * h);
        let j = riccati_j(&p, t).unwrap();
        assert!((d - (j * j - 1.0)).abs() < 1e-7);
    }

    #[test]
    fn j_diverges_near_t_star() {
        let p = RiccatiParams::new(1.0, 1.0, 2.0).unwrap();
        let ts = blowup_time(&p).unwrap();
        let eps = 1e-6;
        assert!(riccati_j(&p, (1.0 - eps) * ts).unwrap() >= 1.0 / eps);
    }
}
