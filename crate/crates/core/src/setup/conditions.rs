use super::weight::WeightSpec;
use crate::error::{Error, Result};
use crate::spectral::{gradient, sobolev_norm, ScalarField};
use crate::virial::{riccati_c1, virial_i};
use std::fmt;

/// Blow-up preconditions for an initial datum and coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionsReport {
    pub i0: f64,
    pub u0_sobolev: f64,
    pub sobolev_index: f64,
    pub frak_c: f64,
    pub m_star: f64,
    pub c1: f64,
    pub c2: f64,
    pub cond1_holds: bool,
    pub cond2_holds: bool,
    pub positivity_holds: bool,
}

impl ConditionsReport {
    pub fn all_hold(&self) -> bool {
        self.cond1_holds && self.cond2_holds && self.positivity_holds
    }

    /// `I0·√c1 - √c2`.
    pub fn margin(&self) -> f64 {
        self.i0 * self.c1.sqrt() - self.c2.sqrt()
    }
}

impl fmt::Display for ConditionsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |b: bool| if b { "holds" } else { "fails" };
        writeln!(f, "I0 = {:.16e}", self.i0)?;
        writeln!(
            f,
            "u0_sobolev(s={}) = {:.16e}",
            self.sobolev_index, self.u0_sobolev
        )?;
        writeln!(f, "frakC = {:.16e}", self.frak_c)?;
        writeln!(f, "m_star = {:.16e}", self.m_star)?;
        writeln!(f, "c1 = {:.16e}", self.c1)?;
        writeln!(f, "c2 = {:.16e}", self.c2)?;
        writeln!(f, "cond1 (I0 > 0): {}", mark(self.cond1_holds))?;
        writeln!(
            f,
            "cond2 (I0^2 >= frakC*norm^p): {}",
            mark(self.cond2_holds)
        )?;
        write!(
            f,
            "positivity (I0*sqrt(c1) - sqrt(c2) = {:.6e} > 0): {}",
            self.margin(),
            mark(self.positivity_holds)
        )
    }
}

/// `‖u0‖` when `‖u0‖ ≤ 1`, `‖u0‖²` otherwise.
fn norm_power(norm: f64) -> f64 {
    if norm <= 1.0 {
        norm
    } else {
        norm * norm
    }
}

pub fn check_blowup_conditions(
    u0: &ScalarField,
    b: &ScalarField,
    ws: &WeightSpec,
    s: f64,
    frak_c: f64,
    m_star: f64,
) -> Result<ConditionsReport> {
    if !(frak_c > 0.0 && frak_c.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "conditions.frakC",
            value: frak_c,
            constraint: "frakC > 0",
        });
    }
    if !(m_star > 0.0 && m_star.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "conditions.m_star",
            value: m_star,
            constraint: "m_star > 0",
        });
    }
    let i0 = virial_i(&gradient(u0), b, ws)?;
    let norm = sobolev_norm(u0, s)?;
    let c1 = riccati_c1(u0.grid().dim(), ws.kappa())?;
    let c2 = frak_c * norm_power(norm);
    Ok(ConditionsReport {
        i0,
        u0_sobolev: norm,
        sobolev_index: s,
        frak_c,
        m_star,
        c1,
        c2,
        cond1_holds: i0 > 0.0,
        cond2_holds: i0 * i0 >= c2,
        positivity_holds: i0 * c1.sqrt() - c2.sqrt() > 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setup::{build_coefficient, build_initial_data, CoefficientSpec, InitialDataSpec};
    use crate::spectral::GridSpec;
    use std::f64::consts::PI;

    #[test]
    fn zero_datum_fails_cond1() {
        let g = GridSpec::new(1, 128, 2.0 * PI).unwrap();
        let b = build_coefficient(&CoefficientSpec::builtin(1, 1.0, 1.0).unwrap(), &g).unwrap();
        let ws = WeightSpec::new(0.5).unwrap();
        let r = check_blowup_conditions(&ScalarField::zeros(g), &b, &ws, 4.0, 1e-4, 10.0).unwrap();
        assert_eq!(r.i0, 0.0);
        assert!(!r.cond1_holds);
        assert_eq!(r.c1, 0.125);
        assert!(check_blowup_conditions(&ScalarField::zeros(g), &b, &ws, 4.0, 0.0, 1.0).is_err());
        assert!(check_blowup_conditions(&ScalarField::zeros(g), &b, &ws, 4.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn builtin_family_has_positive_pairing() {
        let g = GridSpec::new(1, 128, 2.0 * PI).unwrap();
        let b = build_coefficient(&CoefficientSpec::builtin(1, 1.0, 1.0).unwrap(), &g).unwrap();
        let u0 = build_initial_data(&InitialDataSpec::GaussianSum { amplitude: 1.0 }, &g).unwrap();
        let ws = WeightSpec::new(0.5).unwrap();
        let r = check_blowup_conditions(&u0, &b, &ws, 4.0, 1e-4, 10.0).unwrap();
        assert!(r.i0 > 0.0 && r.cond1_holds);
    }
}
