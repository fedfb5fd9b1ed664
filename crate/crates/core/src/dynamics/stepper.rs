use super::config::Integrator;
use crate::error::{Error, Result};
use crate::spectral::{forward_real, inverse_real, Multipliers, ScalarField};
use rustfft::num_complex::Complex64;
use std::borrow::Cow;

/// Coefficient seen by the stepper at a given time.
pub trait CoefficientSource {
    fn sample(&self, t: f64) -> Cow<'_, ScalarField>;
}

impl CoefficientSource for ScalarField {
    fn sample(&self, _t: f64) -> Cow<'_, ScalarField> {
        Cow::Borrowed(self)
    }
}

/// Time-dependent coefficient given by a callback.
pub struct TimeSliced<F>(pub F);

impl<F: Fn(f64) -> ScalarField> CoefficientSource for TimeSliced<F> {
    fn sample(&self, t: f64) -> Cow<'_, ScalarField> {
        Cow::Owned((self.0)(t))
    }
}

const PHI_SERIES_BELOW: f64 = 1e-4;

/// `φ1(z) = (e^z - 1)/z`, `φ2(z) = (e^z - 1 - z)/z²`.
pub(crate) fn phi12(z: f64) -> (f64, f64) {
    if z.abs() < PHI_SERIES_BELOW {
        let phi1 = 1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0));
        let phi2 = 0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0));
        (phi1, phi2)
    } else {
        let em1 = z.exp_m1();
        (em1 / z, (em1 - z) / (z * z))
    }
}

/// Exponential integrator for `û' = -|ξ|²û + F̂(u)` on a fixed grid.
#[derive(Debug, Clone)]
pub(crate) struct Stepper {
    mult: Multipliers,
    integrator: Integrator,
    dealias: bool,
    cached_dt: f64,
    half: Vec<f64>,
    full: Vec<f64>,
    phi1: Vec<f64>,
    phi2: Vec<f64>,
}

impl Stepper {
    pub(crate) fn new(mult: Multipliers, integrator: Integrator, dealias: bool) -> Self {
        Self {
            mult,
            integrator,
            dealias,
            cached_dt: f64::NAN,
            half: Vec::new(),
            full: Vec::new(),
            phi1: Vec::new(),
            phi2: Vec::new(),
        }
    }

    fn prepare(&mut self, dt: f64) {
        if dt == self.cached_dt {
            return;
        }
        let k2 = self.mult.xi_sq();
        self.half = k2.iter().map(|&k| (-0.5 * k * dt).exp()).collect();
        self.full = k2.iter().map(|&k| (-k * dt).exp()).collect();
        if self.integrator == Integrator::Etd2 {
            let (p1, p2): (Vec<f64>, Vec<f64>) = k2.iter().map(|&k| phi12(-k * dt)).unzip();
            self.phi1 = p1;
            self.phi2 = p2;
        }
        self.cached_dt = dt;
    }

    /// Spectrum of `|∇u|² b`, projected onto the 2/3 band when dealiasing.
    pub(crate) fn nonlinear_hat(&self, u_hat: &[Complex64], b: &ScalarField) -> Vec<Complex64> {
        let grid = b.grid();
        let mut acc = vec![0.0; grid.len()];
        for axis in 0..grid.dim() {
            let d = inverse_real(grid, &self.mult.derivative(u_hat, axis));
            for (a, v) in acc.iter_mut().zip(d) {
                *a += v * v;
            }
        }
        for (a, bv) in acc.iter_mut().zip(b.values()) {
            *a *= bv;
        }
        let mut hat = forward_real(grid, &acc);
        if self.dealias {
            self.mult.dealias_in_place(&mut hat);
        }
        hat
    }

    pub(crate) fn step(
        &mut self,
        u_hat: &[Complex64],
        t: f64,
        dt: f64,
        source: &dyn CoefficientSource,
    ) -> Result<Vec<Complex64>> {
        self.prepare(dt);
        let out = match self.integrator {
            Integrator::IfRk4 => self.if_rk4(u_hat, t, dt, source),
            Integrator::Etd2 => self.etd2(u_hat, t, dt, source),
        };
        if out.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Diverged { t: t + dt });
        }
        Ok(out)
    }

    fn if_rk4(
        &self,
        u: &[Complex64],
        t: f64,
        dt: f64,
        source: &dyn CoefficientSource,
    ) -> Vec<Complex64> {
        let (e, e2) = (&self.half, &self.full);
        let h2 = 0.5 * dt;
        let b0 = source.sample(t);
        let bm = source.sample(t + h2);
        let b1 = source.sample(t + dt);

        let n1 = self.nonlinear_hat(u, &b0);
        let a: Vec<Complex64> = (0..u.len()).map(|k| e[k] * (u[k] + h2 * n1[k])).collect();
        let n2 = self.nonlinear_hat(&a, &bm);
        let b: Vec<Complex64> = (0..u.len()).map(|k| e[k] * u[k] + h2 * n2[k]).collect();
        let n3 = self.nonlinear_hat(&b, &bm);
        let c: Vec<Complex64> = (0..u.len())
            .map(|k| e2[k] * u[k] + dt * e[k] * n3[k])
            .collect();
        let n4 = self.nonlinear_hat(&c, &b1);
        (0..u.len())
            .map(|k| {
                e2[k] * u[k] + dt / 6.0 * (e2[k] * n1[k] + 2.0 * e[k] * (n2[k] + n3[k]) + n4[k])
            })
            .collect()
    }

    fn etd2(
        &self,
        u: &[Complex64],
        t: f64,
        dt: f64,
        source: &dyn CoefficientSource,
    ) -> Vec<Complex64> {
        let n0 = self.nonlinear_hat(u, &source.sample(t));
        let a: Vec<Complex64> = (0..u.len())
            .map(|k| self.full[k] * u[k] + dt * self.phi1[k] * n0[k])
            .collect();
        let na = self.nonlinear_hat(&a, &source.sample(t + dt));
        (0..u.len())
            .map(|k| a[k] + dt * self.phi2[k] * (na[k] - n0[k]))
            .collect()
    }
}

/// `|∇u|² b`, optionally dealiased.
pub fn nonlinear_term(u: &ScalarField, b: &ScalarField, dealias: bool) -> Result<ScalarField> {
    if u.grid() != b.grid() {
        return Err(Error::GridMismatch);
    }
    let stepper = Stepper::new(Multipliers::new(u.grid()), Integrator::IfRk4, dealias);
    let hat = stepper.nonlinear_hat(&forward_real(u.grid(), u.values()), b);
    ScalarField::new(*u.grid(), inverse_real(u.grid(), &hat))
}

/// One step of size `dt` from `u`.
pub fn step(
    u: &ScalarField,
    b: &ScalarField,
    dt: f64,
    integrator: Integrator,
    dealias: bool,
) -> Result<ScalarField> {
    if u.grid() != b.grid() {
        return Err(Error::GridMismatch);
    }
    if !(dt > 0.0) {
        return Err(Error::InvalidParameter {
            name: "dt",
            value: dt,
            constraint: "dt > 0",
        });
    }
    let mut stepper = Stepper::new(Multipliers::new(u.grid()), integrator, dealias);
    let hat = stepper.step(&forward_real(u.grid(), u.values()), 0.0, dt, b)?;
    ScalarField::new(*u.grid(), inverse_real(u.grid(), &hat))
}
