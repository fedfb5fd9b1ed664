use super::quadrature::VirialQuadrature;
use crate::error::{Error, Result};
use crate::setup::{CoefficientField, WeightSpec};
use crate::spectral::{
    forward_real, gradient_with, inverse_real, Multipliers, ScalarField, Snapshot, VectorField,
};

/// Terms of the virial balance `dI/dt = A + B` and the pieces of `B`.
#[derive(Debug, Clone, PartialEq)]
pub struct VirialBreakdown {
    pub i: f64,
    /// `∫ Δv · (b w)`.
    pub a: f64,
    /// `∫ ∇(|v|² b) · (b w)`.
    pub b: f64,
    /// `(κ/2) ∫ |v|² |b w|²`.
    pub i2: f64,
    /// `-∫ |v|² b Σ_i b_i' w_i Π_{j≠i} b_j`.
    pub i3: f64,
    /// `κ ∫ |v|² b² |x_i|^{-κ-1}` per axis.
    pub per_axis_i1: Vec<f64>,
    /// `(κ/2) ∫ |v|² b² w_i²` per axis; sums to `i2`.
    pub per_axis_i2: Vec<f64>,
}

impl VirialBreakdown {
    pub fn i1_total(&self) -> f64 {
        self.per_axis_i1.iter().sum()
    }

    /// `B - (Σ I1 + I3)`: zero up to quadrature error for compliant `b`.
    pub fn integration_by_parts_gap(&self) -> f64 {
        self.b - (self.i1_total() + self.i3)
    }

    pub fn is_finite(&self) -> bool {
        [self.i, self.a, self.b, self.i2, self.i3]
            .iter()
            .chain(&self.per_axis_i1)
            .chain(&self.per_axis_i2)
            .all(|v| v.is_finite())
    }
}

/// Cached quadrature and Fourier multipliers for repeated evaluation.
#[derive(Debug, Clone)]
pub struct VirialEvaluator {
    quad: VirialQuadrature,
    mult: Multipliers,
    dealias: bool,
}

impl VirialEvaluator {
    /// `dealias` must match the setting used to evolve the field, so that
    /// `B` is the term actually integrated in time.
    pub fn new(grid: &crate::spectral::GridSpec, ws: &WeightSpec, dealias: bool) -> Result<Self> {
        Ok(Self {
            quad: VirialQuadrature::new(grid, ws)?,
            mult: Multipliers::new(grid),
            dealias,
        })
    }

    pub fn quadrature(&self) -> &VirialQuadrature {
        &self.quad
    }

    fn check(&self, v: &VectorField, b: &ScalarField) -> Result<()> {
        if v.grid() != self.quad.grid() || b.grid() != self.quad.grid() {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    /// `I = Σ_i ∫ v_i b w_i`.
    pub fn virial(&self, v: &VectorField, b: &ScalarField) -> Result<f64> {
        self.check(v, b)?;
        Ok((0..v.grid().dim())
            .map(|i| {
                let g: Vec<f64> = v
                    .component(i)
                    .values()
                    .iter()
                    .zip(b.values())
                    .map(|(x, y)| x * y)
                    .collect();
                self.quad.integrate_weighted(i, &g)
            })
            .sum())
    }

    pub fn virial_of(&self, u: &ScalarField, b: &ScalarField) -> Result<f64> {
        self.virial(&gradient_with(&self.mult, u), b)
    }

    pub fn breakdown(&self, v: &VectorField, coeff: &CoefficientField) -> Result<VirialBreakdown> {
        let b = coeff.field();
        self.check(v, b)?;
        let grid = *b.grid();
        let dim = grid.dim();
        let kappa = self.quad.kappa();
        let bv = b.values();
        let v2 = v.norm_sq();
        let v2b: Vec<f64> = v2.values().iter().zip(bv).map(|(x, y)| x * y).collect();
        let v2b2: Vec<f64> = v2b.iter().zip(bv).map(|(x, y)| x * y).collect();

        let i = self.virial(v, b)?;

        let mut a = 0.0;
        for axis in 0..dim {
            let mut hat = forward_real(&grid, v.component(axis).values());
            for (c, &k2) in hat.iter_mut().zip(self.mult.xi_sq()) {
                *c *= -k2;
            }
            let lap = inverse_real(&grid, &hat);
            let g: Vec<f64> = lap.iter().zip(bv).map(|(x, y)| x * y).collect();
            a += self.quad.integrate_weighted(axis, &g);
        }

        let mut flux_hat = forward_real(&grid, &v2b);
        if self.dealias {
            self.mult.dealias_in_place(&mut flux_hat);
        }
        let mut bterm = 0.0;
        for axis in 0..dim {
            let d = inverse_real(&grid, &self.mult.derivative(&flux_hat, axis));
            let g: Vec<f64> = d.iter().zip(bv).map(|(x, y)| x * y).collect();
            bterm += self.quad.integrate_weighted(axis, &g);
        }

        let per_axis_i2: Vec<f64> = (0..dim)
            .map(|axis| 0.5 * kappa * self.quad.integrate_weighted_sq(axis, &v2b2))
            .collect();
        let per_axis_i1: Vec<f64> = (0..dim)
            .map(|axis| kappa * self.quad.integrate_steep(axis, &v2b2))
            .collect();

        let mut i3 = 0.0;
        for axis in 0..dim {
            let g: Vec<f64> = (0..grid.len())
                .map(|flat| {
                    let idx = grid.unravel(flat);
                    let mut cross = coeff.axis_derivatives(axis)[idx[axis]];
                    for other in (0..dim).filter(|&o| o != axis) {
                        cross *= coeff.axis_values(other)[idx[other]];
                    }
                    v2b[flat] * cross
                })
                .collect();
            i3 -= self.quad.integrate_weighted(axis, &g);
        }

        Ok(VirialBreakdown {
            i,
            a,
            b: bterm,
            i2: per_axis_i2.iter().sum(),
            i3,
            per_axis_i1,
            per_axis_i2,
        })
    }

    pub fn breakdown_of(
        &self,
        u: &ScalarField,
        coeff: &CoefficientField,
    ) -> Result<VirialBreakdown> {
        self.breakdown(&gradient_with(&self.mult, u), coeff)
    }
}

/// `I = ∫_{[-1,1]^n} v · (b w)` by product quadrature.
pub fn virial_i(v: &VectorField, b: &ScalarField, ws: &WeightSpec) -> Result<f64> {
    VirialEvaluator::new(v.grid(), ws, false)?.virial(v, b)
}

/// Identity terms with an undealiased flux.
pub fn identity_terms(
    v: &VectorField,
    coeff: &CoefficientField,
    ws: &WeightSpec,
) -> Result<VirialBreakdown> {
    VirialEvaluator::new(v.grid(), ws, false)?.breakdown(v, coeff)
}

/// Max over interior snapshots of `|dI/dt - (A+B)| / (|A| + |B| + 1)`, with
/// `dI/dt` from central differences of the stored samples.
pub fn check_identity(
    snapshots: &[Snapshot],
    coeff: &CoefficientField,
    ws: &WeightSpec,
    dealias: bool,
) -> Result<f64> {
    if snapshots.len() < 3 {
        return Err(Error::TooFewSnapshots {
            needed: 3,
            got: snapshots.len(),
        });
    }
    let dt = snapshots[1].time - snapshots[0].time;
    if !(dt > 0.0) {
        return Err(Error::SamplingMismatch(
            "snapshot times must increase".into(),
        ));
    }
    for pair in snapshots.windows(2) {
        let step = pair[1].time - pair[0].time;
        if (step - dt).abs() > 1e-9 * dt.max(pair[1].time.abs()) {
            return Err(Error::SamplingMismatch(format!(
                "non-uniform spacing {step} vs {dt}"
            )));
        }
    }
    let eval = VirialEvaluator::new(coeff.grid(), ws, dealias)?;
    let terms = snapshots
        .iter()
        .map(|s| eval.breakdown_of(&s.field, coeff))
        .collect::<Result<Vec<_>>>()?;
    let mut worst: f64 = 0.0;
    for k in 1..terms.len() - 1 {
        let didt =
            (terms[k + 1].i - terms[k - 1].i) / (snapshots[k + 1].time - snapshots[k - 1].time);
        let t = &terms[k];
        let r = (didt - (t.a + t.b)).abs() / (t.a.abs() + t.b.abs() + 1.0);
        worst = worst.max(r);
    }
    Ok(worst)
}
