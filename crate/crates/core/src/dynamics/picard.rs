//! Fixed-point iteration of the Duhamel map on stored time slices.

use super::config::Integrator;
use super::stepper::Stepper;
use crate::error::{Error, Result};
use crate::spectral::{forward_real, Multipliers, ScalarField};
use rustfft::num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct PicardConfig {
    pub horizon: f64,
    pub slices: usize,
    pub iterations: usize,
    pub sobolev_index: f64,
    pub dealias: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PicardReport {
    pub horizon: f64,
    pub iterates: usize,
    /// `sup_j ‖u^{(m+1)}(t_j) - u^{(m)}(t_j)‖_{H^s}` for `m = 0, 1, ...`.
    pub sup_differences: Vec<f64>,
    /// `exp` of the least-squares slope of `ln d_m` over resolved differences.
    pub contraction_factor: f64,
    pub c1_hat: f64,
    pub cb_hat: f64,
    /// `4·C1_hat·CB_hat·‖u0‖_{H^s}`.
    pub smallness: f64,
    pub u0_norm: f64,
    /// Gain of the Duhamel integral from `H^{s-1}` to `H^s` on `[0, T]`.
    pub kernel_gain: f64,
    /// `sup_t ‖|∇u|²b‖_{H^{s-1}} / ‖u‖²_{E_T}` on the last iterate.
    pub algebra_hat: f64,
    /// `‖B(u,u)‖_{E_T} / ‖u‖²_{E_T}` for the Duhamel term of the last iterate.
    pub bilinear_ratio: f64,
    pub diverged: bool,
}

impl PicardReport {
    /// Ratios `d_{m+1}/d_m` of successive differences.
    pub fn ratios(&self) -> Vec<f64> {
        self.sup_differences
            .windows(2)
            .map(|w| if w[0] > 0.0 { w[1] / w[0] } else { 0.0 })
            .collect()
    }
}

/// `sup_ξ √(1+ξ²)(1 - e^{-ξ²T})/ξ²` over the grid, `T` at `ξ = 0`.
pub fn duhamel_gain(mult: &Multipliers, horizon: f64) -> f64 {
    mult.xi_sq().iter().fold(horizon, |m, &k2| {
        if k2 == 0.0 {
            m
        } else {
            m.max((1.0 + k2).sqrt() * -(-k2 * horizon).exp_m1() / k2)
        }
    })
}

/// Differences at or below this fraction of `‖u0‖` are treated as converged.
const DIFF_FLOOR: f64 = 1e-13;

pub fn picard_iterate(
    u0: &ScalarField,
    b: &ScalarField,
    cfg: &PicardConfig,
) -> Result<PicardReport> {
    if u0.grid() != b.grid() {
        return Err(Error::GridMismatch);
    }
    if !(cfg.horizon > 0.0 && cfg.horizon.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "picard.T",
            value: cfg.horizon,
            constraint: "T > 0",
        });
    }
    if cfg.slices < 8 {
        return Err(Error::InvalidParameter {
            name: "picard.slices",
            value: cfg.slices as f64,
            constraint: "M >= 8",
        });
    }
    if cfg.iterations < 3 {
        return Err(Error::InvalidParameter {
            name: "picard.iterations",
            value: cfg.iterations as f64,
            constraint: "K >= 3",
        });
    }
    let grid = *u0.grid();
    let mult = Multipliers::new(&grid);
    let s = cfg.sobolev_index;
    let stepper = Stepper::new(mult.clone(), Integrator::IfRk4, cfg.dealias);
    let m = cfg.slices;
    let tau = cfg.horizon / m as f64;
    let times: Vec<f64> = (0..=m).map(|j| j as f64 * tau).collect();
    let k2 = mult.xi_sq().to_vec();

    let u0_hat = forward_real(&grid, u0.values());
    let u0_norm = mult.sobolev_norm(&u0_hat, s);
    let free: Vec<Vec<Complex64>> = times
        .iter()
        .map(|&t| {
            u0_hat
                .iter()
                .zip(&k2)
                .map(|(c, &k)| c * (-k * t).exp())
                .collect()
        })
        .collect();
    let c1_hat = if u0_norm > 0.0 {
        free.iter()
            .map(|f| mult.sobolev_norm(f, s))
            .fold(0.0, f64::max)
            / u0_norm
    } else {
        1.0
    };

    // Kernel factors e^{-|ξ|²(t_j - τ_l)} depend only on j - l.
    let decay: Vec<Vec<f64>> = (0..=m)
        .map(|d| k2.iter().map(|&k| (-k * d as f64 * tau).exp()).collect())
        .collect();

    let duhamel = |forcing: &[Vec<Complex64>]| -> Vec<Vec<Complex64>> {
        (0..=m)
            .map(|j| {
                let mut acc = vec![Complex64::new(0.0, 0.0); grid.len()];
                for (l, f) in forcing.iter().enumerate().take(j + 1) {
                    let w = if j == 0 {
                        0.0
                    } else if l == 0 || l == j {
                        0.5 * tau
                    } else {
                        tau
                    };
                    if w == 0.0 {
                        continue;
                    }
                    for ((a, c), &e) in acc.iter_mut().zip(f).zip(&decay[j - l]) {
                        *a += w * e * c;
                    }
                }
                acc
            })
            .collect()
    };

    let mut current = free.clone();
    let mut diffs = Vec::with_capacity(cfg.iterations);
    let mut growth_run = 0;
    let mut diverged = false;
    let mut last_forcing = Vec::new();
    let mut last_integral = Vec::new();
    for _ in 0..cfg.iterations {
        let forcing: Vec<Vec<Complex64>> = current
            .iter()
            .map(|u| stepper.nonlinear_hat(u, b))
            .collect();
        let integral = duhamel(&forcing);
        let next: Vec<Vec<Complex64>> = free
            .iter()
            .zip(&integral)
            .map(|(f, i)| f.iter().zip(i).map(|(a, b)| a + b).collect())
            .collect();
        let d = next
            .iter()
            .zip(&current)
            .map(|(a, b)| {
                let diff: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
                mult.sobolev_norm(&diff, s)
            })
            .fold(0.0, f64::max);
        if !d.is_finite() {
            diverged = true;
            break;
        }
        if let Some(&prev) = diffs.last() {
            if d > prev {
                growth_run += 1;
            } else {
                growth_run = 0;
            }
        }
        diffs.push(d);
        current = next;
        last_forcing = forcing;
        last_integral = integral;
        if growth_run >= 3 {
            diverged = true;
            break;
        }
    }

    let floor = DIFF_FLOOR * u0_norm.max(1e-300);
    let resolved: Vec<(f64, f64)> = diffs
        .iter()
        .enumerate()
        .filter(|(_, &d)| d > floor)
        .map(|(k, &d)| (k as f64, d.ln()))
        .collect();
    let contraction_factor = if resolved.len() >= 2 {
        let n = resolved.len() as f64;
        let mx = resolved.iter().map(|p| p.0).sum::<f64>() / n;
        let my = resolved.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = resolved.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = resolved.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        (sxy / sxx).exp()
    } else {
        0.0
    };

    let sup_norm = current
        .iter()
        .map(|u| mult.sobolev_norm(u, s))
        .fold(0.0, f64::max);
    let kernel_gain = duhamel_gain(&mult, cfg.horizon);
    let (algebra_hat, bilinear_ratio) = if sup_norm > 0.0 && !last_forcing.is_empty() {
        let sq = sup_norm * sup_norm;
        let alg = last_forcing
            .iter()
            .map(|f| mult.sobolev_norm(f, s - 1.0))
            .fold(0.0, f64::max)
            / sq;
        let bil = last_integral
            .iter()
            .map(|f| mult.sobolev_norm(f, s))
            .fold(0.0, f64::max)
            / sq;
        (alg, bil)
    } else {
        (0.0, 0.0)
    };
    let cb_hat = kernel_gain * algebra_hat;

    Ok(PicardReport {
        horizon: cfg.horizon,
        iterates: diffs.len(),
        sup_differences: diffs,
        contraction_factor,
        c1_hat,
        cb_hat,
        smallness: 4.0 * c1_hat * cb_hat * u0_norm,
        u0_norm,
        kernel_gain,
        algebra_hat,
        bilinear_ratio,
        diverged,
    })
}

/// Least-squares fit `y ≈ α·T + β·√T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeFit {
    pub alpha: f64,
    pub beta: f64,
    /// `1 - SS_res/SS_tot` about the mean of `y`.
    pub r_squared: f64,
}

pub fn fit_time_shape(horizons: &[f64], values: &[f64]) -> Result<ShapeFit> {
    if horizons.len() != values.len() {
        return Err(Error::LengthMismatch {
            expected: horizons.len(),
            got: values.len(),
        });
    }
    if horizons.len() < 3 {
        return Err(Error::TooFewSnapshots {
            needed: 3,
            got: horizons.len(),
        });
    }
    if horizons.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
        return Err(Error::InvalidParameter {
            name: "picard.T",
            value: horizons.iter().copied().fold(f64::INFINITY, f64::min),
            constraint: "T > 0",
        });
    }
    // normal equations for the two columns T and √T
    let (mut saa, mut sab, mut sbb, mut say, mut sby) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&t, &y) in horizons.iter().zip(values) {
        let (a, b) = (t, t.sqrt());
        saa += a * a;
        sab += a * b;
        sbb += b * b;
        say += a * y;
        sby += b * y;
    }
    let det = saa * sbb - sab * sab;
    if !(det > 1e-12 * saa * sbb) {
        return Err(Error::InvalidParameter {
            name: "picard.T",
            value: horizons[0],
            constraint: "at least two distinct horizons",
        });
    }
    let alpha = (say * sbb - sby * sab) / det;
    let beta = (saa * sby - sab * say) / det;
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let (mut ss_res, mut ss_tot) = (0.0, 0.0);
    for (&t, &y) in horizons.iter().zip(values) {
        let r = y - alpha * t - beta * t.sqrt();
        ss_res += r * r;
        ss_tot += (y - mean) * (y - mean);
    }
    let r_squared = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else {
        1.0
    };
    Ok(ShapeFit {
        alpha,
        beta,
        r_squared,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_fit_recovers_exact_coefficients() {
        let ts = [0.05f64, 0.1, 0.2, 0.4, 0.8];
        let ys: Vec<f64> = ts.iter().map(|t| 0.3 * t + 0.7 * t.sqrt()).collect();
        let fit = fit_time_shape(&ts, &ys).unwrap();
        assert!((fit.alpha - 0.3).abs() < 1e-12 && (fit.beta - 0.7).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert!(fit_time_shape(&ts[..2], &ys[..2]).is_err());
        assert!(fit_time_shape(&[0.1, 0.1, 0.1], &[1.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn gain_is_horizon_for_constants() {
        let g = crate::spectral::GridSpec::new(1, 8, 1e-3).unwrap();
        // the smallest nonzero |ξ|² is π²·1e6, so every oscillating mode gains less than T
        let m = Multipliers::new(&g);
        assert_eq!(duhamel_gain(&m, 0.5), 0.5);
    }
}
