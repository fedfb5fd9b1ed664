#![allow(dead_code)]

use blowup_core::spectral::{GridSpec, ScalarField};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// Dense 1-D transform `û(k) = Σ_j u(x_j) e^{-iξ_k x_j}` for `k = -N/2..N/2`.
pub fn dense_dft_1d(grid: &GridSpec, u: &[f64]) -> Vec<(i64, f64, f64)> {
    let n = grid.points() as i64;
    let nodes = grid.nodes();
    (-n / 2..n / 2)
        .map(|k| {
            let xi = PI / grid.half_length() * k as f64;
            let (mut re, mut im) = (0.0, 0.0);
            for (x, v) in nodes.iter().zip(u) {
                re += v * (xi * x).cos();
                im -= v * (xi * x).sin();
            }
            (k, re, im)
        })
        .collect()
}

/// Inverse of [`dense_dft_1d`], evaluated at the grid nodes.
pub fn dense_idft_1d(grid: &GridSpec, hat: &[(i64, f64, f64)]) -> Vec<f64> {
    let n = grid.points() as f64;
    grid.nodes()
        .iter()
        .map(|x| {
            hat.iter()
                .map(|&(k, re, im)| {
                    let a = PI / grid.half_length() * k as f64 * x;
                    re * a.cos() - im * a.sin()
                })
                .sum::<f64>()
                / n
        })
        .collect()
}

/// Random real trigonometric polynomial with modes `|k_i| ≤ kmax` on every axis.
pub fn random_trig_field(grid: GridSpec, kmax: i64, rng: &mut ChaCha8Rng) -> ScalarField {
    let dim = grid.dim();
    let mut terms = Vec::new();
    let count = 2 + rng.gen_range(0..5);
    for _ in 0..count {
        let k: Vec<f64> = (0..dim)
            .map(|_| rng.gen_range(-kmax..=kmax) as f64 * PI / grid.half_length())
            .collect();
        terms.push((k, rng.gen_range(-1.0..1.0), rng.gen_range(0.0..2.0 * PI)));
    }
    ScalarField::from_fn(grid, |x| {
        terms
            .iter()
            .map(|(k, a, phase)| {
                let arg: f64 = k.iter().zip(x).map(|(k, x)| k * x).sum();
                a * (arg + phase).cos()
            })
            .sum()
    })
}

/// Random field with independent node values in `[-1, 1]`.
pub fn random_nodal_field(grid: GridSpec, rng: &mut ChaCha8Rng) -> ScalarField {
    let values = (0..grid.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    ScalarField::new(grid, values).unwrap()
}

pub fn max_diff(a: &ScalarField, b: &ScalarField) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
