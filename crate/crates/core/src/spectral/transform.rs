//! Multi-dimensional FFT on row-major buffers, one axis at a time.
//!
//! Plans are cached per thread, so concurrent callers never share mutable
//! state and results are bitwise reproducible for a given input.

use super::grid::GridSpec;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use std::cell::RefCell;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum Direction {
    Forward,
    Inverse,
}

/// In-place unnormalized transform over every axis of `grid`.
pub(crate) fn fft_nd(grid: &GridSpec, data: &mut [Complex64], dir: Direction) {
    debug_assert_eq!(data.len(), grid.len());
    let n = grid.points();
    let fft = PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        match dir {
            Direction::Forward => p.plan_fft_forward(n),
            Direction::Inverse => p.plan_fft_inverse(n),
        }
    });
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    let strides = grid.strides();
    let mut line = vec![Complex64::new(0.0, 0.0); n];

    for &stride in strides.iter().take(grid.dim()) {
        if stride == 1 {
            // Last axis is contiguous.
            fft.process_with_scratch(data, &mut scratch);
            continue;
        }
        let block = stride * n;
        for base in (0..data.len()).step_by(block) {
            for offset in 0..stride {
                let start = base + offset;
                for (k, slot) in line.iter_mut().enumerate() {
                    *slot = data[start + k * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (k, value) in line.iter().enumerate() {
                    data[start + k * stride] = *value;
                }
            }
        }
    }
}

/// Flips the sign of every slot whose index sum is odd.
///
/// Nodes start at `-L`, so `e^{-iξ·x_j}` differs from the index-based DFT
/// kernel by `(-1)^{Σk}`; with `N` even the parity of `k` equals that of the
/// slot index.
fn shift_phase(grid: &GridSpec, data: &mut [Complex64]) {
    match grid.dim() {
        1 => {
            for c in data.iter_mut().skip(1).step_by(2) {
                *c = -*c;
            }
        }
        _ => {
            for (flat, c) in data.iter_mut().enumerate() {
                let idx = grid.unravel(flat);
                if (idx[0] + idx[1] + idx[2]) % 2 == 1 {
                    *c = -*c;
                }
            }
        }
    }
}

/// `û(ξ) = Σ_j u(x_j) e^{-iξ·x_j}`, unnormalized.
pub(crate) fn forward_real(grid: &GridSpec, values: &[f64]) -> Vec<Complex64> {
    let mut data: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft_nd(grid, &mut data, Direction::Forward);
    shift_phase(grid, &mut data);
    data
}

/// Inverse of [`forward_real`]: divides by `N^n` and keeps the real part.
pub(crate) fn inverse_real(grid: &GridSpec, coeffs: &[Complex64]) -> Vec<f64> {
    let mut data = coeffs.to_vec();
    shift_phase(grid, &mut data);
    fft_nd(grid, &mut data, Direction::Inverse);
    let scale = 1.0 / grid.len() as f64;
    data.iter().map(|c| c.re * scale).collect()
}
