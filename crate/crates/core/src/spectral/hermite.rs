use std::f64::consts::PI;

use num_traits::One;

use super::reconstruct_state_measure;
use crate::error::Result;
use crate::fock::{JacobiSequence, NumberState};
use crate::scalar::ExactScalar;

/// Density of the position law of `Phi_N` for the standard oscillator,
/// `p_N(x)^2 e^(-x^2) / sqrt(pi)`, with `p_n` orthonormal for the
/// variance-1/2 Gaussian.
///
/// The Gaussian factor is folded into the starting value, so the recurrence
/// `b_(n+1) q_(n+1) = x q_n - b_n q_(n-1)`, `b_n = sqrt(n / 2)`, runs on
/// quantities of order one.
pub fn hermite_state_density(state: usize, x: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * x * x).exp();
    for n in 0..state {
        let b_next = ((n + 1) as f64 / 2.0).sqrt();
        let b_n = (n as f64 / 2.0).sqrt();
        let next = (x * cur - b_n * prev) / b_next;
        prev = cur;
        cur = next;
    }
    cur * cur
}

/// Half-width beyond which the density of `Phi_N` is negligible in double precision.
pub fn hermite_support_radius(state: usize) -> f64 {
    (2.0 * state as f64 + 1.0).sqrt() + 10.0
}

/// CDF of [`hermite_state_density`] at ascending points, by composite
/// Simpson on each gap with step at most `max_step`.
pub fn hermite_state_cdf(state: usize, points: &[f64], max_step: f64) -> Vec<f64> {
    debug_assert!(points.windows(2).all(|w| w[0] <= w[1]));
    let mut left = -hermite_support_radius(state);
    let mut acc = 0.0;
    points
        .iter()
        .map(|&x| {
            if x > left {
                acc += simpson(|t| hermite_state_density(state, t), left, x, max_step);
                left = x;
            }
            acc
        })
        .collect()
}

pub(crate) fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, max_step: f64) -> f64 {
    let mut panels = ((b - a) / max_step).ceil() as usize;
    panels = panels.max(2);
    if panels % 2 == 1 {
        panels += 1;
    }
    let h = (b - a) / panels as f64;
    let mut sum = f(a) + f(b);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

/// `(x, f(x))` samples of the density of `X / sqrt(scale)` on a uniform grid.
pub fn hermite_density_grid(state: usize, scale: f64, points: usize) -> Vec<(f64, f64)> {
    let root = scale.sqrt();
    let r = ((2.0 * state as f64 + 1.0).sqrt() + 4.0) / root;
    let points = points.max(2);
    (0..points)
        .map(|i| {
            let y = -r + 2.0 * r * i as f64 / (points - 1) as f64;
            (y, root * hermite_state_density(state, y * root))
        })
        .collect()
}

/// Smoothed-CDF gap between the Hermite density of `Phi_N` and its
/// `K`-level spectral reconstruction, unscaled. See [`smoothed_cdf_gap`].
///
/// [`smoothed_cdf_gap`]: super::smoothed_cdf_gap
pub fn hermite_spectrum_gap(state: usize, k: usize) -> Result<f64> {
    let measure = reconstruct_state_measure(
        &JacobiSequence::standard(),
        NumberState::new(state),
        k,
        &ExactScalar::one(),
    )?;
    Ok(super::smoothed_cdf_gap(
        &measure,
        |t| hermite_state_density(state, t),
        hermite_support_radius(state),
        SMOOTHING_WIDTH,
        41,
        2e-3,
    ))
}

/// Kernel width used by [`hermite_spectrum_gap`].
pub const SMOOTHING_WIDTH: f64 = 0.25;
