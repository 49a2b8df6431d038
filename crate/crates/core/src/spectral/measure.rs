use std::io::Write;

use serde::{Deserialize, Serialize};

use super::tridiag::{eigendecompose, truncated_position_matrix};
use crate::error::{Error, Result};
use crate::fock::{JacobiSequence, NumberState};
use crate::laws::arcsine_cdf;
use crate::scalar::{to_f64, ExactScalar};

/// A finite probability measure on the real line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    /// `(location, weight)`, strictly increasing in location.
    atoms: Vec<(f64, f64)>,
}

impl DiscreteMeasure {
    /// Sorts atoms, merges coincident locations and drops nothing else.
    /// Negative or non-finite weights are rejected.
    pub fn new(mut atoms: Vec<(f64, f64)>) -> Result<Self> {
        if let Some(&(x, w)) = atoms
            .iter()
            .find(|(x, w)| !x.is_finite() || !w.is_finite() || *w < 0.0)
        {
            return Err(Error::InvalidAtom {
                location: x,
                weight: w,
            });
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(atoms.len());
        for (x, w) in atoms {
            match merged.last_mut() {
                Some(last) if last.0 == x => last.1 += w,
                _ => merged.push((x, w)),
            }
        }
        Ok(Self { atoms: merged })
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum()
    }

    pub fn moment(&self, order: usize) -> f64 {
        self.atoms
            .iter()
            .map(|&(x, w)| w * x.powi(order as i32))
            .sum()
    }

    /// `F(x) = mu((-inf, x])`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.atoms
            .iter()
            .take_while(|a| a.0 <= x)
            .map(|a| a.1)
            .sum()
    }

    /// Multiplies every location by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            atoms: self.atoms.iter().map(|&(x, w)| (x * factor, w)).collect(),
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["location", "weight"])?;
        for (x, p) in &self.atoms {
            w.write_record([format!("{x:.17e}"), format!("{p:.17e}")])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("measure serializes")
    }
}

/// Highest moment order reproduced exactly by a `K`-level truncation at
/// state `N`, by the conservative rule `K - 1 - N`.
pub fn lossless_order(state: NumberState, k: usize) -> usize {
    k.saturating_sub(1 + state.index())
}

/// Default truncation `K = 2N + 64`.
pub fn default_dimension(state: NumberState) -> usize {
    2 * state.index() + 64
}

/// Spectral measure of `Phi_N` for `X / sqrt(s)` on the `K`-level
/// truncation: atoms at eigenvalues over `sqrt(s)`, weights the squared
/// eigenvector components at row `N`.
pub fn reconstruct_state_measure(
    seq: &JacobiSequence,
    state: NumberState,
    k: usize,
    scale: &ExactScalar,
) -> Result<DiscreteMeasure> {
    let n = state.index();
    if k < n + 2 {
        return Err(Error::DimensionTooSmall { k, n });
    }
    let s = to_f64(scale);
    if s.is_nan() || s <= 0.0 {
        return Err(Error::NonPositiveScale(scale.to_string()));
    }
    let matrix = truncated_position_matrix(seq, k)?;
    let spectrum = eigendecompose(&matrix, n)?;
    let root = s.sqrt();
    let atoms = spectrum
        .eigenvalues
        .iter()
        .zip(spectrum.weights())
        .map(|(&x, w)| (x / root, w))
        .collect();
    DiscreteMeasure::new(atoms)
}

/// Kolmogorov-Smirnov distance between a discrete measure and the arcsine
/// law, checking both sides of every jump.
pub fn ks_distance_to_arcsine(measure: &DiscreteMeasure) -> f64 {
    ks_distance(measure, arcsine_cdf)
}

pub fn ks_distance<F: Fn(f64) -> f64>(measure: &DiscreteMeasure, cdf: F) -> f64 {
    let total = measure.total_weight();
    let mut below = 0.0;
    let mut sup: f64 = 0.0;
    for &(x, w) in measure.atoms() {
        let f = cdf(x);
        let at = (below + w) / total;
        sup = sup.max((below / total - f).abs()).max((at - f).abs());
        below += w;
    }
    sup.min(1.0)
}

/// Largest gap, over `points` evenly spaced abscissae in `[-radius, radius]`,
/// between the Gaussian-smoothed CDFs `E[Phi((x - Y) / sigma)]` of the
/// measure and of `density`.
///
/// A step CDF is at least half its largest jump away from any continuous CDF
/// in sup norm, so raw CDFs are compared only after smoothing. The density
/// side is integrated by composite Simpson with step `max_step`.
pub fn smoothed_cdf_gap<F: Fn(f64) -> f64>(
    measure: &DiscreteMeasure,
    density: F,
    radius: f64,
    sigma: f64,
    points: usize,
    max_step: f64,
) -> f64 {
    let points = points.max(2);
    let kernel = |z: f64| 0.5 * libm::erfc(-z / std::f64::consts::SQRT_2);
    (0..points)
        .map(|i| {
            let x = -radius + 2.0 * radius * i as f64 / (points - 1) as f64;
            let discrete: f64 = measure
                .atoms()
                .iter()
                .map(|&(t, w)| w * kernel((x - t) / sigma))
                .sum();
            let continuous = super::hermite::simpson(
                |t| kernel((x - t) / sigma) * density(t),
                -radius,
                radius,
                max_step,
            );
            (discrete - continuous).abs()
        })
        .fold(0.0, f64::max)
}

/// Largest amount by which `cdf(x_k)` leaves the jump interval
/// `[F(x_k-), F(x_k)]` of the measure, over its atoms. Zero up to rounding
/// when the measure is the Gauss rule of the law with CDF `cdf`.
pub fn jump_bracket_violation(measure: &DiscreteMeasure, cdf_at_atoms: &[f64]) -> f64 {
    let mut below = 0.0;
    let mut worst: f64 = 0.0;
    for (&(_, w), &f) in measure.atoms().iter().zip(cdf_at_atoms) {
        worst = worst.max(below - f).max(f - (below + w));
        below += w;
    }
    worst
}
