//! Closed-form reference laws and exact moment validation.

use std::collections::BTreeMap;
use std::f64::consts::{PI, SQRT_2};

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{binomial, double_factorial_odd, format_exact, pow, ExactScalar};

/// The arcsine law on `[-sqrt 2, sqrt 2]`, density `1 / (pi sqrt(2 - x^2))`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ArcsineLaw;

impl ArcsineLaw {
    pub const EDGE: f64 = SQRT_2;

    pub fn moment(&self, order: usize) -> ExactScalar {
        arcsine_moment(order)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        arcsine_cdf(x)
    }

    pub fn density(&self, x: f64) -> f64 {
        arcsine_density(x)
    }

    pub fn quantile(&self, p: f64) -> f64 {
        arcsine_quantile(p)
    }
}

/// Zero for odd orders, `C(2m, m) / 2^m` for order `2m`.
pub fn arcsine_moment(order: usize) -> ExactScalar {
    if order % 2 == 1 {
        return ExactScalar::zero();
    }
    let m = order / 2;
    ExactScalar::new(
        binomial(2 * m as u64, m as u64),
        num_traits::pow(2.into(), m),
    )
}

pub fn arcsine_cdf(x: f64) -> f64 {
    if x <= -SQRT_2 {
        0.0
    } else if x >= SQRT_2 {
        1.0
    } else {
        (0.5 + (x / SQRT_2).asin() / PI).clamp(0.0, 1.0)
    }
}

/// Zero outside the open support.
pub fn arcsine_density(x: f64) -> f64 {
    if x.abs() >= SQRT_2 {
        0.0
    } else {
        1.0 / (PI * (2.0 - x * x).sqrt())
    }
}

pub fn arcsine_quantile(p: f64) -> f64 {
    SQRT_2 * (PI * (p.clamp(0.0, 1.0) - 0.5)).sin()
}

/// Moments of `phi_0` for the standard oscillator: the centered Gaussian
/// with variance `1/2`, so `(2m - 1)!! / 2^m` at order `2m`.
pub fn vacuum_gaussian_moment(order: usize) -> ExactScalar {
    if order % 2 == 1 {
        return ExactScalar::zero();
    }
    let m = order / 2;
    ExactScalar::new(double_factorial_odd(m as u64), num_traits::pow(2.into(), m))
}

/// `x(t) = A sin t`, described by `A^2` so that `A = sqrt 2` stays exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalOscillator {
    amplitude_squared: ExactScalar,
}

impl ClassicalOscillator {
    pub fn new(amplitude_squared: ExactScalar) -> Result<Self> {
        if !amplitude_squared.is_positive() {
            return Err(Error::NonPositiveAmplitude(format_exact(
                &amplitude_squared,
            )));
        }
        Ok(Self { amplitude_squared })
    }

    pub fn amplitude_squared(&self) -> &ExactScalar {
        &self.amplitude_squared
    }

    pub fn amplitude(&self) -> f64 {
        crate::scalar::to_f64(&self.amplitude_squared).sqrt()
    }

    pub fn moment(&self, order: usize) -> ExactScalar {
        classical_moment(&self.amplitude_squared, order)
    }

    /// Time-averaged density `1 / (pi sqrt(A^2 - x^2))` on `(-A, A)`.
    pub fn density(&self, x: f64) -> f64 {
        let a2 = crate::scalar::to_f64(&self.amplitude_squared);
        if x * x >= a2 {
            0.0
        } else {
            1.0 / (PI * (a2 - x * x).sqrt())
        }
    }
}

/// Time average of `(A sin t)^n` over one period: `A^2m C(2m, m) / 4^m`.
pub fn classical_moment(amplitude_squared: &ExactScalar, order: usize) -> ExactScalar {
    if order % 2 == 1 {
        return ExactScalar::zero();
    }
    let m = order / 2;
    let c = ExactScalar::new(
        binomial(2 * m as u64, m as u64),
        num_traits::pow(4.into(), m),
    );
    pow(amplitude_squared, m) * c
}

/// Floating-point counterpart of [`classical_moment`] for real `A`.
pub fn classical_moment_f64(amplitude: f64, order: usize) -> f64 {
    if order % 2 == 1 {
        return 0.0;
    }
    let m = order / 2;
    let c = crate::scalar::to_f64(&ExactScalar::new(
        binomial(2 * m as u64, m as u64),
        num_traits::pow(4.into(), m),
    ));
    amplitude.powi(order as i32) * c
}

/// Periodic trapezoid rule for the time average of `(A sin t)^n`; exact for
/// trigonometric polynomials of degree below `panels`.
pub fn classical_moment_quadrature(amplitude: f64, order: usize, panels: usize) -> f64 {
    let panels = panels.max(16);
    let h = 2.0 * PI / panels as f64;
    let sum: f64 = (0..panels)
        .map(|j| (amplitude * (j as f64 * h).sin()).powi(order as i32))
        .sum();
    sum / panels as f64
}

/// Hamburger positivity of `m_0..m_2M`: the Hankel matrix `H_ij = m_(i+j)`
/// is positive semidefinite.
///
/// Decided exactly by symmetric Gaussian elimination on the rationals. A
/// positive pivot is eliminated; a negative pivot fails; a zero pivot is
/// allowed only when its whole remaining row is zero. This agrees with the
/// leading-minor test whenever the matrix is definite and stays correct on
/// singular boundaries. A trailing odd-order entry is ignored.
pub fn validate_moments(values: &[ExactScalar]) -> bool {
    if values.is_empty() {
        return false;
    }
    let size = (values.len() - 1) / 2 + 1;
    let mut h: Vec<Vec<ExactScalar>> = (0..size)
        .map(|i| (0..size).map(|j| values[i + j].clone()).collect())
        .collect();
    is_psd_in_place(&mut h)
}

pub(crate) fn is_psd_in_place(h: &mut [Vec<ExactScalar>]) -> bool {
    let n = h.len();
    for k in 0..n {
        let pivot = h[k][k].clone();
        if pivot.is_negative() {
            return false;
        }
        if pivot.is_zero() {
            if (k + 1..n).any(|j| !h[k][j].is_zero()) {
                return false;
            }
            continue;
        }
        for i in k + 1..n {
            if h[i][k].is_zero() {
                continue;
            }
            let factor = &h[i][k] / &pivot;
            let (upper, lower) = h.split_at_mut(i);
            for (x, p) in lower[0][k..].iter_mut().zip(&upper[k][k..]) {
                *x -= &factor * p;
            }
        }
    }
    true
}

/// JSON summary `{law, params, moments}` with exact moment strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawSummary {
    pub law: String,
    pub params: BTreeMap<String, String>,
    pub moments: Vec<String>,
}

impl LawSummary {
    pub fn arcsine(max_order: usize) -> Self {
        Self {
            law: "arcsine".into(),
            params: BTreeMap::new(),
            moments: (0..=max_order)
                .map(|n| format_exact(&arcsine_moment(n)))
                .collect(),
        }
    }

    pub fn vacuum_gaussian(max_order: usize) -> Self {
        Self {
            law: "gaussian".into(),
            params: BTreeMap::from([("variance".to_string(), "1/2".to_string())]),
            moments: (0..=max_order)
                .map(|n| format_exact(&vacuum_gaussian_moment(n)))
                .collect(),
        }
    }

    pub fn classical(osc: &ClassicalOscillator, max_order: usize) -> Self {
        Self {
            law: "classical_oscillator".into(),
            params: BTreeMap::from([("A2".to_string(), format_exact(osc.amplitude_squared()))]),
            moments: (0..=max_order)
                .map(|n| format_exact(&osc.moment(n)))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("law summary serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    #[test]
    fn arcsine_moment_examples() {
        assert_eq!(arcsine_moment(0), int(1));
        assert_eq!(arcsine_moment(2), int(1));
        assert_eq!(arcsine_moment(4), ratio(3, 2));
        assert_eq!(arcsine_moment(6), ratio(5, 2));
        assert_eq!(arcsine_moment(8), ratio(35, 8));
        assert_eq!(arcsine_moment(7), int(0));
    }

    #[test]
    fn arcsine_cdf_examples() {
        assert_eq!(arcsine_cdf(0.0), 0.5);
        assert_eq!(arcsine_cdf(SQRT_2), 1.0);
        assert!((arcsine_cdf(1.0) - 0.75).abs() < 1e-15);
        assert_eq!(arcsine_cdf(-5.0), 0.0);
        assert_eq!(arcsine_cdf(5.0), 1.0);
    }

    #[test]
    fn arcsine_cdf_monotone() {
        let mut prev = 0.0;
        for i in -300..=300 {
            let v = arcsine_cdf(i as f64 / 100.0);
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn quantile_inverts_cdf() {
        for i in 1..100 {
            let p = i as f64 / 100.0;
            assert!((arcsine_cdf(arcsine_quantile(p)) - p).abs() < 1e-12);
        }
    }

    #[test]
    fn arcsine_moments_by_quadrature() {
        // Substituting x = sqrt2 sin(theta) turns the arcsine integral into a
        // time average, which the periodic trapezoid rule gets to rounding.
        for order in 0..=12 {
            let q = classical_moment_quadrature(SQRT_2, order, 256);
            let exact = crate::scalar::to_f64(&arcsine_moment(order));
            assert!((q - exact).abs() < 1e-12, "order {order}");
        }
    }

    #[test]
    fn gaussian_examples() {
        assert_eq!(vacuum_gaussian_moment(2), ratio(1, 2));
        assert_eq!(vacuum_gaussian_moment(4), ratio(3, 4));
        assert_eq!(vacuum_gaussian_moment(1), int(0));
        assert_eq!(vacuum_gaussian_moment(0), int(1));
    }

    #[test]
    fn classical_examples() {
        assert_eq!(classical_moment(&int(2), 2), int(1));
        assert_eq!(classical_moment(&int(4), 2), int(2));
        assert_eq!(classical_moment(&int(3), 5), int(0));
        for n in 0..=16 {
            assert_eq!(classical_moment(&int(2), n), arcsine_moment(n));
        }
        assert!(ClassicalOscillator::new(int(0)).is_err());
        assert!(ClassicalOscillator::new(ratio(-1, 2)).is_err());
    }

    #[test]
    fn quadrature_examples() {
        assert!((classical_moment_quadrature(SQRT_2, 4, 256) - 1.5).abs() < 1e-12);
        assert!((classical_moment_quadrature(1.0, 0, 17) - 1.0).abs() < 1e-15);
        assert!(classical_moment_quadrature(SQRT_2, 3, 256).abs() < 1e-14);
        assert!((classical_moment_quadrature(2.0, 2, 256) - 2.0).abs() < 1e-12);
        for n in 0..=12 {
            for panels in [128, 256, 1000] {
                let diff =
                    classical_moment_quadrature(1.3, n, panels) - classical_moment_f64(1.3, n);
                assert!(diff.abs() < 1e-12, "n={n} panels={panels}");
            }
        }
    }

    #[test]
    fn hankel_examples() {
        let arcsine: Vec<_> = (0..=6).map(arcsine_moment).collect();
        assert!(validate_moments(&arcsine));
        assert!(!validate_moments(&[int(1), int(0), int(-1)]));
        assert!(validate_moments(&[int(1)]));
        assert!(!validate_moments(&[]));
    }

    #[test]
    fn hankel_singular_boundaries() {
        // Dirac mass at 0: PSD, singular.
        assert!(validate_moments(&[int(1), int(0), int(0), int(0), int(0)]));
        // Two atoms at +-1: rank 2 Hankel, PSD.
        assert!(validate_moments(&[
            int(1),
            int(0),
            int(1),
            int(0),
            int(1),
            int(0),
            int(1)
        ]));
        // m2 = 0 forces m3 = 0; a nonzero m3 breaks positivity.
        assert!(!validate_moments(&[int(1), int(0), int(0), int(1), int(1)]));
        assert!(validate_moments(&[int(1), int(0), int(0), int(0), int(1)]));
        // Leading minors 1, 1, 0 with a negative later minor.
        assert!(!validate_moments(&[
            int(1),
            int(0),
            int(1),
            int(0),
            int(1),
            int(0),
            int(0)
        ]));
    }

    #[test]
    fn summaries() {
        let s = LawSummary::arcsine(4);
        assert_eq!(
            s.to_json(),
            r#"{"law":"arcsine","params":{},"moments":["1","0","1","0","3/2"]}"#
        );
        let c = LawSummary::classical(&ClassicalOscillator::new(int(4)).unwrap(), 2);
        assert_eq!(c.moments, ["1", "0", "2"]);
        assert_eq!(LawSummary::vacuum_gaussian(2).moments[2], "1/2");
    }
}
