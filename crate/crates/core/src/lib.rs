//! Exact position moments of interacting Fock space number states and their
//! arcsine limit.
//!
//! For a Jacobi sequence `omega(n)` the position `X = (a + a*) / sqrt 2`
//! has moments `phi_N(X^m)` in the number state `Phi_N` that are rational
//! polynomials in the weights. After scaling by `N` (or `[N]_q`) they tend
//! to the arcsine moments `C(2m, m) / 2^m`.
//!
//! * [`fock`]: Jacobi sequences, q-integers, number states, ladder words.
//! * [`moments`]: the word and tridiagonal engines, envelopes, tables.
//! * [`laws`]: arcsine, vacuum Gaussian and classical oscillator laws,
//!   exact Hankel positivity.
//! * [`spectral`]: eigensolver, discrete spectral measures, KS distance.
//! * [`selfcheck`]: the cross-engine oracle suite.

pub mod error;
pub mod fock;
pub mod laws;
pub mod moments;
pub mod scalar;
pub mod selfcheck;
pub mod spectral;

pub use error::{Error, Result};
pub use fock::{
    enumerate_balanced_words, q_integer, JacobiKind, JacobiSequence, LadderWord, Letter,
    NumberState, ScaleRule, ScaledObservable, WORD_ENUMERATION_CAP,
};
pub use laws::{
    arcsine_cdf, arcsine_density, arcsine_moment, classical_moment, classical_moment_quadrature,
    vacuum_gaussian_moment, validate_moments, ArcsineLaw, ClassicalOscillator, LawSummary,
};
pub use moments::{
    convergence_table, moment_by_tridiagonal, moment_by_words, moment_envelope, scaled_moment,
    unscaled_moments, word_matrix_element, ConvergenceRow, Engine, MomentEnvelope, MomentSequence,
};
pub use scalar::{format_exact, parse_exact, ExactScalar};
pub use spectral::{
    eigendecompose, hermite_state_density, ks_distance_to_arcsine, reconstruct_state_measure,
    truncated_position_matrix, DiscreteMeasure, TridiagonalSpectrum,
};
