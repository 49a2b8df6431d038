//! Floating-point spectral reconstruction of number-state position laws.
//!
//! The position law of `Phi_N` is the spectral measure of the Jacobi matrix
//! at row `N`. Truncating to `K` levels gives a discrete measure whose low
//! moments are exact; for the standard oscillator the Hermite closed form
//! gives the continuous law to compare against.

mod hermite;
mod measure;
mod tridiag;

pub use hermite::{
    hermite_density_grid, hermite_spectrum_gap, hermite_state_cdf, hermite_state_density,
    hermite_support_radius, SMOOTHING_WIDTH,
};
pub use measure::{
    default_dimension, jump_bracket_violation, ks_distance, ks_distance_to_arcsine, lossless_order,
    reconstruct_state_measure, smoothed_cdf_gap, DiscreteMeasure,
};
pub use tridiag::{
    eigendecompose, truncated_position_matrix, SymTridiagonal, TridiagonalSpectrum, MAX_DIMENSION,
    MAX_SWEEPS,
};
