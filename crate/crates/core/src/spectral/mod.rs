//! Uniform-grid Fourier machinery.
//!
//! The continuous transform is `û(ξ) = (2π)^{−n/2} ∫ e^{−i(x,ξ)} u(x) dx`.
//! On the symmetric grid it is a phase-shifted FFT scaled by `Δxⁿ`, so that
//! grid values approximate the integrals rather than raw DFT sums. The torus
//! stands in for `ℝⁿ`; kernels must decay before the cutoff, which
//! [`FrequencyGrid::boundary_magnitude`] measures.

mod field;
mod grid;
mod io;
mod measure;
mod operator;

pub use field::{fourier_forward, fourier_inverse, Field, Frequency, Side, Space, SpatialField, SpectralField};
pub use grid::{AutoGrid, FrequencyGrid, DEFAULT_BOUNDARY_TOL, DEFAULT_POINTS_1D, DEFAULT_POINTS_2D};
pub use io::MAGIC;
pub use measure::{synth_from_multiplier, synth_measure, GriddedMeasure, MeasureDiagnostics, SynthOptions};
pub use operator::{
    apply_multiplier, apply_t, apply_t_convolution, check_commutation, check_contraction,
    convolve_direct_1d, spectral_l2, Applied, CommutationReport, ContractionReport, CurveAt,
    FamilyAt, Multiplier, TAIL_TOL,
};

#[cfg(test)]
mod tests;
