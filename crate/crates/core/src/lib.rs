//! Multiparameter families of convolution-semigroup-like operators
//! `T_s u = F⁻¹[e^{−b(s;·)} û]` built from negative definite symbols.
//!
//! The numerical core is generic over `f32`/`f64` through [`Real`]; the
//! aliases below fix `f64`.

// `!(x > 0)` is used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod goursat;
pub mod montecarlo;
pub mod random;
pub mod scalar;
pub mod spectral;
pub mod symbolcalc;
pub mod symbols;
pub mod timefamily;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Symbol = symbols::SymbolSpec<f64>;
pub type Family = timefamily::TimeFamily<f64>;
pub type Grid = spectral::FrequencyGrid<f64>;
pub type Spatial = spectral::SpatialField<f64>;
pub type Spectral = spectral::SpectralField<f64>;
pub type Measure = spectral::GriddedMeasure<f64>;
pub type Curve = timefamily::CurveReparametrization<f64>;
pub type Restricted = timefamily::RestrictedFamily<f64>;
pub type Problem = goursat::GoursatProblem<f64>;
pub type Solution = goursat::GoursatSolution<f64>;
pub type Batch = montecarlo::SampleBatch<f64>;
