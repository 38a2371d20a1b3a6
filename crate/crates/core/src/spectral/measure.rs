use num_complex::Complex;
use serde::Serialize;

use super::field::fourier_inverse;
use super::{FrequencyGrid, Multiplier, SpectralField, DEFAULT_BOUNDARY_TOL};
use crate::error::{input, Error, Result};
use crate::scalar::Real;
use crate::timefamily::TimeFamily;

/// Options for [`synth_measure`].
#[derive(Debug, Clone, Copy)]
pub struct SynthOptions<T> {
    /// Admissible `|e^{−b}|` at the frequency cutoff.
    pub boundary_tol: T,
    /// Admissible `|mass − 1|`.
    pub mass_tol: T,
    /// Skip the cutoff check (the result is then only a grid artefact).
    pub allow_undecayed: bool,
}

impl<T: Real> Default for SynthOptions<T> {
    fn default() -> Self {
        Self {
            boundary_tol: T::lit(DEFAULT_BOUNDARY_TOL),
            mass_tol: T::lit(1e-8),
            allow_undecayed: false,
        }
    }
}

/// Density of `μ_s` sampled at the spatial nodes.
#[derive(Debug, Clone)]
pub struct GriddedMeasure<T> {
    grid: FrequencyGrid<T>,
    density: Vec<T>,
    diagnostics: MeasureDiagnostics,
}

#[derive(Debug, Clone, Serialize)]
pub struct MeasureDiagnostics {
    /// `Σ p Δxⁿ`.
    pub mass: f64,
    /// `max(0, −min p)`.
    pub negativity: f64,
    /// Gibbs allowance `1e−8 · max p`.
    pub negativity_tol: f64,
    /// Largest `|Im p|` discarded when taking the real part.
    pub max_imaginary: f64,
    /// Largest `|e^{−b}|` on the outer frequency ring.
    pub boundary_magnitude: f64,
    pub heavy_tailed: bool,
}

impl<T: Real> GriddedMeasure<T> {
    pub fn grid(&self) -> &FrequencyGrid<T> {
        &self.grid
    }

    pub fn density(&self) -> &[T] {
        &self.density
    }

    pub fn diagnostics(&self) -> &MeasureDiagnostics {
        &self.diagnostics
    }

    pub fn mass(&self) -> f64 {
        self.diagnostics.mass
    }

    /// Density at the node nearest to the origin.
    pub fn at_origin(&self) -> T {
        self.density[self.grid.origin()]
    }

    pub(crate) fn from_density(grid: FrequencyGrid<T>, density: Vec<T>) -> Self {
        let cell = grid.dx().powi(grid.dimension() as i32);
        let mass = density.iter().fold(T::zero(), |a, p| a + *p) * cell;
        let max = density.iter().fold(T::zero(), |a, p| a.max(*p));
        let min = density.iter().fold(T::zero(), |a, p| a.min(*p));
        Self {
            grid,
            density,
            diagnostics: MeasureDiagnostics {
                mass: mass.as_f64(),
                negativity: (-min).as_f64(),
                negativity_tol: 1e-8 * max.as_f64(),
                max_imaginary: 0.0,
                boundary_magnitude: 0.0,
                heavy_tailed: false,
            },
        }
    }
}

/// Synthesises the density of the measure with Fourier transform
/// `(2π)^{−n/2} m(ξ)` for an arbitrary multiplier.
pub fn synth_from_multiplier<T: Real, M: Multiplier<T> + ?Sized>(
    m: &M,
    grid: FrequencyGrid<T>,
    options: &SynthOptions<T>,
) -> Result<GriddedMeasure<T>> {
    if m.dimension() != grid.dimension() {
        return input(format!(
            "symbol dimension {} does not match grid dimension {}",
            m.dimension(),
            grid.dimension()
        ));
    }
    let boundary = grid.boundary_magnitude(m);
    if !options.allow_undecayed && boundary > options.boundary_tol {
        return Err(Error::GridTooSmall {
            boundary: boundary.as_f64(),
            tol: options.boundary_tol.as_f64(),
        });
    }
    let n = grid.dimension();
    let norm = T::TAU().powf(T::lit(-0.5 * n as f64));
    let mu_hat: SpectralField<T> = SpectralField::from_fn(grid, |xi| m.multiplier(xi) * norm);
    let p = fourier_inverse(&mu_hat);
    let max_im = p.values().iter().fold(T::zero(), |a, z| a.max(z.im.abs()));
    let density: Vec<T> = p.values().iter().map(|z: &Complex<T>| z.re).collect();
    let mut out = GriddedMeasure::from_density(grid, density);
    out.diagnostics.max_imaginary = max_im.as_f64();
    out.diagnostics.boundary_magnitude = boundary.as_f64();
    out.diagnostics.heavy_tailed = m.heavy_tailed();
    let dev = (out.diagnostics.mass - 1.0).abs();
    if dev > options.mass_tol.as_f64() {
        return Err(Error::Accuracy {
            what: "mass deviation".into(),
            value: dev,
            limit: options.mass_tol.as_f64(),
        });
    }
    Ok(out)
}

/// Density of `μ_s` from `e^{−b(s; ξ)}`.
pub fn synth_measure<T: Real>(
    family: &TimeFamily<T>,
    s: &[T],
    grid: FrequencyGrid<T>,
    options: &SynthOptions<T>,
) -> Result<GriddedMeasure<T>> {
    synth_from_multiplier(&family.at(s)?, grid, options)
}
