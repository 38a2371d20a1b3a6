use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use super::field::{fft_nd, fourier_forward, fourier_inverse, sum_sq};
use super::{Field, GriddedMeasure, SpatialField};
use crate::error::{input, Result};
use crate::scalar::{FftDirection, Real};
use crate::timefamily::{RestrictedFamily, TimeFamily, TimePartials};

/// Relative spectral tail above which an input counts as not band-limited.
pub const TAIL_TOL: f64 = 1e-10;

/// A Fourier multiplier `m(ξ)`.
pub trait Multiplier<T: Real>: Sync {
    fn dimension(&self) -> usize;

    fn multiplier(&self, xi: &[T]) -> Complex<T>;

    /// `true` only when `m ≡ 1` is known symbolically.
    fn is_identity(&self) -> bool {
        false
    }

    /// Whether results get the looser heavy-tail tolerances.
    fn heavy_tailed(&self) -> bool {
        false
    }
}

/// `e^{−b(s; ξ)}` for a fixed time vector.
#[derive(Debug, Clone)]
pub struct FamilyAt<'a, T> {
    family: &'a TimeFamily<T>,
    s: Vec<T>,
}

impl<T: Real> TimeFamily<T> {
    /// The operator `T_s` as a multiplier. Fails on negative times.
    pub fn at(&self, s: &[T]) -> Result<FamilyAt<'_, T>> {
        self.check_times(s)?;
        Ok(FamilyAt {
            family: self,
            s: s.to_vec(),
        })
    }
}

impl<T: Real> FamilyAt<'_, T> {
    pub fn times(&self) -> &[T] {
        &self.s
    }

    pub fn family(&self) -> &TimeFamily<T> {
        self.family
    }
}

impl<T: Real> Multiplier<T> for FamilyAt<'_, T> {
    fn dimension(&self) -> usize {
        self.family.dimension()
    }

    fn multiplier(&self, xi: &[T]) -> Complex<T> {
        (-self.family.freeze(xi).value(&self.s)).exp()
    }

    fn is_identity(&self) -> bool {
        self.s.iter().all(|v| *v == T::zero())
    }

    fn heavy_tailed(&self) -> bool {
        self.family.is_heavy_tailed()
    }
}

/// `e^{−b̃(u; ξ)}` along a restricted curve.
#[derive(Debug, Clone)]
pub struct CurveAt<'a, T> {
    curve: &'a RestrictedFamily<T>,
    u: T,
}

impl<T: Real> RestrictedFamily<T> {
    pub fn at(&self, u: T) -> Result<CurveAt<'_, T>> {
        self.family().check_times(&self.times_at(u))?;
        Ok(CurveAt { curve: self, u })
    }
}

impl<T: Real> Multiplier<T> for CurveAt<'_, T> {
    fn dimension(&self) -> usize {
        self.curve.family().dimension()
    }

    fn multiplier(&self, xi: &[T]) -> Complex<T> {
        (-self.curve.eval_unchecked(self.u, xi)).exp()
    }

    fn is_identity(&self) -> bool {
        self.curve.times_at(self.u).iter().all(|v| *v == T::zero())
    }

    fn heavy_tailed(&self) -> bool {
        self.curve.family().is_heavy_tailed()
    }
}

/// A field produced by an operator, plus its input diagnostics.
#[derive(Debug, Clone)]
pub struct Applied<T> {
    pub field: SpatialField<T>,
    /// `max |û|` on the outer frequency ring relative to `max |û|`.
    pub tail_ratio: T,
    pub warnings: Vec<String>,
}

fn check_dimension<T: Real, M: Multiplier<T> + ?Sized>(m: &M, u: &SpatialField<T>) -> Result<()> {
    if m.dimension() != u.grid().dimension() {
        return input(format!(
            "operator acts on dimension {}, field has dimension {}",
            m.dimension(),
            u.grid().dimension()
        ));
    }
    Ok(())
}

/// Multiplies `û` by `m` and transforms back.
pub fn apply_multiplier<T: Real, M: Multiplier<T> + ?Sized>(
    m: &M,
    u: &SpatialField<T>,
) -> Result<Applied<T>> {
    check_dimension(m, u)?;
    let mut u_hat = fourier_forward(u);
    let grid = *u.grid();
    let peak = u_hat.sup_norm();
    let tail = grid
        .boundary_nodes()
        .into_iter()
        .fold(T::zero(), |a, i| a.max(u_hat.values()[i].norm()));
    let tail_ratio = if peak > T::zero() { tail / peak } else { T::zero() };
    let mut warnings = Vec::new();
    if tail_ratio > T::lit(TAIL_TOL) {
        warnings.push(format!(
            "input is not band-limited on this grid: spectral tail ratio {tail_ratio:.3e}"
        ));
    }
    if m.is_identity() {
        return Ok(Applied {
            field: u.clone(),
            tail_ratio,
            warnings,
        });
    }
    let n = grid.dimension();
    u_hat
        .values_mut()
        .par_iter_mut()
        .enumerate()
        .for_each(|(i, v)| *v = *v * m.multiplier(&grid.xi(i)[..n]));
    Ok(Applied {
        field: fourier_inverse(&u_hat),
        tail_ratio,
        warnings,
    })
}

/// `T_s u` as a Fourier multiplier.
pub fn apply_t<T: Real>(family: &TimeFamily<T>, s: &[T], u: &SpatialField<T>) -> Result<Applied<T>> {
    apply_multiplier(&family.at(s)?, u)
}

/// Periodic convolution `∫ u(x − y) μ(dy)` with the gridded density.
pub fn apply_t_convolution<T: Real>(
    measure: &GriddedMeasure<T>,
    u: &SpatialField<T>,
) -> Result<SpatialField<T>> {
    let g = *measure.grid();
    if g != *u.grid() {
        return input("measure and field live on different grids");
    }
    let (n, np) = (g.dimension(), g.points());
    let h = np / 2;
    let cell = g.dx().powi(n as i32);
    // Re-index the density so that y = 0 sits at flat index 0.
    let mut kernel = vec![Complex::new(T::zero(), T::zero()); g.len()];
    for (i, p) in measure.density().iter().enumerate() {
        let ix = g.indices(i);
        let j = if n == 1 {
            (ix[0] + h) % np
        } else {
            ((ix[0] + h) % np) * np + (ix[1] + h) % np
        };
        kernel[j] = Complex::new(*p * cell, T::zero());
    }
    let mut buf = u.values().to_vec();
    fft_nd(&mut kernel, np, n, FftDirection::Forward);
    fft_nd(&mut buf, np, n, FftDirection::Forward);
    let norm = T::one() / T::lit(g.len() as f64);
    buf.par_iter_mut()
        .zip(kernel.par_iter())
        .for_each(|(a, k)| *a = *a * *k * norm);
    fft_nd(&mut buf, np, n, FftDirection::Inverse);
    Ok(Field::from_parts(g, buf))
}

/// Direct `O(N²)` periodic convolution in one dimension; reference for
/// [`apply_t_convolution`].
pub fn convolve_direct_1d<T: Real>(
    measure: &GriddedMeasure<T>,
    u: &SpatialField<T>,
) -> Result<SpatialField<T>> {
    let g = *measure.grid();
    if g != *u.grid() || g.dimension() != 1 {
        return input("direct convolution needs matching one-dimensional grids");
    }
    let np = g.points();
    let dx = g.dx();
    let p = measure.density();
    let out = (0..np)
        .into_par_iter()
        .map(|j| {
            (0..np).fold(Complex::new(T::zero(), T::zero()), |acc, l| {
                let src = (j + np + np / 2 - l) % np;
                acc + u.values()[src] * (p[l] * dx)
            })
        })
        .collect();
    Ok(Field::from_parts(g, out))
}

const CONTRACTION_L2_SLACK: f64 = 1e-12;
const CONTRACTION_SUP_SLACK: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct ContractionReport {
    pub l2_in: f64,
    pub l2_out: f64,
    pub sup_in: f64,
    pub sup_out: f64,
    pub l2_ok: bool,
    pub sup_ok: bool,
    pub passed: bool,
}

/// Checks `‖Tu‖ ≤ ‖u‖` in `L²` and on grid values.
pub fn check_contraction<T: Real, M: Multiplier<T> + ?Sized>(
    m: &M,
    u: &SpatialField<T>,
) -> Result<ContractionReport> {
    let out = apply_multiplier(m, u)?.field;
    let (l2_in, l2_out) = (u.l2_norm().as_f64(), out.l2_norm().as_f64());
    let (sup_in, sup_out) = (u.sup_norm().as_f64(), out.sup_norm().as_f64());
    let l2_ok = l2_out <= l2_in * (1.0 + CONTRACTION_L2_SLACK);
    let sup_ok = sup_out <= sup_in * (1.0 + CONTRACTION_SUP_SLACK);
    Ok(ContractionReport {
        l2_in,
        l2_out,
        sup_in,
        sup_out,
        l2_ok,
        sup_ok,
        passed: l2_ok && sup_ok,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CommutationReport {
    /// `‖T_a T_b u − T_b T_a u‖₂ / ‖T_a T_b u‖₂`.
    pub relative_difference: f64,
}

pub fn check_commutation<T: Real, A, B>(a: &A, b: &B, u: &SpatialField<T>) -> Result<CommutationReport>
where
    A: Multiplier<T> + ?Sized,
    B: Multiplier<T> + ?Sized,
{
    let ab = apply_multiplier(a, &apply_multiplier(b, u)?.field)?.field;
    let ba = apply_multiplier(b, &apply_multiplier(a, u)?.field)?.field;
    Ok(CommutationReport {
        relative_difference: ba.relative_l2_distance(&ab).as_f64(),
    })
}

/// `‖u‖₂` computed on the frequency side; equal to the spatial norm by
/// Parseval.
pub fn spectral_l2<T: Real>(u: &SpatialField<T>) -> T {
    let u_hat = fourier_forward(u);
    (sum_sq(u_hat.values()) * u_hat.cell()).sqrt()
}
