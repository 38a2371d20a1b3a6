use std::marker::PhantomData;

use num_complex::Complex;
use rayon::prelude::*;

use super::FrequencyGrid;
use crate::error::{input, Result};
use crate::random::CounterRng;
use crate::scalar::{FftDirection, Real};

/// Which side of the transform a field lives on.
pub trait Side: Copy + Send + Sync + std::fmt::Debug + 'static {
    /// One-byte tag used by the binary format.
    const TAG: u8;
    const NAME: &'static str;

    /// Node spacing on this side.
    fn spacing<T: Real>(grid: &FrequencyGrid<T>) -> T;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Space;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Frequency;

impl Side for Space {
    const TAG: u8 = b'X';
    const NAME: &'static str = "space";

    fn spacing<T: Real>(grid: &FrequencyGrid<T>) -> T {
        grid.dx()
    }
}

impl Side for Frequency {
    const TAG: u8 = b'K';
    const NAME: &'static str = "frequency";

    fn spacing<T: Real>(grid: &FrequencyGrid<T>) -> T {
        grid.dxi()
    }
}

/// Complex samples on the nodes of a grid, on one side of the transform.
#[derive(Debug, Clone, PartialEq)]
pub struct Field<T, S> {
    grid: FrequencyGrid<T>,
    values: Vec<Complex<T>>,
    side: PhantomData<S>,
}

pub type SpatialField<T> = Field<T, Space>;
pub type SpectralField<T> = Field<T, Frequency>;

impl<T: Real, S: Side> Field<T, S> {
    pub fn new(grid: FrequencyGrid<T>, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != grid.len() {
            return input(format!(
                "field has {} values, grid has {} nodes",
                values.len(),
                grid.len()
            ));
        }
        Ok(Self::from_parts(grid, values))
    }

    pub(crate) fn from_parts(grid: FrequencyGrid<T>, values: Vec<Complex<T>>) -> Self {
        Self {
            grid,
            values,
            side: PhantomData,
        }
    }

    pub fn zeros(grid: FrequencyGrid<T>) -> Self {
        Self::from_parts(grid, vec![Complex::new(T::zero(), T::zero()); grid.len()])
    }

    /// Samples `f` at the node coordinates of this side.
    pub fn from_fn<F>(grid: FrequencyGrid<T>, f: F) -> Self
    where
        F: Fn(&[T]) -> Complex<T> + Sync,
    {
        let h = S::spacing(&grid);
        let n = grid.dimension();
        let values = (0..grid.len())
            .into_par_iter()
            .map(|i| f(&grid.node(i, h)[..n]))
            .collect();
        Self::from_parts(grid, values)
    }

    pub fn from_real_fn<F>(grid: FrequencyGrid<T>, f: F) -> Self
    where
        F: Fn(&[T]) -> T + Sync,
    {
        Self::from_fn(grid, |c| Complex::new(f(c), T::zero()))
    }

    pub fn grid(&self) -> &FrequencyGrid<T> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex<T>> {
        self.values
    }

    pub fn spacing(&self) -> T {
        S::spacing(&self.grid)
    }

    /// Coordinates of node `idx` on this side.
    pub fn coords(&self, idx: usize) -> [T; 2] {
        self.grid.node(idx, self.spacing())
    }

    /// Quadrature weight `hⁿ`.
    pub fn cell(&self) -> T {
        self.spacing().powi(self.grid.dimension() as i32)
    }

    /// Discrete `L²` norm `(Σ |v|² hⁿ)^{1/2}`.
    pub fn l2_norm(&self) -> T {
        (sum_sq(&self.values) * self.cell()).sqrt()
    }

    pub fn sup_norm(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.norm()))
    }

    /// `‖self − other‖₂ / ‖other‖₂`, or the absolute norm when `other` is 0.
    pub fn relative_l2_distance(&self, other: &Self) -> T {
        let num: Vec<Complex<T>> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        let den = sum_sq(&other.values);
        let num = sum_sq(&num);
        if den > T::zero() {
            (num / den).sqrt()
        } else {
            (num * self.cell()).sqrt()
        }
    }
}

impl<T: Real> SpatialField<T> {
    /// Deterministic sum of modulated Gaussian bumps: widths in `[0.5, 1.5]`,
    /// centres within an eighth of the period, carrier frequencies in
    /// `[−2, 2]`. Band-limited whenever `N·Δξ/2 ≳ 14`.
    pub fn random_smooth(grid: FrequencyGrid<T>, seed: u64) -> Self {
        let rng = CounterRng::new(seed);
        let n = grid.dimension();
        let reach = grid.extent().as_f64() / 8.0;
        let bumps: Vec<[f64; 7]> = (0..4u64)
            .map(|b| {
                let u = |k: u64| rng.uniform_at(16 * b + k);
                [
                    0.5 + u(0),
                    reach * (2.0 * u(1) - 1.0),
                    reach * (2.0 * u(2) - 1.0),
                    4.0 * u(3) - 2.0,
                    4.0 * u(4) - 2.0,
                    2.0 * u(5) - 1.0,
                    std::f64::consts::TAU * u(6),
                ]
            })
            .collect();
        Self::from_fn(grid, |x| {
            let mut acc = Complex::new(0.0, 0.0);
            for [w, c0, c1, k0, k1, amp, phase] in &bumps {
                let centre = [*c0, *c1];
                let carrier = [*k0, *k1];
                let (mut r2, mut ang) = (0.0, *phase);
                for d in 0..n {
                    let y = x[d].as_f64() - centre[d];
                    r2 += y * y;
                    ang += carrier[d] * y;
                }
                acc += Complex::from_polar(*amp * (-r2 / (2.0 * w * w)).exp(), ang);
            }
            Complex::new(T::lit(acc.re), T::lit(acc.im))
        })
    }
}

/// Sum of `|v|²` in a fixed order, so results do not depend on threads.
pub(crate) fn sum_sq<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().fold(T::zero(), |a, z| a + z.norm_sqr())
}

/// Unnormalised FFT along every axis of a row-major `Nⁿ` buffer.
pub(crate) fn fft_nd<T: Real>(buf: &mut [Complex<T>], points: usize, dim: usize, dir: FftDirection) {
    if dim == 1 {
        T::fft(buf, dir);
        return;
    }
    buf.par_chunks_mut(points).for_each(|row| T::fft(row, dir));
    transpose_square(buf, points);
    buf.par_chunks_mut(points).for_each(|row| T::fft(row, dir));
    transpose_square(buf, points);
}

fn transpose_square<T: Copy>(buf: &mut [T], n: usize) {
    for r in 0..n {
        for c in r + 1..n {
            buf.swap(r * n + c, c * n + r);
        }
    }
}

/// `(−1)^{Σ indices}` for node `idx`.
#[inline]
fn checker<T: Real>(grid: &FrequencyGrid<T>, idx: usize) -> bool {
    let ix = grid.indices(idx);
    (ix[0] + ix[1]) % 2 == 1
}

fn transform<T: Real>(
    grid: &FrequencyGrid<T>,
    values: &[Complex<T>],
    scale: T,
    dir: FftDirection,
) -> Vec<Complex<T>> {
    let n = grid.dimension();
    let mut buf: Vec<Complex<T>> = values
        .iter()
        .enumerate()
        .map(|(i, v)| if checker(grid, i) { -v } else { *v })
        .collect();
    fft_nd(&mut buf, grid.points(), n, dir);
    // The post-phase is (−1)^{Σk + n·N/2}.
    let flip = (n * grid.points() / 2) % 2 == 1;
    buf.par_iter_mut().enumerate().for_each(|(i, v)| {
        let s = if checker(grid, i) != flip { -scale } else { scale };
        *v = *v * s;
    });
    buf
}

/// `û(ξ) = (2π)^{−n/2} ∫ e^{−i(x,ξ)} u(x) dx` on the grid.
pub fn fourier_forward<T: Real>(u: &SpatialField<T>) -> SpectralField<T> {
    let g = u.grid;
    let n = g.dimension() as i32;
    let scale = (g.dx() / T::TAU().sqrt()).powi(n);
    Field::from_parts(g, transform(&g, &u.values, scale, FftDirection::Forward))
}

/// `u(x) = (2π)^{−n/2} ∫ e^{i(x,ξ)} û(ξ) dξ` on the grid.
pub fn fourier_inverse<T: Real>(u_hat: &SpectralField<T>) -> SpatialField<T> {
    let g = u_hat.grid;
    let n = g.dimension() as i32;
    let scale = (g.dxi() / T::TAU().sqrt()).powi(n);
    Field::from_parts(g, transform(&g, &u_hat.values, scale, FftDirection::Inverse))
}
