use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::Multiplier;
use crate::error::{input, Error, Result};
use crate::scalar::Real;

/// Default points per axis in one dimension.
pub const DEFAULT_POINTS_1D: usize = 1024;
/// Default points per axis in two dimensions.
pub const DEFAULT_POINTS_2D: usize = 256;
/// Default bound on `|e^{-b}|` at the frequency cutoff.
pub const DEFAULT_BOUNDARY_TOL: f64 = 1e-12;

/// Uniform frequency grid `ξ_k = (k − N/2)·Δξ` per axis; the dual spatial
/// grid is `x_j = (j − N/2)·Δx` with `Δx = 2π/(N·Δξ)`.
///
/// Nodes are stored row-major: the flat index of `(k₀, k₁)` is `k₀·N + k₁`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "T: Real")]
pub struct FrequencyGrid<T> {
    dimension: usize,
    points: usize,
    dxi: T,
}

impl<T: Real> FrequencyGrid<T> {
    pub fn new(dimension: usize, points: usize, dxi: T) -> Result<Self> {
        if !(1..=2).contains(&dimension) {
            return input(format!("grids support dimension 1 or 2, got {dimension}"));
        }
        if points < 2 || !points.is_power_of_two() {
            return input(format!("points per axis must be a power of two ≥ 2, got {points}"));
        }
        if !(dxi > T::zero() && dxi.is_finite()) {
            return input(format!("frequency spacing must be positive, got {dxi}"));
        }
        Ok(Self {
            dimension,
            points,
            dxi,
        })
    }

    pub fn default_points(dimension: usize) -> usize {
        if dimension == 1 {
            DEFAULT_POINTS_1D
        } else {
            DEFAULT_POINTS_2D
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Points per axis `N`.
    pub fn points(&self) -> usize {
        self.points
    }

    pub fn dxi(&self) -> T {
        self.dxi
    }

    pub fn dx(&self) -> T {
        T::TAU() / (T::lit(self.points as f64) * self.dxi)
    }

    /// Total number of nodes `Nⁿ`.
    pub fn len(&self) -> usize {
        self.points.pow(self.dimension as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Spatial period `N·Δx`.
    pub fn extent(&self) -> T {
        T::lit(self.points as f64) * self.dx()
    }

    /// Largest frequency magnitude per axis, `N/2·Δξ`.
    pub fn xi_max(&self) -> T {
        T::lit((self.points / 2) as f64) * self.dxi
    }

    /// `(k − N/2)·h` for axis index `k`.
    #[inline]
    pub fn axis(&self, k: usize, h: T) -> T {
        T::lit(k as f64 - (self.points / 2) as f64) * h
    }

    /// Axis indices of flat node `idx`; unused trailing entries are zero.
    #[inline]
    pub fn indices(&self, idx: usize) -> [usize; 2] {
        if self.dimension == 1 {
            [idx, 0]
        } else {
            [idx / self.points, idx % self.points]
        }
    }

    /// Coordinates of node `idx` at spacing `h`; use `&c[..dimension]`.
    #[inline]
    pub fn node(&self, idx: usize, h: T) -> [T; 2] {
        let [a, b] = self.indices(idx);
        [self.axis(a, h), self.axis(b, h)]
    }

    /// Frequency of node `idx`.
    #[inline]
    pub fn xi(&self, idx: usize) -> [T; 2] {
        self.node(idx, self.dxi)
    }

    /// Spatial position of node `idx`.
    #[inline]
    pub fn x(&self, idx: usize) -> [T; 2] {
        self.node(idx, self.dx())
    }

    /// Flat index of the node at the origin.
    pub fn origin(&self) -> usize {
        let h = self.points / 2;
        if self.dimension == 1 {
            h
        } else {
            h * self.points + h
        }
    }

    /// Whether node `idx` lies on the outermost ring (some axis index is
    /// `0` or `N − 1`).
    pub fn on_boundary(&self, idx: usize) -> bool {
        let last = self.points - 1;
        let ix = self.indices(idx);
        ix[..self.dimension].iter().any(|&k| k == 0 || k == last)
    }

    /// Flat indices of the outermost ring.
    pub fn boundary_nodes(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.on_boundary(i)).collect()
    }

    /// Largest `|m(ξ)|` over the outermost ring.
    pub fn boundary_magnitude<M: Multiplier<T> + ?Sized>(&self, m: &M) -> T {
        let n = self.dimension;
        let last = self.points - 1;
        let mut worst = T::zero();
        // Walking the ring directly keeps this O(N) in two dimensions.
        let mut visit = |a: usize, b: usize| {
            let xi = [self.axis(a, self.dxi), self.axis(b, self.dxi)];
            worst = worst.max(m.multiplier(&xi[..n]).norm());
        };
        if n == 1 {
            visit(0, 0);
            visit(last, 0);
        } else {
            for k in 0..self.points {
                visit(0, k);
                visit(last, k);
                visit(k, 0);
                visit(k, last);
            }
        }
        worst
    }

    /// Chooses `Δξ` for `m` at fixed `N`.
    ///
    /// The decay bound is the smallest `Δξ` whose cutoff satisfies
    /// `|m| ≤ boundary_tol`. The resolution bound is the largest `Δξ` whose
    /// first nonzero frequency still has `|1 − m| ≤ resolution_tol`, which
    /// keeps the spatial period wide compared to the kernel. The larger of
    /// the two is returned. Without decay the result is
    /// [`Error::GridTooSmall`] unless `allow_undecayed` is set.
    pub fn auto<M: Multiplier<T> + ?Sized>(
        m: &M,
        points: usize,
        options: &AutoGrid<T>,
    ) -> Result<Self> {
        let n = m.dimension();
        let probe = |dxi: T| Self::new(n, points, dxi);
        probe(T::one())?;
        let tol = options.boundary_tol;
        let boundary = |dxi: T| probe(dxi).map(|g| g.boundary_magnitude(m)).unwrap_or(T::zero());
        let decay = smallest_passing(|d| boundary(d) <= tol);
        let resolution = largest_passing(|d| {
            (0..n).all(|axis| {
                let mut xi = [T::zero(); 2];
                xi[axis] = d;
                (Complex::new(T::one(), T::zero()) - m.multiplier(&xi[..n])).norm() <= options.resolution_tol
            })
        });
        let dxi = match (decay, resolution) {
            (Some(d), Some(r)) => d.max(r),
            (Some(d), None) => d,
            (None, r) => {
                if !options.allow_undecayed {
                    let widest = T::lit(SEARCH_HI);
                    return Err(Error::GridTooSmall {
                        boundary: boundary(widest).as_f64(),
                        tol: tol.as_f64(),
                    });
                }
                r.unwrap_or_else(T::one)
            }
        };
        probe(dxi)
    }
}

const SEARCH_LO: f64 = 1e-9;
const SEARCH_HI: f64 = 1e6;

/// Smallest `d` in the search range with `pass(d)`, assuming `pass` is
/// monotone from false to true.
fn smallest_passing<T: Real>(pass: impl Fn(T) -> bool) -> Option<T> {
    let mut hi = T::one();
    while !pass(hi) {
        hi = hi * T::lit(2.0);
        if hi > T::lit(SEARCH_HI) {
            return None;
        }
    }
    let mut lo = hi * T::lit(0.5);
    while pass(lo) {
        hi = lo;
        lo = lo * T::lit(0.5);
        if lo < T::lit(SEARCH_LO) {
            return Some(hi);
        }
    }
    for _ in 0..60 {
        let mid = (lo * hi).sqrt();
        if pass(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// Largest `d` with `pass(d)`, assuming `pass` is monotone from true to
/// false. `None` when it never fails in the search range.
fn largest_passing<T: Real>(pass: impl Fn(T) -> bool) -> Option<T> {
    let mut lo = T::lit(SEARCH_LO);
    if !pass(lo) {
        return Some(lo);
    }
    let mut hi = lo * T::lit(2.0);
    while pass(hi) {
        lo = hi;
        hi = hi * T::lit(2.0);
        if hi > T::lit(SEARCH_HI) {
            return None;
        }
    }
    for _ in 0..60 {
        let mid = (lo * hi).sqrt();
        if pass(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

/// Options for [`FrequencyGrid::auto`].
#[derive(Debug, Clone, Copy)]
pub struct AutoGrid<T> {
    pub boundary_tol: T,
    pub resolution_tol: T,
    pub allow_undecayed: bool,
}

impl<T: Real> Default for AutoGrid<T> {
    fn default() -> Self {
        Self {
            boundary_tol: T::lit(DEFAULT_BOUNDARY_TOL),
            resolution_tol: T::lit(0.01),
            allow_undecayed: false,
        }
    }
}
