//! Continuous negative definite functions `ψ: ℝⁿ → ℂ` with `ψ(0) = 0`.
//!
//! The catalog is closed: every [`SymbolKind`] has a closed-form evaluator,
//! satisfies `ψ(-ξ) = conj ψ(ξ)` and `Re ψ ≥ 0`, and is negative definite.
//! Arbitrary functions can still be fed to the Schoenberg test in
//! [`schoenberg`] through the [`SymbolFn`] trait, which is how broken
//! candidates are exercised.

mod catalog;
mod repr;
pub mod schoenberg;

pub use catalog::catalog;
pub use schoenberg::{check_negative_definite, NegativeDefiniteReport, SchoenbergConfig};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{input, Result};
use crate::scalar::Real;

/// Anything that can be evaluated as a symbol on ℝⁿ.
pub trait SymbolFn<T: Real>: Sync {
    fn dimension(&self) -> usize;

    /// Evaluates without checking `xi.len()`.
    fn eval_at(&self, xi: &[T]) -> Complex<T>;
}

/// Closed-form symbol families.
#[derive(Debug, Clone, PartialEq)]
pub enum SymbolKind<T> {
    /// `|ξ|^α`, `α ∈ (0, 2]`.
    Power { alpha: T },
    /// `ξ·Qξ` with `Q` symmetric positive semidefinite (row-major rows).
    Quadratic { matrix: Vec<Vec<T>> },
    /// `i (c, ξ)`.
    Drift { velocity: Vec<T> },
    /// `√(|ξ|² + m²) − m`, `m > 0`.
    Relativistic { mass: T },
    /// `log(1 + |ξ|²)`.
    LogEuclid,
    /// `ψ(ξ_offset, …, ξ_{offset+d−1})` for an inner symbol on ℝᵈ.
    BlockComponent { inner: Box<SymbolSpec<T>>, offset: usize },
    /// `Σ wⱼ ψⱼ(ξ)` with `wⱼ ≥ 0`. An empty list is the zero symbol.
    Combination { terms: Vec<(T, SymbolSpec<T>)> },
}

/// A validated catalog symbol on ℝⁿ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "repr::SymbolRepr<T>",
    into = "repr::SymbolRepr<T>",
    bound = "T: Real"
)]
pub struct SymbolSpec<T> {
    kind: SymbolKind<T>,
    dimension: usize,
}

impl<T: Real> SymbolSpec<T> {
    /// Validates `kind` against `dimension`.
    pub fn new(kind: SymbolKind<T>, dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return input("symbol dimension must be positive");
        }
        match &kind {
            SymbolKind::Power { alpha } => {
                if !(*alpha > T::zero() && *alpha <= T::lit(2.0)) {
                    return input(format!("power exponent {alpha} outside (0, 2]"));
                }
            }
            SymbolKind::Quadratic { matrix } => validate_psd(matrix, dimension)?,
            SymbolKind::Drift { velocity } => {
                if velocity.len() != dimension {
                    return input(format!(
                        "drift vector has length {}, expected {dimension}",
                        velocity.len()
                    ));
                }
                if velocity.iter().any(|c| !c.is_finite()) {
                    return input("drift vector must be finite");
                }
            }
            SymbolKind::Relativistic { mass } => {
                if !(*mass > T::zero() && mass.is_finite()) {
                    return input(format!("relativistic mass {mass} must be positive"));
                }
            }
            SymbolKind::LogEuclid => {}
            SymbolKind::BlockComponent { inner, offset } => {
                if offset + inner.dimension > dimension {
                    return input(format!(
                        "block slice {}..{} does not fit in dimension {dimension}",
                        offset,
                        offset + inner.dimension
                    ));
                }
            }
            SymbolKind::Combination { terms } => {
                for (w, s) in terms {
                    if !(*w >= T::zero() && w.is_finite()) {
                        return input(format!("combination weight {w} must be nonnegative"));
                    }
                    if s.dimension != dimension {
                        return input(format!(
                            "combination term has dimension {}, expected {dimension}",
                            s.dimension
                        ));
                    }
                }
            }
        }
        Ok(Self { kind, dimension })
    }

    pub fn power(alpha: T, dimension: usize) -> Result<Self> {
        Self::new(SymbolKind::Power { alpha }, dimension)
    }

    pub fn quadratic(matrix: Vec<Vec<T>>) -> Result<Self> {
        let n = matrix.len();
        Self::new(SymbolKind::Quadratic { matrix }, n)
    }

    pub fn drift(velocity: Vec<T>) -> Result<Self> {
        let n = velocity.len();
        Self::new(SymbolKind::Drift { velocity }, n)
    }

    pub fn relativistic(mass: T, dimension: usize) -> Result<Self> {
        Self::new(SymbolKind::Relativistic { mass }, dimension)
    }

    pub fn log_euclid(dimension: usize) -> Result<Self> {
        Self::new(SymbolKind::LogEuclid, dimension)
    }

    /// Lifts `inner` (on ℝᵈ) to ℝⁿ acting on coordinates `offset..offset+d`.
    pub fn block(inner: SymbolSpec<T>, offset: usize, dimension: usize) -> Result<Self> {
        Self::new(
            SymbolKind::BlockComponent {
                inner: Box::new(inner),
                offset,
            },
            dimension,
        )
    }

    pub fn combination(terms: Vec<(T, SymbolSpec<T>)>, dimension: usize) -> Result<Self> {
        Self::new(SymbolKind::Combination { terms }, dimension)
    }

    /// `w · ψ`.
    pub fn scaled(self, weight: T) -> Result<Self> {
        let n = self.dimension;
        Self::combination(vec![(weight, self)], n)
    }

    /// The identically zero symbol.
    pub fn zero(dimension: usize) -> Result<Self> {
        Self::combination(Vec::new(), dimension)
    }

    pub fn kind(&self) -> &SymbolKind<T> {
        &self.kind
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Evaluates `ψ(ξ)`.
    pub fn eval(&self, xi: &[T]) -> Result<Complex<T>> {
        if xi.len() != self.dimension {
            return input(format!(
                "frequency has dimension {}, symbol expects {}",
                xi.len(),
                self.dimension
            ));
        }
        Ok(self.eval_unchecked(xi))
    }

    pub(crate) fn eval_unchecked(&self, xi: &[T]) -> Complex<T> {
        let zero = T::zero();
        match &self.kind {
            SymbolKind::Power { alpha } => {
                let r2 = norm_sq(xi);
                Complex::new(r2.powf(*alpha / T::lit(2.0)), zero)
            }
            SymbolKind::Quadratic { matrix } => {
                let mut acc = zero;
                for (row, xj) in matrix.iter().zip(xi) {
                    let mut inner = zero;
                    for (q, xk) in row.iter().zip(xi) {
                        inner = inner + *q * *xk;
                    }
                    acc = acc + *xj * inner;
                }
                Complex::new(acc, zero)
            }
            SymbolKind::Drift { velocity } => {
                let dot = velocity
                    .iter()
                    .zip(xi)
                    .fold(zero, |acc, (c, x)| acc + *c * *x);
                Complex::new(zero, dot)
            }
            SymbolKind::Relativistic { mass } => {
                // Rationalised form keeps ψ(0) = 0 exactly and avoids cancellation.
                let r2 = norm_sq(xi);
                Complex::new(r2 / ((r2 + *mass * *mass).sqrt() + *mass), zero)
            }
            SymbolKind::LogEuclid => Complex::new(norm_sq(xi).ln_1p(), zero),
            SymbolKind::BlockComponent { inner, offset } => {
                inner.eval_unchecked(&xi[*offset..*offset + inner.dimension])
            }
            SymbolKind::Combination { terms } => terms
                .iter()
                .fold(Complex::new(zero, zero), |acc, (w, s)| {
                    acc + s.eval_unchecked(xi) * *w
                }),
        }
    }

    /// True for kinds whose measures have algebraic spatial tails or weak
    /// spectral decay (`|ξ|^α` with `α ≤ 1`, `log(1+|ξ|²)`). Such families
    /// are held to the looser heavy-tail tolerance tier.
    pub fn is_heavy_tailed(&self) -> bool {
        match &self.kind {
            SymbolKind::Power { alpha } => *alpha <= T::one(),
            SymbolKind::LogEuclid => true,
            SymbolKind::BlockComponent { inner, .. } => inner.is_heavy_tailed(),
            SymbolKind::Combination { terms } => terms
                .iter()
                .any(|(w, s)| *w > T::zero() && s.is_heavy_tailed()),
            _ => false,
        }
    }

    /// True when the symbol is structurally zero (empty or all-zero-weight
    /// combination, recursively).
    pub fn is_zero(&self) -> bool {
        match &self.kind {
            SymbolKind::Combination { terms } => {
                terms.iter().all(|(w, s)| *w == T::zero() || s.is_zero())
            }
            SymbolKind::BlockComponent { inner, .. } => inner.is_zero(),
            SymbolKind::Drift { velocity } => velocity.iter().all(|c| *c == T::zero()),
            SymbolKind::Quadratic { matrix } => matrix.iter().flatten().all(|q| *q == T::zero()),
            _ => false,
        }
    }
}

impl<T: Real> SymbolFn<T> for SymbolSpec<T> {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn eval_at(&self, xi: &[T]) -> Complex<T> {
        self.eval_unchecked(xi)
    }
}

#[inline]
pub(crate) fn norm_sq<T: Real>(xi: &[T]) -> T {
    xi.iter().fold(T::zero(), |acc, x| acc + *x * *x)
}

fn validate_psd<T: Real>(matrix: &[Vec<T>], dimension: usize) -> Result<()> {
    if matrix.len() != dimension || matrix.iter().any(|r| r.len() != dimension) {
        return input(format!("quadratic form must be {dimension}x{dimension}"));
    }
    let scale = matrix
        .iter()
        .flatten()
        .fold(0.0_f64, |m, q| m.max(q.as_f64().abs()));
    if !scale.is_finite() {
        return input("quadratic form must be finite");
    }
    if (0..dimension).any(|j| (0..j).any(|k| matrix[j][k] != matrix[k][j])) {
        return input("quadratic form must be symmetric");
    }
    let m = nalgebra::DMatrix::from_fn(dimension, dimension, |j, k| matrix[j][k].as_f64());
    let min_eig = m
        .symmetric_eigenvalues()
        .iter()
        .fold(f64::INFINITY, |a, &b| a.min(b));
    if min_eig < -1e-12 * scale.max(1.0) {
        return input(format!(
            "quadratic form is not positive semidefinite (min eigenvalue {min_eig:.3e})"
        ));
    }
    Ok(())
}
