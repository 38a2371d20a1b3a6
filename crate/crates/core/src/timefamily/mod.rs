//! Time-parameterised exponents `b(s₁,…,s_k; ξ)`.
//!
//! Every family is affine-in-symbols: for fixed `ξ` the exponent is a
//! combination of a few symbol values with coefficients depending only on
//! `s`. [`TimeFamily::freeze`] evaluates those symbols once, after which
//! values and mixed partials in `s` are cheap. That is what the grid loops in
//! the spectral and Goursat modules rely on.

mod curve;
mod growth;
mod repr;

pub use curve::{CurveReparametrization, RestrictedFamily};
pub use growth::{estimate_growth, radial_grid, GrowthEstimate};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::scalar::Real;
use crate::symbols::SymbolSpec;

/// Largest number of time parameters handled by the derivative machinery.
pub const MAX_TIMES: usize = 5;

/// Shape `c(s,t)` of the interaction term `d(s,t;ξ) = c(s,t)·ψ₃(ξ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coupling {
    /// `c = s·t`
    Product,
    /// `c = (1 − e^{−s})(1 − e^{−t})`
    Saturating,
}

impl Coupling {
    pub fn value<T: Real>(self, s: T, t: T) -> T {
        match self {
            Coupling::Product => s * t,
            Coupling::Saturating => (-(-s).exp_m1()) * (-(-t).exp_m1()),
        }
    }

    pub fn d_s<T: Real>(self, s: T, t: T) -> T {
        match self {
            Coupling::Product => t,
            Coupling::Saturating => (-s).exp() * (-(-t).exp_m1()),
        }
    }

    pub fn d_t<T: Real>(self, s: T, t: T) -> T {
        self.d_s(t, s)
    }

    pub fn d_st<T: Real>(self, s: T, t: T) -> T {
        match self {
            Coupling::Product => T::one(),
            Coupling::Saturating => (-s).exp() * (-t).exp(),
        }
    }
}

/// The variants of `b`.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilyKind<T> {
    /// `b = Σⱼ sⱼ ψⱼ(ξ)`
    Separable { symbols: Vec<SymbolSpec<T>> },
    /// `b = (Πⱼ sⱼ^{mⱼ}) ψ(ξ)`
    Monomial {
        exponents: Vec<u32>,
        symbol: SymbolSpec<T>,
    },
    /// `b = s ψ₁ + t ψ₂ + c(s,t) ψ₃`, two time parameters.
    Interaction {
        psi1: SymbolSpec<T>,
        psi2: SymbolSpec<T>,
        psi3: SymbolSpec<T>,
        coupling: Coupling,
    },
}

/// A validated exponent family: all symbols share one spatial dimension and
/// `1 ≤ k ≤ MAX_TIMES`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "repr::FamilyRepr<T>",
    into = "repr::FamilyRepr<T>",
    bound = "T: Real"
)]
pub struct TimeFamily<T> {
    kind: FamilyKind<T>,
    dimension: usize,
}

impl<T: Real> TimeFamily<T> {
    pub fn new(kind: FamilyKind<T>) -> Result<Self> {
        let dims: Vec<usize> = match &kind {
            FamilyKind::Separable { symbols } => {
                if symbols.is_empty() || symbols.len() > MAX_TIMES {
                    return input(format!(
                        "separable family needs 1..={MAX_TIMES} symbols, got {}",
                        symbols.len()
                    ));
                }
                symbols.iter().map(|s| s.dimension()).collect()
            }
            FamilyKind::Monomial { exponents, symbol } => {
                if exponents.is_empty() || exponents.len() > MAX_TIMES {
                    return input(format!(
                        "monomial family needs 1..={MAX_TIMES} exponents, got {}",
                        exponents.len()
                    ));
                }
                if exponents.iter().all(|&m| m == 0) {
                    return input("monomial family needs a positive exponent so that b(0;ξ) = 0");
                }
                vec![symbol.dimension()]
            }
            FamilyKind::Interaction {
                psi1, psi2, psi3, ..
            } => vec![psi1.dimension(), psi2.dimension(), psi3.dimension()],
        };
        let dimension = dims[0];
        if dims.iter().any(|&d| d != dimension) {
            return input(format!("family symbols disagree on dimension: {dims:?}"));
        }
        Ok(Self { kind, dimension })
    }

    pub fn separable(symbols: Vec<SymbolSpec<T>>) -> Result<Self> {
        Self::new(FamilyKind::Separable { symbols })
    }

    pub fn monomial(exponents: Vec<u32>, symbol: SymbolSpec<T>) -> Result<Self> {
        Self::new(FamilyKind::Monomial { exponents, symbol })
    }

    pub fn interaction(
        psi1: SymbolSpec<T>,
        psi2: SymbolSpec<T>,
        psi3: SymbolSpec<T>,
        coupling: Coupling,
    ) -> Result<Self> {
        Self::new(FamilyKind::Interaction {
            psi1,
            psi2,
            psi3,
            coupling,
        })
    }

    pub fn kind(&self) -> &FamilyKind<T> {
        &self.kind
    }

    /// Spatial dimension `n`.
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Number of time parameters `k`.
    pub fn times(&self) -> usize {
        match &self.kind {
            FamilyKind::Separable { symbols } => symbols.len(),
            FamilyKind::Monomial { exponents, .. } => exponents.len(),
            FamilyKind::Interaction { .. } => 2,
        }
    }

    pub fn is_heavy_tailed(&self) -> bool {
        match &self.kind {
            FamilyKind::Separable { symbols } => symbols.iter().any(|s| s.is_heavy_tailed()),
            FamilyKind::Monomial { symbol, .. } => symbol.is_heavy_tailed(),
            FamilyKind::Interaction {
                psi1, psi2, psi3, ..
            } => psi1.is_heavy_tailed() || psi2.is_heavy_tailed() || psi3.is_heavy_tailed(),
        }
    }

    /// Evaluates the symbols at `xi` (unchecked dimension).
    pub fn freeze(&self, xi: &[T]) -> Frozen<'_, T> {
        let inner = match &self.kind {
            FamilyKind::Separable { symbols } => {
                FrozenKind::Separable(symbols.iter().map(|s| s.eval_unchecked(xi)).collect())
            }
            FamilyKind::Monomial { exponents, symbol } => {
                FrozenKind::Monomial(exponents, symbol.eval_unchecked(xi))
            }
            FamilyKind::Interaction {
                psi1,
                psi2,
                psi3,
                coupling,
            } => FrozenKind::Interaction(
                [
                    psi1.eval_unchecked(xi),
                    psi2.eval_unchecked(xi),
                    psi3.eval_unchecked(xi),
                ],
                *coupling,
            ),
        };
        Frozen { inner }
    }

    pub(crate) fn check_args(&self, s: &[T], xi: &[T]) -> Result<()> {
        if s.len() != self.times() {
            return input(format!(
                "family has {} time parameters, got {}",
                self.times(),
                s.len()
            ));
        }
        if xi.len() != self.dimension {
            return input(format!(
                "frequency has dimension {}, family expects {}",
                xi.len(),
                self.dimension
            ));
        }
        Ok(())
    }

    pub(crate) fn check_times(&self, s: &[T]) -> Result<()> {
        if s.len() != self.times() {
            return input(format!(
                "family has {} time parameters, got {}",
                self.times(),
                s.len()
            ));
        }
        if let Some(bad) = s.iter().find(|v| !(**v >= T::zero()) || !v.is_finite()) {
            return input(format!("time parameters must be finite and nonnegative, got {bad}"));
        }
        Ok(())
    }

    /// `b(s; ξ)` for `s ≥ 0` componentwise.
    pub fn eval_b(&self, s: &[T], xi: &[T]) -> Result<Complex<T>> {
        self.check_args(s, xi)?;
        self.check_times(s)?;
        Ok(self.freeze(xi).value(s))
    }

    /// Mixed partial `∂^σ b(s; ξ)` with `σⱼ ∈ {0, 1}`.
    pub fn partial_b(&self, sigma: &[u8], s: &[T], xi: &[T]) -> Result<Complex<T>> {
        self.check_args(s, xi)?;
        let mask = sigma_mask(sigma, self.times())?;
        self.freeze(xi).partial(mask, s)
    }
}

/// Converts a multi-index with 0/1 entries into a bit mask.
pub fn sigma_mask(sigma: &[u8], k: usize) -> Result<u32> {
    if sigma.len() != k {
        return input(format!("multi-index has length {}, expected {k}", sigma.len()));
    }
    let mut mask = 0u32;
    for (j, &o) in sigma.iter().enumerate() {
        match o {
            0 => {}
            1 => mask |= 1 << j,
            _ => {
                return Err(Error::Capability(format!(
                    "analytic partials only cover first order per time variable, got σ = {sigma:?}"
                )))
            }
        }
    }
    Ok(mask)
}

/// Anything exposing `b` and its first-order-per-variable mixed partials.
pub trait TimePartials<T: Real> {
    fn times(&self) -> usize;

    fn value(&self, s: &[T]) -> Complex<T>;

    /// `∂_B b(s)`, where bit `j` of `mask` selects `∂/∂sⱼ`.
    fn partial(&self, mask: u32, s: &[T]) -> Result<Complex<T>>;
}

#[derive(Debug, Clone)]
enum FrozenKind<'a, T> {
    Separable(Vec<Complex<T>>),
    Monomial(&'a [u32], Complex<T>),
    Interaction([Complex<T>; 3], Coupling),
}

/// A family with its symbols evaluated at one frequency.
#[derive(Debug, Clone)]
pub struct Frozen<'a, T> {
    inner: FrozenKind<'a, T>,
}

impl<T: Real> Frozen<'_, T> {
    /// Symbol values `ψⱼ(ξ)` in declaration order.
    pub fn symbol_values(&self) -> Vec<Complex<T>> {
        match &self.inner {
            FrozenKind::Separable(v) => v.clone(),
            FrozenKind::Monomial(_, p) => vec![*p],
            FrozenKind::Interaction(p, _) => p.to_vec(),
        }
    }

    pub fn coupling(&self) -> Option<Coupling> {
        match &self.inner {
            FrozenKind::Interaction(_, c) => Some(*c),
            _ => None,
        }
    }
}

impl<T: Real> TimePartials<T> for Frozen<'_, T> {
    fn times(&self) -> usize {
        match &self.inner {
            FrozenKind::Separable(v) => v.len(),
            FrozenKind::Monomial(e, _) => e.len(),
            FrozenKind::Interaction(..) => 2,
        }
    }

    fn value(&self, s: &[T]) -> Complex<T> {
        let zero = Complex::new(T::zero(), T::zero());
        match &self.inner {
            FrozenKind::Separable(psi) => psi
                .iter()
                .zip(s)
                .fold(zero, |acc, (p, sj)| acc + p * *sj),
            FrozenKind::Monomial(exps, psi) => {
                let coef = exps
                    .iter()
                    .zip(s)
                    .fold(T::one(), |acc, (m, sj)| acc * sj.powi(*m as i32));
                psi * coef
            }
            FrozenKind::Interaction([p1, p2, p3], c) => {
                p1 * s[0] + p2 * s[1] + p3 * c.value(s[0], s[1])
            }
        }
    }

    fn partial(&self, mask: u32, s: &[T]) -> Result<Complex<T>> {
        let zero = Complex::new(T::zero(), T::zero());
        if mask == 0 {
            return Ok(self.value(s));
        }
        Ok(match &self.inner {
            FrozenKind::Separable(psi) => {
                if mask.count_ones() == 1 {
                    psi[mask.trailing_zeros() as usize]
                } else {
                    zero
                }
            }
            FrozenKind::Monomial(exps, psi) => {
                let mut coef = T::one();
                for (j, (&m, &sj)) in exps.iter().zip(s).enumerate() {
                    if mask & (1 << j) != 0 {
                        if m == 0 {
                            return Ok(zero);
                        }
                        coef = coef * T::lit(m as f64) * sj.powi(m as i32 - 1);
                    } else {
                        coef = coef * sj.powi(m as i32);
                    }
                }
                psi * coef
            }
            FrozenKind::Interaction([p1, p2, p3], c) => {
                let (u, v) = (s[0], s[1]);
                match mask {
                    0b01 => p1 + p3 * c.d_s(u, v),
                    0b10 => p2 + p3 * c.d_t(u, v),
                    0b11 => p3 * c.d_st(u, v),
                    _ => return Err(Error::Capability(format!("mask {mask:#b} out of range"))),
                }
            }
        })
    }
}
