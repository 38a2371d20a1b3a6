//! Restriction of a family to a one-parameter curve in the time quadrant.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{Coupling, FamilyKind, TimeFamily, TimePartials};
use crate::error::{input, Result};
use crate::scalar::Real;

/// The map `u ↦ g(u)` placed on the moving coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "g", rename_all = "snake_case", deny_unknown_fields)]
#[serde(bound = "T: Real")]
pub enum CurveReparametrization<T> {
    Identity,
    Sqrt,
    /// `g(u) = u^β`, `β > 0`.
    AffinePower { beta: T },
}

impl<T: Real> CurveReparametrization<T> {
    pub fn apply(&self, u: T) -> T {
        match self {
            Self::Identity => u,
            Self::Sqrt => u.sqrt(),
            Self::AffinePower { beta } => u.powf(*beta),
        }
    }

    /// The power `p` with `g(u) = u^p`.
    pub fn exponent(&self) -> T {
        match self {
            Self::Identity => T::one(),
            Self::Sqrt => T::lit(0.5),
            Self::AffinePower { beta } => *beta,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Self::AffinePower { beta } if !(*beta > T::zero() && beta.is_finite()) => {
                input(format!("affine power exponent must be positive, got {beta}"))
            }
            _ => Ok(()),
        }
    }
}

/// `b̃(u; ξ) = b(…, g(u), …; ξ)` with the other coordinates frozen.
#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedFamily<T> {
    family: TimeFamily<T>,
    coordinate: usize,
    curve: CurveReparametrization<T>,
    frozen: Vec<T>,
    linear: bool,
}

fn is_one<T: Real>(x: T) -> bool {
    (x - T::one()).abs() <= T::lit(8.0) * T::epsilon()
}

impl<T: Real> TimeFamily<T> {
    /// Moves coordinate `coordinate` (0-based) along `curve`; `frozen` holds
    /// the remaining `k − 1` values in order.
    pub fn restrict_to_curve(
        &self,
        coordinate: usize,
        curve: CurveReparametrization<T>,
        frozen: Vec<T>,
    ) -> Result<RestrictedFamily<T>> {
        let k = self.times();
        if coordinate >= k {
            return input(format!("coordinate {coordinate} out of range for k = {k}"));
        }
        if frozen.len() + 1 != k {
            return input(format!("expected {} frozen values, got {}", k - 1, frozen.len()));
        }
        if let Some(bad) = frozen.iter().find(|v| !(**v >= T::zero()) || !v.is_finite()) {
            return input(format!("frozen values must be finite and nonnegative, got {bad}"));
        }
        curve.validate()?;
        let p = curve.exponent();
        let linear = match self.kind() {
            FamilyKind::Separable { symbols } => {
                let constant_zero = symbols
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != coordinate)
                    .zip(&frozen)
                    .all(|((_, psi), v)| *v == T::zero() || psi.is_zero());
                constant_zero && (symbols[coordinate].is_zero() || is_one(p))
            }
            FamilyKind::Monomial { exponents, symbol } => {
                let others = exponents
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != coordinate)
                    .zip(&frozen)
                    .fold(T::one(), |acc, ((_, m), v)| acc * v.powi(*m as i32));
                let m = exponents[coordinate];
                if symbol.is_zero() || others == T::zero() {
                    true
                } else {
                    m > 0 && is_one(p * T::lit(m as f64))
                }
            }
            FamilyKind::Interaction {
                psi1,
                psi2,
                psi3,
                coupling,
            } => {
                let (moving, other) = if coordinate == 0 { (psi1, psi2) } else { (psi2, psi1) };
                let t0 = frozen[0];
                let constant_zero = t0 == T::zero() || other.is_zero();
                if t0 == T::zero() || psi3.is_zero() {
                    constant_zero && (moving.is_zero() || is_one(p))
                } else {
                    match coupling {
                        Coupling::Product => constant_zero && is_one(p),
                        Coupling::Saturating => false,
                    }
                }
            }
        };
        Ok(RestrictedFamily {
            family: self.clone(),
            coordinate,
            curve,
            frozen,
            linear,
        })
    }
}

impl<T: Real> RestrictedFamily<T> {
    pub fn family(&self) -> &TimeFamily<T> {
        &self.family
    }

    pub fn coordinate(&self) -> usize {
        self.coordinate
    }

    pub fn curve(&self) -> CurveReparametrization<T> {
        self.curve
    }

    pub fn frozen(&self) -> &[T] {
        &self.frozen
    }

    /// Whether `b̃` is linear in `u`, so that the restriction is a
    /// convolution semigroup.
    pub fn is_linear(&self) -> bool {
        self.linear
    }

    /// The full time vector at curve parameter `u`.
    pub fn times_at(&self, u: T) -> Vec<T> {
        let mut s = self.frozen.clone();
        s.insert(self.coordinate, self.curve.apply(u));
        s
    }

    pub fn eval(&self, u: T, xi: &[T]) -> Result<Complex<T>> {
        if !(u >= T::zero()) {
            return input(format!("curve parameter must be nonnegative, got {u}"));
        }
        self.family.eval_b(&self.times_at(u), xi)
    }

    pub(crate) fn eval_unchecked(&self, u: T, xi: &[T]) -> Complex<T> {
        self.family.freeze(xi).value(&self.times_at(u))
    }
}
