//! The derived symbol `a(s; ξ) = e^{b} ∂ᵏ/∂s₁…∂s_k e^{−b}`.
//!
//! Differentiating `e^{−b}` once in every time variable produces one term
//! per set partition `P` of `{1…k}`:
//!
//! ```text
//! a = Σ_P Π_{B∈P} (−∂_B b)
//! ```
//!
//! For `k = 2` this is `∂_s b ∂_t b − ∂²_{st} b`.

mod partitions;

pub use partitions::set_partitions;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::scalar::Real;
use crate::spectral::{fourier_forward, fourier_inverse, Applied, Multiplier, SpatialField};
use crate::timefamily::{FamilyKind, Frozen, TimeFamily, TimePartials};

/// Default finite-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-3;
/// Admissible `|a·û|` on the outer frequency ring relative to its peak.
pub const APPLY_A_TAIL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    SetPartition,
    ClosedForm,
    FiniteDifference,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::SetPartition => "set_partition",
            Method::ClosedForm => "closed_form",
            Method::FiniteDifference => "finite_difference",
        }
    }
}

/// `a` from exact partials of a frozen family.
pub fn a_from_partials<T: Real, P: TimePartials<T> + ?Sized>(p: &P, s: &[T]) -> Result<Complex<T>> {
    let k = p.times();
    let zero = Complex::new(T::zero(), T::zero());
    let mut neg = [zero; 1 << crate::timefamily::MAX_TIMES];
    for mask in 1..(1u32 << k) {
        neg[mask as usize] = -p.partial(mask, s)?;
    }
    Ok(set_partitions(k).iter().fold(zero, |acc, part| {
        acc + part
            .iter()
            .fold(Complex::new(T::one(), T::zero()), |prod, b| prod * neg[*b as usize])
    }))
}

/// Set-partition expansion with exact partials, falling back to finite
/// differences where a partial is not available analytically.
pub fn eval_a_setpartition<T: Real>(family: &TimeFamily<T>, s: &[T], xi: &[T]) -> Result<Complex<T>> {
    family.check_args(s, xi)?;
    family.check_times(s)?;
    match a_from_partials(&family.freeze(xi), s) {
        Err(Error::Capability(_)) => {
            Ok(eval_a_fd(family, s, xi, T::lit(DEFAULT_FD_STEP))?.value)
        }
        other => other,
    }
}

/// Five-term closed form for `b = sψ₁ + tψ₂ + d`, `d = c(s,t)ψ₃`:
/// `ψ₁ψ₂ + ψ₁∂_t d + ψ₂∂_s d + ∂_s d ∂_t d − ∂²_{st} d`.
pub fn eval_a_closed<T: Real>(family: &TimeFamily<T>, s: T, t: T, xi: &[T]) -> Result<Complex<T>> {
    let FamilyKind::Interaction {
        psi1,
        psi2,
        psi3,
        coupling,
    } = family.kind()
    else {
        return input("the closed form applies to interaction families only");
    };
    family.check_args(&[s, t], xi)?;
    family.check_times(&[s, t])?;
    let (p1, p2, p3) = (psi1.eval(xi)?, psi2.eval(xi)?, psi3.eval(xi)?);
    let ds = p3 * coupling.d_s(s, t);
    let dt = p3 * coupling.d_t(s, t);
    let dst = p3 * coupling.d_st(s, t);
    Ok(p1 * p2 + p1 * dt + p2 * ds + ds * dt - dst)
}

/// Central tensor stencil result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdValue<T> {
    pub value: Complex<T>,
    /// Whether the stencil reached negative times (evaluated by analytic
    /// continuation of the family formulas).
    pub negative_times: bool,
}

/// `Σ_ε (Πε) e^{−(b(s+hε) − b(s))} / (2h)ᵏ` over `ε ∈ {±1}ᵏ`.
pub fn eval_a_fd<T: Real>(family: &TimeFamily<T>, s: &[T], xi: &[T], h: T) -> Result<FdValue<T>> {
    family.check_args(s, xi)?;
    if !(h > T::zero()) {
        return input(format!("finite-difference step must be positive, got {h}"));
    }
    let fr = family.freeze(xi);
    Ok(fd_frozen(&fr, s, h))
}

pub(crate) fn fd_frozen<T: Real>(fr: &Frozen<'_, T>, s: &[T], h: T) -> FdValue<T> {
    let k = s.len();
    let b0 = fr.value(s);
    let mut x = s.to_vec();
    let mut acc = Complex::new(T::zero(), T::zero());
    for e in 0..(1u32 << k) {
        let mut sign = T::one();
        for j in 0..k {
            if e & (1 << j) != 0 {
                x[j] = s[j] + h;
            } else {
                x[j] = s[j] - h;
                sign = -sign;
            }
        }
        acc = acc + (b0 - fr.value(&x)).exp() * sign;
    }
    FdValue {
        value: acc / (T::lit(2.0) * h).powi(k as i32),
        negative_times: s.iter().any(|v| *v < h),
    }
}

/// `a(s; ·)` for one family, time vector and method.
#[derive(Debug, Clone)]
pub struct DerivedSymbol<'a, T> {
    family: &'a TimeFamily<T>,
    s: Vec<T>,
    method: Method,
    fd_step: T,
}

impl<'a, T: Real> DerivedSymbol<'a, T> {
    pub fn new(family: &'a TimeFamily<T>, s: &[T], method: Method) -> Result<Self> {
        family.check_times(s)?;
        if method == Method::ClosedForm && !matches!(family.kind(), FamilyKind::Interaction { .. }) {
            return input("the closed form applies to interaction families only");
        }
        Ok(Self {
            family,
            s: s.to_vec(),
            method,
            fd_step: T::lit(DEFAULT_FD_STEP),
        })
    }

    pub fn with_step(mut self, h: T) -> Result<Self> {
        if !(h > T::zero()) {
            return input(format!("finite-difference step must be positive, got {h}"));
        }
        self.fd_step = h;
        Ok(self)
    }

    pub fn family(&self) -> &TimeFamily<T> {
        self.family
    }

    pub fn times(&self) -> usize {
        self.s.len()
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn eval(&self, xi: &[T]) -> Result<Complex<T>> {
        self.family.check_args(&self.s, xi)?;
        Ok(self.eval_unchecked(xi))
    }

    fn eval_unchecked(&self, xi: &[T]) -> Complex<T> {
        let fr = self.family.freeze(xi);
        match self.method {
            Method::SetPartition => a_from_partials(&fr, &self.s)
                .unwrap_or_else(|_| fd_frozen(&fr, &self.s, self.fd_step).value),
            Method::ClosedForm => {
                let p = fr.symbol_values();
                let c = fr.coupling().expect("checked at construction");
                let (s, t) = (self.s[0], self.s[1]);
                let (ds, dt, dst) = (p[2] * c.d_s(s, t), p[2] * c.d_t(s, t), p[2] * c.d_st(s, t));
                p[0] * p[1] + p[0] * dt + p[1] * ds + ds * dt - dst
            }
            Method::FiniteDifference => fd_frozen(&fr, &self.s, self.fd_step).value,
        }
    }
}

impl<T: Real> Multiplier<T> for DerivedSymbol<'_, T> {
    fn dimension(&self) -> usize {
        self.family.dimension()
    }

    fn multiplier(&self, xi: &[T]) -> Complex<T> {
        self.eval_unchecked(xi)
    }
}

/// `a(s; D)u`, the pseudodifferential operator with symbol `a`.
///
/// `a` grows polynomially, so the band-limit condition is checked on the
/// product `a·û` rather than on `û`.
pub fn apply_a<T: Real>(
    family: &TimeFamily<T>,
    s: &[T],
    u: &SpatialField<T>,
    method: Method,
) -> Result<Applied<T>> {
    let a = DerivedSymbol::new(family, s, method)?;
    let g = *u.grid();
    if g.dimension() != family.dimension() {
        return input(format!(
            "family has dimension {}, field has dimension {}",
            family.dimension(),
            g.dimension()
        ));
    }
    let n = g.dimension();
    let mut w = fourier_forward(u);
    w.values_mut()
        .par_iter_mut()
        .enumerate()
        .for_each(|(i, v)| *v = *v * a.eval_unchecked(&g.xi(i)[..n]));
    let peak = w.sup_norm();
    let tail = g
        .boundary_nodes()
        .into_iter()
        .fold(T::zero(), |m, i| m.max(w.values()[i].norm()));
    let tail_ratio = if peak > T::zero() { tail / peak } else { T::zero() };
    let mut warnings = Vec::new();
    if tail_ratio > T::lit(APPLY_A_TAIL_TOL) {
        warnings.push(format!(
            "a·û has not decayed at the frequency cutoff: tail ratio {tail_ratio:.3e}"
        ));
    }
    Ok(Applied {
        field: fourier_inverse(&w),
        tail_ratio,
        warnings,
    })
}
