//! Consistency checks that do not rely on the marching scheme: the PDE
//! residual of a field family and the boundary limits of `T_s`.

use serde::Serialize;

use super::{exact_solution, GoursatProblem, GoursatSolution};
use crate::error::{input, Result};
use crate::scalar::Real;
use crate::spectral::{apply_t, SpatialField};
use crate::symbolcalc::{apply_a, Method};
use crate::timefamily::TimeFamily;

/// A field `v(s, t)` to be tested against `∂²_{st} v = a(s,t;D) v`.
pub trait FieldSource<T: Real> {
    fn family(&self) -> &TimeFamily<T>;
    fn field_at(&self, s: T, t: T) -> Result<SpatialField<T>>;
}

/// The closed-form solution `T_{(s,t)}φ`.
#[derive(Debug, Clone, Copy)]
pub struct ExactSource<'a, T> {
    pub problem: &'a GoursatProblem<T>,
}

impl<T: Real> FieldSource<T> for ExactSource<'_, T> {
    fn family(&self) -> &TimeFamily<T> {
        self.problem.family()
    }

    fn field_at(&self, s: T, t: T) -> Result<SpatialField<T>> {
        exact_solution(self.problem, s, t)
    }
}

/// Assembled numerical solution; `(s, t)` must be a recorded node.
impl<T: Real> FieldSource<T> for GoursatSolution<T> {
    fn family(&self) -> &TimeFamily<T> {
        self.problem().family()
    }

    fn field_at(&self, s: T, t: T) -> Result<SpatialField<T>> {
        match self.locate(s, t) {
            Some((a, b)) => self.assemble(a, b),
            None => input(format!("({s}, {t}) is not a recorded node of the solution")),
        }
    }
}

/// `v = u·(1 + st + sin(s − t))`, which solves nothing of interest.
#[derive(Debug, Clone)]
pub struct NegativeControl<T> {
    pub family: TimeFamily<T>,
    pub base: SpatialField<T>,
}

impl<T: Real> FieldSource<T> for NegativeControl<T> {
    fn family(&self) -> &TimeFamily<T> {
        &self.family
    }

    fn field_at(&self, s: T, t: T) -> Result<SpatialField<T>> {
        let f = T::one() + s * t + (s - t).sin();
        let mut v = self.base.clone();
        v.values_mut().iter_mut().for_each(|x| *x = *x * f);
        Ok(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub steps: [f64; 2],
    /// `max ‖R‖₂/‖a(D)v‖₂` over the points, at each step.
    pub max_relative: [f64; 2],
    pub max_absolute: [f64; 2],
    pub ratio: f64,
    /// Ratio within `4 ± 30%`.
    pub quadratic: bool,
    /// Residual at the finer step below `1e−10` in absolute terms.
    pub vanishing: bool,
    pub accepted: bool,
}

/// Interior sample points at fixed fractions of the rectangle.
pub fn default_residual_points<T: Real>(s_max: T, t_max: T) -> Vec<(T, T)> {
    [(0.5, 0.5), (0.3, 0.7), (0.7, 0.4)]
        .iter()
        .map(|(a, b)| (s_max * T::lit(*a), t_max * T::lit(*b)))
        .collect()
}

fn residual_at<T: Real, F: FieldSource<T> + ?Sized>(src: &F, s: T, t: T, h: T) -> Result<(f64, f64)> {
    if s - h < T::zero() || t - h < T::zero() {
        return input(format!("stencil at ({s}, {t}) with step {h} leaves the quadrant"));
    }
    let pp = src.field_at(s + h, t + h)?;
    let pm = src.field_at(s + h, t - h)?;
    let mp = src.field_at(s - h, t + h)?;
    let mm = src.field_at(s - h, t - h)?;
    let centre = src.field_at(s, t)?;
    let av = apply_a(src.family(), &[s, t], &centre, Method::SetPartition)?.field;
    let scale = T::one() / (T::lit(4.0) * h * h);
    let mut r = av.clone();
    for (k, out) in r.values_mut().iter_mut().enumerate() {
        let fd = (pp.values()[k] - pm.values()[k] - mp.values()[k] + mm.values()[k]) * scale;
        *out = fd - av.values()[k];
    }
    let abs = r.l2_norm().as_f64();
    let den = av.l2_norm().as_f64();
    Ok((abs, if den > 0.0 { abs / den } else { abs }))
}

/// Central mixed difference minus `a(s,t;D)v` at each point, for steps `h`
/// and `h/2`.
pub fn check_residual<T: Real, F: FieldSource<T> + ?Sized>(
    src: &F,
    points: &[(T, T)],
    h: T,
) -> Result<ResidualReport> {
    if points.is_empty() || !(h > T::zero()) {
        return input("residual check needs points and a positive step");
    }
    let steps = [h, h * T::lit(0.5)];
    let mut rel = [0.0f64; 2];
    let mut abs = [0.0f64; 2];
    for (m, hh) in steps.iter().enumerate() {
        for (s, t) in points {
            let (a, r) = residual_at(src, *s, *t, *hh)?;
            abs[m] = abs[m].max(a);
            rel[m] = rel[m].max(r);
        }
    }
    let ratio = if rel[1] > 0.0 { rel[0] / rel[1] } else { f64::NAN };
    let quadratic = (ratio - 4.0).abs() <= 1.2;
    let vanishing = abs[1] <= 1e-10;
    Ok(ResidualReport {
        steps: [steps[0].as_f64(), steps[1].as_f64()],
        max_relative: rel,
        max_absolute: abs,
        ratio,
        quadratic,
        vanishing,
        accepted: quadratic || vanishing,
    })
}

/// Which time tends to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    S,
    T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitSample {
    pub epsilon: f64,
    pub difference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryLimitReport {
    pub coordinate: usize,
    pub samples: Vec<LimitSample>,
    /// Log-log slope of the difference against `ε` over `ε > 0`.
    pub slope: f64,
    /// `max difference/ε`.
    pub bound: f64,
    /// Difference shrinks with every decrease of `ε`.
    pub monotone: bool,
    pub linear: bool,
    /// Difference at `ε = 0`, when sampled.
    pub at_zero: Option<f64>,
    pub passed: bool,
}

/// `‖T_{s|s_j=ε} u − T_{s|s_j=0} u‖₂` for each `ε`.
pub fn check_boundary_limits_general<T: Real>(
    family: &TimeFamily<T>,
    s: &[T],
    coordinate: usize,
    epsilons: &[T],
    u: &SpatialField<T>,
) -> Result<BoundaryLimitReport> {
    if coordinate >= family.times() || s.len() != family.times() {
        return input(format!(
            "coordinate {coordinate} and {} times for a family with {} times",
            s.len(),
            family.times()
        ));
    }
    if epsilons.iter().any(|e| !(*e >= T::zero())) {
        return input("limit offsets must be non-negative");
    }
    let mut base = s.to_vec();
    base[coordinate] = T::zero();
    let limit = apply_t(family, &base, u)?.field;
    let mut samples = Vec::with_capacity(epsilons.len());
    for e in epsilons {
        let mut at = base.clone();
        at[coordinate] = *e;
        let v = apply_t(family, &at, u)?.field;
        let mut d = v.clone();
        d.values_mut()
            .iter_mut()
            .zip(limit.values())
            .for_each(|(x, y)| *x = *x - *y);
        samples.push(LimitSample {
            epsilon: e.as_f64(),
            difference: d.l2_norm().as_f64(),
        });
    }
    let at_zero = samples.iter().find(|p| p.epsilon == 0.0).map(|p| p.difference);
    let mut pos: Vec<LimitSample> = samples.iter().copied().filter(|p| p.epsilon > 0.0).collect();
    pos.sort_by(|a, b| b.epsilon.total_cmp(&a.epsilon));
    let trivial = pos.iter().all(|p| p.difference <= 1e-12);
    let fit: Vec<(f64, f64)> = pos
        .iter()
        .filter(|p| p.difference > 0.0)
        .map(|p| (p.epsilon.ln(), p.difference.ln()))
        .collect();
    let slope = if fit.len() >= 2 {
        let n = fit.len() as f64;
        let mx = fit.iter().map(|p| p.0).sum::<f64>() / n;
        let my = fit.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = fit.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = fit.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    } else {
        f64::NAN
    };
    let monotone = pos.windows(2).all(|w| w[1].difference < w[0].difference);
    let bound = pos.iter().map(|p| p.difference / p.epsilon).fold(0.0, f64::max);
    let linear = (slope - 1.0).abs() <= 0.1;
    let zero_ok = at_zero.is_none_or(|d| d <= 1e-12);
    Ok(BoundaryLimitReport {
        coordinate,
        samples,
        slope,
        bound,
        monotone,
        linear,
        at_zero,
        passed: zero_ok && (trivial || (linear && monotone)),
    })
}

/// Boundary limit of the solution as one time tends to zero with the
/// other held at `other`.
pub fn check_boundary_limits<T: Real>(
    p: &GoursatProblem<T>,
    axis: Axis,
    other: T,
    epsilons: &[T],
) -> Result<BoundaryLimitReport> {
    let (s, j) = match axis {
        Axis::S => ([T::zero(), other], 0),
        Axis::T => ([other, T::zero()], 1),
    };
    check_boundary_limits_general(p.family(), &s, j, epsilons, p.datum())
}
