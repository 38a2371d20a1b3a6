//! Empirical polynomial growth order of `|∂^σ b(s; ξ)|` in `ξ`.

use serde::Serialize;

use super::{sigma_mask, TimeFamily, TimePartials};
use crate::error::{input, Result};
use crate::scalar::Real;
use crate::symbols::norm_sq;

/// Fit of `|∂^σ b| ≈ C (1 + |ξ|²)^{r/2}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthEstimate<T> {
    pub sigma: Vec<u8>,
    /// `-∞` when the partial vanishes on the whole grid.
    pub r_hat: T,
    pub c_hat: T,
    /// Root-mean-square residual of the log fit.
    pub fit_residual: T,
    /// Number of points that entered the fit.
    pub fit_points: usize,
}

/// `count` log-spaced points `r·e` with `r ∈ [r_min, r_max]` and
/// `e = (1,…,1)/√n`.
pub fn radial_grid<T: Real>(dimension: usize, count: usize, r_min: T, r_max: T) -> Vec<Vec<T>> {
    let e = T::one() / T::lit(dimension as f64).sqrt();
    let (lo, hi) = (r_min.ln(), r_max.ln());
    (0..count)
        .map(|j| {
            let f = if count > 1 {
                T::lit(j as f64 / (count - 1) as f64)
            } else {
                T::zero()
            };
            let r = (lo + (hi - lo) * f).exp();
            vec![r * e; dimension]
        })
        .collect()
}

pub fn estimate_growth<T: Real>(
    family: &TimeFamily<T>,
    sigma: &[u8],
    s: &[T],
    grid: &[Vec<T>],
) -> Result<GrowthEstimate<T>> {
    let mask = sigma_mask(sigma, family.times())?;
    family.check_times(s)?;
    if grid.len() < 8 {
        return input(format!("growth fit needs at least 8 points, got {}", grid.len()));
    }
    if let Some(bad) = grid.iter().find(|xi| xi.len() != family.dimension()) {
        return input(format!(
            "grid point of dimension {} in a family of dimension {}",
            bad.len(),
            family.dimension()
        ));
    }
    let mut pts: Vec<(T, T)> = Vec::with_capacity(grid.len());
    for xi in grid {
        let d = family.freeze(xi).partial(mask, s)?;
        pts.push((norm_sq(xi), d.norm()));
    }
    let radii: Vec<T> = pts
        .iter()
        .map(|p| p.0.sqrt())
        .filter(|r| *r > T::zero())
        .collect();
    let rmin = radii.iter().copied().fold(T::infinity(), T::min);
    let rmax = radii.iter().copied().fold(T::zero(), T::max);
    if radii.is_empty() || rmax < rmin * T::lit(100.0) {
        return input("grid radii must span at least two decades");
    }
    let sentinel = GrowthEstimate {
        sigma: sigma.to_vec(),
        r_hat: T::neg_infinity(),
        c_hat: T::zero(),
        fit_residual: T::zero(),
        fit_points: 0,
    };
    if pts.iter().all(|p| p.1 == T::zero()) {
        return Ok(sentinel);
    }
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    let upper = &pts[pts.len() / 2..];
    let data: Vec<(T, T)> = upper
        .iter()
        .filter(|p| p.1 > T::zero())
        .map(|p| (T::lit(0.5) * p.0.ln_1p(), p.1.ln()))
        .collect();
    if data.len() < 2 {
        return input("partial vanishes on most of the fit window; growth order undefined");
    }
    let m = T::lit(data.len() as f64);
    let mx = data.iter().fold(T::zero(), |a, p| a + p.0) / m;
    let my = data.iter().fold(T::zero(), |a, p| a + p.1) / m;
    let (sxx, sxy) = data.iter().fold((T::zero(), T::zero()), |(a, b), p| {
        let dx = p.0 - mx;
        (a + dx * dx, b + dx * (p.1 - my))
    });
    if sxx <= T::zero() {
        return input("fit window has a single radius");
    }
    let r_hat = sxy / sxx;
    let intercept = my - r_hat * mx;
    let ss = data.iter().fold(T::zero(), |a, p| {
        let e = p.1 - (intercept + r_hat * p.0);
        a + e * e
    });
    Ok(GrowthEstimate {
        sigma: sigma.to_vec(),
        r_hat,
        c_hat: intercept.exp(),
        fit_residual: (ss / m).sqrt(),
        fit_points: data.len(),
    })
}
