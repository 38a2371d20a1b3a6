//! Sampling one-dimensional marginals and checking them against `e^{−b}`.
//!
//! Draws come from the gridded density by inverse-CDF sampling: the density
//! is clamped at zero, renormalised, and treated as constant on each cell,
//! so the cumulative is linear inside cells. Draw `i` depends only on the
//! seed and `i`.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::random::CounterRng;
use crate::scalar::Real;
use crate::spectral::{
    apply_t_convolution, synth_from_multiplier, synth_measure, FrequencyGrid, GriddedMeasure, Multiplier,
    SpatialField, SynthOptions,
};
use crate::timefamily::{RestrictedFamily, TimeFamily};

/// Tolerance class of a check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ToleranceTier {
    Strict,
    HeavyTail,
}

impl ToleranceTier {
    pub fn tolerance(self) -> f64 {
        match self {
            ToleranceTier::Strict => 1e-6,
            ToleranceTier::HeavyTail => 1e-3,
        }
    }

    pub fn for_heavy_tail(heavy: bool) -> Self {
        if heavy {
            ToleranceTier::HeavyTail
        } else {
            ToleranceTier::Strict
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ToleranceTier::Strict => "strict",
            ToleranceTier::HeavyTail => "heavy-tail",
        }
    }
}

/// Family and times a batch was drawn from.
#[derive(Debug, Clone)]
pub struct SampleSource<T> {
    pub family: TimeFamily<T>,
    pub s: Vec<T>,
}

#[derive(Debug, Clone)]
pub struct SampleBatch<T> {
    draws: Vec<T>,
    seed: u64,
    grid: FrequencyGrid<T>,
    /// Mass removed by clamping negative density values.
    clamped_mass: f64,
    boundary_magnitude: f64,
    max_imaginary: f64,
    heavy_tailed: bool,
    source: Option<SampleSource<T>>,
}

impl<T: Real> SampleBatch<T> {
    pub fn draws(&self) -> &[T] {
        &self.draws
    }

    pub fn len(&self) -> usize {
        self.draws.len()
    }

    pub fn is_empty(&self) -> bool {
        self.draws.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn grid(&self) -> &FrequencyGrid<T> {
        &self.grid
    }

    pub fn clamped_mass(&self) -> f64 {
        self.clamped_mass
    }

    pub fn heavy_tailed(&self) -> bool {
        self.heavy_tailed
    }

    pub fn source(&self) -> Option<&SampleSource<T>> {
        self.source.as_ref()
    }

    pub fn with_source(mut self, family: TimeFamily<T>, s: Vec<T>) -> Self {
        self.heavy_tailed |= family.is_heavy_tailed();
        self.source = Some(SampleSource { family, s });
        self
    }

    pub fn mean(&self) -> f64 {
        self.draws.iter().map(|x| x.as_f64()).sum::<f64>() / self.draws.len() as f64
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        let m = self.mean();
        let ss: f64 = self.draws.iter().map(|x| (x.as_f64() - m).powi(2)).sum();
        ss / (self.draws.len() as f64 - 1.0)
    }

    /// Allowance for the deviation of the ECF at `ξ` from `e^{−b}` that is
    /// due to the grid rather than to sampling. It covers cell smoothing
    /// `(|ξ|Δx)²/24`, twice the clamped mass, the discarded imaginary part
    /// and `|e^{−b}|` at the cutoff.
    pub fn grid_bias(&self, xi: f64) -> f64 {
        let dx = self.grid.dx().as_f64();
        let extent = self.grid.extent().as_f64();
        (xi * dx).powi(2) / 24.0 + 2.0 * self.clamped_mass + self.max_imaginary * extent + self.boundary_magnitude
    }
}

/// Inverse-CDF sampling of a one-dimensional gridded density.
pub fn sample_measure<T: Real>(m: &GriddedMeasure<T>, count: usize, seed: u64) -> Result<SampleBatch<T>> {
    let grid = *m.grid();
    if grid.dimension() != 1 {
        return Err(Error::Capability(format!(
            "sampling is implemented for n = 1, not n = {}",
            grid.dimension()
        )));
    }
    if count == 0 {
        return input("sample count must be positive");
    }
    let dx = grid.dx().as_f64();
    let mut cdf = Vec::with_capacity(grid.len());
    let mut acc = 0.0f64;
    let mut clamped = 0.0f64;
    for p in m.density() {
        let p = p.as_f64();
        if p < 0.0 {
            clamped -= p * dx;
        }
        acc += p.max(0.0) * dx;
        cdf.push(acc);
    }
    if !(acc > 0.0) {
        return input("density has no positive mass");
    }
    cdf.iter_mut().for_each(|c| *c /= acc);
    let half = grid.extent().as_f64() / 2.0;
    let left = grid.x(0)[0].as_f64() - dx / 2.0;
    let rng = CounterRng::new(seed);
    let draws: Vec<T> = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let u = rng.uniform_at(i);
            let k = cdf.partition_point(|c| *c < u).min(cdf.len() - 1);
            let lo = if k == 0 { 0.0 } else { cdf[k - 1] };
            let w = cdf[k] - lo;
            let frac = if w > 0.0 { ((u - lo) / w).clamp(0.0, 1.0) } else { 0.5 };
            let mut x = left + (k as f64 + frac) * dx;
            if x < -half {
                x += 2.0 * half;
            } else if x >= half {
                x -= 2.0 * half;
            }
            T::lit(x)
        })
        .collect();
    let d = m.diagnostics();
    Ok(SampleBatch {
        draws,
        seed,
        grid,
        clamped_mass: clamped / acc,
        boundary_magnitude: d.boundary_magnitude,
        max_imaginary: d.max_imaginary,
        heavy_tailed: d.heavy_tailed,
        source: None,
    })
}

/// Synthesises `μ_s` and samples it, recording the source.
pub fn sample_family<T: Real>(
    family: &TimeFamily<T>,
    s: &[T],
    grid: FrequencyGrid<T>,
    options: &SynthOptions<T>,
    count: usize,
    seed: u64,
) -> Result<SampleBatch<T>> {
    let m = synth_measure(family, s, grid, options)?;
    Ok(sample_measure(&m, count, seed)?.with_source(family.clone(), s.to_vec()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EcfProbe {
    /// Probe after snapping to the nearest grid frequency.
    pub xi: f64,
    pub ecf: [f64; 2],
    pub target: [f64; 2],
    pub deviation: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EcfReport {
    pub count: usize,
    pub seed: u64,
    pub tier: ToleranceTier,
    /// `3.5/√m`.
    pub statistical: f64,
    pub probes: Vec<EcfProbe>,
    pub max_deviation: f64,
    pub passed: bool,
}

/// `(1/m) Σ e^{−iξx_j}`, summed in fixed-size blocks for a reproducible
/// total.
pub fn empirical_cf<T: Real>(draws: &[T], xi: f64) -> Complex<f64> {
    const BLOCK: usize = 4096;
    let parts: Vec<Complex<f64>> = draws
        .par_chunks(BLOCK)
        .map(|c| {
            c.iter().fold(Complex::new(0.0, 0.0), |acc, x| {
                let (s, co) = (xi * x.as_f64()).sin_cos();
                acc + Complex::new(co, -s)
            })
        })
        .collect();
    parts.into_iter().fold(Complex::new(0.0, 0.0), |a, b| a + b) / draws.len() as f64
}

/// Probes `|ξ| ≤ 4` used by default.
pub fn default_probes() -> Vec<f64> {
    vec![0.0, 0.25, -0.5, 1.0, -1.5, 2.0, 3.0, -4.0]
}

/// Compares the empirical characteristic function with `e^{−b(s; ξ)}`.
///
/// Each probe is moved to the nearest grid frequency, where the
/// characteristic function of the periodised gridded law matches `e^{−b}`
/// up to the terms in [`SampleBatch::grid_bias`]. The bound per probe is
/// `3.5/√m + grid_bias + tier tolerance`.
pub fn ecf_check<T: Real>(batch: &SampleBatch<T>, probes: &[f64], tier: ToleranceTier) -> Result<EcfReport> {
    let Some(src) = batch.source() else {
        return input("batch has no source family to compare against");
    };
    let dxi = batch.grid.dxi().as_f64();
    let nyquist = std::f64::consts::PI / batch.grid.dx().as_f64();
    let statistical = 3.5 / (batch.len() as f64).sqrt();
    let mut out = Vec::with_capacity(probes.len());
    for &p in probes {
        if !(p.abs() <= nyquist) {
            return input(format!("probe {p} outside the Nyquist band ±{nyquist:.4}"));
        }
        let k = (p / dxi).round();
        let xi = k * dxi;
        let ecf = if k == 0.0 {
            Complex::new(1.0, 0.0)
        } else {
            empirical_cf(batch.draws(), xi)
        };
        let b = src.family.eval_b(&src.s, &[T::lit(xi)])?;
        let target = (-b).exp();
        let target = Complex::new(target.re.as_f64(), target.im.as_f64());
        out.push(EcfProbe {
            xi,
            ecf: [ecf.re, ecf.im],
            target: [target.re, target.im],
            deviation: (ecf - target).norm(),
            bound: statistical + batch.grid_bias(xi) + tier.tolerance(),
        });
    }
    let max_deviation = out.iter().map(|p| p.deviation).fold(0.0, f64::max);
    let passed = out.iter().all(|p| p.deviation <= p.bound);
    Ok(EcfReport {
        count: batch.len(),
        seed: batch.seed,
        tier,
        statistical,
        probes: out,
        max_deviation,
        passed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SemigroupReport {
    pub u: [f64; 2],
    /// `‖p_{u₁} * p_{u₂} − p_{u₁+u₂}‖₁ / ‖p_{u₁+u₂}‖₁`.
    pub relative_l1: f64,
    pub tier: ToleranceTier,
    pub tolerance: f64,
    pub passed: bool,
}

fn density_at<T: Real>(r: &RestrictedFamily<T>, u: T, grid: FrequencyGrid<T>) -> Result<GriddedMeasure<T>> {
    let m = r.at(u)?;
    let n = grid.dimension();
    let one = Complex::new(T::one(), T::zero());
    if m.is_identity() || (0..grid.len()).all(|k| m.multiplier(&grid.xi(k)[..n]) == one) {
        let mut d = vec![T::zero(); grid.len()];
        d[grid.origin()] = T::one() / grid.dx().powi(grid.dimension() as i32);
        return Ok(GriddedMeasure::from_density(grid, d));
    }
    synth_from_multiplier(&m, grid, &SynthOptions::default())
}

/// `‖p_{u₁} * p_{u₂} − p_{u₁+u₂}‖₁ / ‖p_{u₁+u₂}‖₁` along a curve, without
/// requiring the curve to be linear. At zero time the density is a unit
/// mass at the origin node.
pub fn curve_convolution_discrepancy<T: Real>(
    r: &RestrictedFamily<T>,
    u1: T,
    u2: T,
    grid: FrequencyGrid<T>,
) -> Result<f64> {
    if !(u1 >= T::zero() && u2 >= T::zero()) {
        return input("curve parameters must be non-negative");
    }
    let p1 = density_at(r, u1, grid)?;
    let p2 = density_at(r, u2, grid)?;
    let p12 = density_at(r, u1 + u2, grid)?;
    let f1 = SpatialField::new(grid, p1.density().iter().map(|p| Complex::new(*p, T::zero())).collect())?;
    let conv = apply_t_convolution(&p2, &f1)?;
    let (num, den) = conv
        .values()
        .iter()
        .zip(p12.density())
        .fold((0.0f64, 0.0f64), |(n, d), (c, p)| {
            (n + (c.re.as_f64() - p.as_f64()).abs() + c.im.as_f64().abs(), d + p.as_f64().abs())
        });
    Ok(num / den)
}

/// Convolution-semigroup check `p_{u₁} * p_{u₂} = p_{u₁+u₂}` along a curve
/// whose restricted exponent is linear.
pub fn semigroup_convolution_check<T: Real>(
    r: &RestrictedFamily<T>,
    u1: T,
    u2: T,
    grid: FrequencyGrid<T>,
    tier: ToleranceTier,
) -> Result<SemigroupReport> {
    if !r.is_linear() {
        return Err(Error::Contract(
            "the restricted exponent is not linear in the curve parameter, so the convolution identity is not expected"
                .into(),
        ));
    }
    let relative_l1 = curve_convolution_discrepancy(r, u1, u2, grid)?;
    Ok(SemigroupReport {
        u: [u1.as_f64(), u2.as_f64()],
        relative_l1,
        tier,
        tolerance: tier.tolerance(),
        passed: relative_l1 <= tier.tolerance(),
    })
}

#[cfg(test)]
mod tests;
