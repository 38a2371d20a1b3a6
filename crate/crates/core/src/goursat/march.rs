//! Single-frequency solver for `v̂_st = a v̂` with data on both axes.
//!
//! With `v̂ = φ̂ e^{−sψ₁−tψ₂} w` the characteristic data become `w = 1` on
//! the axes and the equation becomes
//!
//! ```text
//! w_st − ψ₂ w_s − ψ₁ w_t = ã w,    ã = a − ψ₁ψ₂,
//! ```
//!
//! Integrating over each cell and applying the trapezoidal rule to every
//! term leaves one linear equation for the new corner. Marching cell by
//! cell from the axes needs a single row of storage. Removing the
//! exponential factors first keeps the truncation error proportional to
//! the interaction part `ã` rather than to `ψ₁ψ₂`.

use num_complex::Complex;
use serde::Serialize;

use crate::scalar::Real;
use crate::timefamily::Coupling;

/// Symbol values of an interaction family at one frequency.
#[derive(Debug, Clone, Copy)]
pub struct FrequencySymbols<T> {
    pub psi1: Complex<T>,
    pub psi2: Complex<T>,
    pub psi3: Complex<T>,
    pub coupling: Coupling,
}

impl<T: Real> FrequencySymbols<T> {
    /// `b(s, t)`.
    pub fn b(&self, s: T, t: T) -> Complex<T> {
        self.psi1 * s + self.psi2 * t + self.psi3 * self.coupling.value(s, t)
    }

    /// `a(s, t)`.
    pub fn a(&self, s: T, t: T) -> Complex<T> {
        self.psi1 * self.psi2 + self.a_tilde(s, t)
    }

    /// `a − ψ₁ψ₂ = ψ₁∂_t d + ψ₂∂_s d + ∂_s d ∂_t d − ∂²_{st} d`.
    pub fn a_tilde(&self, s: T, t: T) -> Complex<T> {
        let c = self.coupling;
        let ds = self.psi3 * c.d_s(s, t);
        let dt = self.psi3 * c.d_t(s, t);
        let dst = self.psi3 * c.d_st(s, t);
        self.psi1 * dt + self.psi2 * ds + ds * dt - dst
    }
}

/// Rectangle, base lattice and refinement rules shared by all frequencies.
#[derive(Debug, Clone, Copy)]
pub struct MarchSettings<T> {
    pub ds: T,
    pub dt: T,
    pub cells_s: usize,
    pub cells_t: usize,
    /// Cells are halved until `max|a|·Δs·Δt` and `(|ψ₁|Δs + |ψ₂|Δt)/2`
    /// are both at most this value.
    pub refine_threshold: f64,
    pub max_refinement: u32,
    /// Frequencies whose error amplification bound exceeds this are
    /// excluded.
    pub conditioning_limit: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FrequencyStatus {
    Solved,
    /// `|φ̂|` negligible; `v̂ = 0` retained.
    Skipped,
    /// The refinement rule asked for more than the cap.
    RefinementCap,
    /// Roundoff amplification bound above the limit.
    IllConditioned,
    /// Error estimate above the accuracy limit.
    Inaccurate,
}

impl FrequencyStatus {
    pub fn included(self) -> bool {
        matches!(self, FrequencyStatus::Solved | FrequencyStatus::Skipped)
    }
}

/// Sampled maxima used by the refinement rule and conditioning bound.
#[derive(Debug, Clone, Copy)]
pub struct Survey {
    pub max_a: f64,
    /// `∫∫|ã|` over the rectangle, by a 9×9 midpoint sample.
    pub interaction_mass: f64,
}

pub fn survey<T: Real>(sym: &FrequencySymbols<T>, set: &MarchSettings<T>) -> Survey {
    const K: usize = 9;
    let s_max = set.ds.as_f64() * set.cells_s as f64;
    let t_max = set.dt.as_f64() * set.cells_t as f64;
    let mut max_a = 0.0f64;
    let mut mass = 0.0f64;
    for i in 0..K {
        for j in 0..K {
            let s = T::lit(s_max * i as f64 / (K - 1) as f64);
            let t = T::lit(t_max * j as f64 / (K - 1) as f64);
            max_a = max_a.max(sym.a(s, t).norm().as_f64());
            let sm = T::lit(s_max * (i as f64 + 0.5) / K as f64);
            let tm = T::lit(t_max * (j as f64 + 0.5) / K as f64);
            mass += sym.a_tilde(sm, tm).norm().as_f64();
        }
    }
    Survey {
        max_a,
        interaction_mass: mass * s_max * t_max / (K * K) as f64,
    }
}

/// Smallest refinement level satisfying the step rule, if within the cap.
pub fn refinement_level<T: Real>(sym: &FrequencySymbols<T>, set: &MarchSettings<T>, sv: &Survey) -> Option<u32> {
    let (p1, p2) = (sym.psi1.norm().as_f64(), sym.psi2.norm().as_f64());
    let (ds, dt) = (set.ds.as_f64(), set.dt.as_f64());
    (0..=set.max_refinement).find(|&r| {
        let f = 0.5f64.powi(r as i32);
        let cell = sv.max_a * ds * dt * f * f <= set.refine_threshold;
        let drift = 0.5 * (p1 * ds + p2 * dt) * f <= set.refine_threshold;
        cell && drift
    })
}

/// Roundoff amplification bound `e^{2√∫∫|ã|}`.
pub fn conditioning(sv: &Survey) -> f64 {
    (2.0 * sv.interaction_mass.sqrt()).exp()
}

/// Marches `w` on the refined lattice and hands every base node `(i, j)`
/// with its value to `visit`, row by row. Axis nodes get `w = 1`.
pub fn march_w<T: Real>(
    sym: &FrequencySymbols<T>,
    set: &MarchSettings<T>,
    level: u32,
    mut visit: impl FnMut(usize, usize, Complex<T>),
) {
    let one = Complex::new(T::one(), T::zero());
    let fine = 1usize << level;
    let scale = T::lit(fine as f64);
    let (ms, mt) = (set.cells_s * fine, set.cells_t * fine);
    let (hs, ht) = (set.ds / scale, set.dt / scale);
    let quarter = hs * ht * T::lit(0.25);
    let half_s = sym.psi1 * (hs * T::lit(0.5));
    let half_t = sym.psi2 * (ht * T::lit(0.5));
    // Same rounding as the base lattice at shared nodes.
    let t_at: Vec<T> = (0..=mt).map(|j| (T::lit(j as f64) * set.dt) / scale).collect();

    let mut w_prev = vec![one; mt + 1];
    let mut a_prev: Vec<Complex<T>> = t_at.iter().map(|t| sym.a_tilde(T::zero(), *t)).collect();
    let mut w_cur = vec![one; mt + 1];
    let mut a_cur = vec![Complex::new(T::zero(), T::zero()); mt + 1];
    for j in (0..=set.cells_t).map(|j| j * fine) {
        visit(0, j / fine, one);
    }
    for i in 1..=ms {
        let s = (T::lit(i as f64) * set.ds) / scale;
        for (j, t) in t_at.iter().enumerate() {
            a_cur[j] = sym.a_tilde(s, *t);
        }
        w_cur[0] = one;
        for j in 1..=mt {
            let (w10, w01, w00) = (w_prev[j], w_cur[j - 1], w_prev[j - 1]);
            let known = -w10 - w01 + w00
                - half_t * (-w10 + w01 - w00)
                - half_s * (-w01 + w10 - w00)
                - (a_prev[j] * w10 + a_cur[j - 1] * w01 + a_prev[j - 1] * w00) * quarter;
            let coef = one - half_t - half_s - a_cur[j] * quarter;
            w_cur[j] = -known / coef;
        }
        if i % fine == 0 {
            for jb in 0..=set.cells_t {
                visit(i / fine, jb, w_cur[jb * fine]);
            }
        }
        std::mem::swap(&mut w_prev, &mut w_cur);
        std::mem::swap(&mut a_prev, &mut a_cur);
    }
}

/// Reference solution of the same discrete equations by Picard iteration
/// on the integrated form
/// `w = 1 + ψ₂ ∫₀ᵗ (w − 1) + ψ₁ ∫₀ˢ (w − 1) + ∫₀ˢ∫₀ᵗ ã w`,
/// with cumulative trapezoidal quadrature on the base lattice. Returns
/// `w` row-major over `(cells_s + 1) × (cells_t + 1)` nodes and the number
/// of sweeps used.
pub fn picard_reference<T: Real>(
    sym: &FrequencySymbols<T>,
    set: &MarchSettings<T>,
    max_sweeps: usize,
    tol: T,
) -> (Vec<Complex<T>>, usize) {
    let (ms, mt) = (set.cells_s, set.cells_t);
    let cols = mt + 1;
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let half = T::lit(0.5);
    let at: Vec<Complex<T>> = (0..=ms)
        .flat_map(|i| {
            let s = T::lit(i as f64) * set.ds;
            (0..=mt).map(move |j| (s, T::lit(j as f64) * set.dt))
        })
        .map(|(s, t)| sym.a_tilde(s, t))
        .collect();
    let mut w = vec![one; (ms + 1) * cols];
    let mut next = w.clone();
    for sweep in 1..=max_sweeps {
        // Cumulative trapezoids along t for each row, along s for each column,
        // and the product rule for the double integral of ã w.
        let mut q = vec![zero; (ms + 1) * cols];
        let mut it = vec![zero; (ms + 1) * cols];
        let mut is = vec![zero; (ms + 1) * cols];
        for i in 0..=ms {
            for j in 1..=mt {
                let k = i * cols + j;
                it[k] = it[k - 1] + (w[k] + w[k - 1] - one - one) * (set.dt * half);
            }
        }
        for j in 0..=mt {
            for i in 1..=ms {
                let k = i * cols + j;
                is[k] = is[k - cols] + (w[k] + w[k - cols] - one - one) * (set.ds * half);
            }
        }
        let cell = set.ds * set.dt * T::lit(0.25);
        for i in 1..=ms {
            for j in 1..=mt {
                let k = i * cols + j;
                let f = |m: usize| at[m] * w[m];
                q[k] = q[k - cols] + q[k - 1] - q[k - cols - 1]
                    + (f(k) + f(k - 1) + f(k - cols) + f(k - cols - 1)) * cell;
            }
        }
        let mut change = T::zero();
        for i in 1..=ms {
            for j in 1..=mt {
                let k = i * cols + j;
                next[k] = one + sym.psi2 * it[k] + sym.psi1 * is[k] + q[k];
                change = change.max((next[k] - w[k]).norm());
            }
        }
        std::mem::swap(&mut w, &mut next);
        if change <= tol {
            return (w, sweep);
        }
    }
    (w, max_sweeps)
}
