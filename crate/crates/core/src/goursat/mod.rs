//! The characteristic (Goursat) problem `∂²_{st} v = a(s,t;D) v` on
//! `[0,S]×[0,T]` with `v(s,0) = T_{(s,0)}φ`, `v(0,t) = T_{(0,t)}φ`.
//!
//! Each frequency decouples into a scalar hyperbolic problem, solved by
//! [`march`]. The closed form `v = T_{(s,t)}φ` is the reference.

pub mod checks;
pub mod march;

pub use checks::{
    check_boundary_limits, check_boundary_limits_general, check_residual, default_residual_points,
    Axis, BoundaryLimitReport, ExactSource, FieldSource, LimitSample, NegativeControl, ResidualReport,
};
pub use march::{FrequencyStatus, FrequencySymbols, MarchSettings};

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{input, Result};
use crate::scalar::Real;
use crate::spectral::{apply_t, fourier_forward, fourier_inverse, SpatialField, SpectralField};
use crate::timefamily::{FamilyKind, TimeFamily};

/// Knobs of the frequency-wise solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GoursatOptions {
    /// Frequencies with `|φ̂| < skip_tol·max|φ̂|` are not solved.
    pub skip_tol: f64,
    pub refine_threshold: f64,
    /// Largest number of halvings (the finest lattice is `2^cap` times
    /// the base one).
    pub max_refinement: u32,
    pub conditioning_limit: f64,
    /// Frequencies whose error estimate relative to `|φ̂|` exceeds this are
    /// excluded.
    pub accuracy_limit: f64,
    /// `v̂` is kept at every `record_every`-th base node, plus the last.
    pub record_every: usize,
}

impl Default for GoursatOptions {
    fn default() -> Self {
        Self {
            skip_tol: 1e-14,
            refine_threshold: 0.1,
            max_refinement: 10,
            conditioning_limit: 1e10,
            accuracy_limit: 1e-2,
            record_every: 8,
        }
    }
}

/// Interaction family, datum and rectangle.
#[derive(Debug, Clone)]
pub struct GoursatProblem<T> {
    family: TimeFamily<T>,
    datum: SpatialField<T>,
    s_max: T,
    t_max: T,
    ds: T,
    dt: T,
    options: GoursatOptions,
}

fn cells<T: Real>(extent: T, step: T, what: &str) -> Result<usize> {
    if !(extent > T::zero() && extent.is_finite() && step > T::zero() && step.is_finite()) {
        return input(format!("{what}: extent and step must be positive and finite"));
    }
    let r = (extent / step).as_f64();
    let m = r.round();
    if (r - m).abs() > 1e-9 * r.max(1.0) || m < 1.0 {
        return input(format!("{what}: extent {extent} is not a whole number of steps {step}"));
    }
    Ok(m as usize)
}

impl<T: Real> GoursatProblem<T> {
    pub fn new(
        family: TimeFamily<T>,
        datum: SpatialField<T>,
        (s_max, t_max): (T, T),
        (ds, dt): (T, T),
        options: GoursatOptions,
    ) -> Result<Self> {
        if !matches!(family.kind(), FamilyKind::Interaction { .. }) {
            return input("the characteristic problem needs an interaction family");
        }
        if family.dimension() != datum.grid().dimension() {
            return input(format!(
                "family has dimension {}, datum has dimension {}",
                family.dimension(),
                datum.grid().dimension()
            ));
        }
        cells(s_max, ds, "s")?;
        cells(t_max, dt, "t")?;
        if options.record_every == 0 {
            return input("record_every must be at least 1");
        }
        if !(options.skip_tol >= 0.0 && options.refine_threshold > 0.0 && options.conditioning_limit > 1.0 && options.accuracy_limit > 0.0) {
            return input("solver options out of range");
        }
        Ok(Self {
            family,
            datum,
            s_max,
            t_max,
            ds,
            dt,
            options,
        })
    }

    pub fn family(&self) -> &TimeFamily<T> {
        &self.family
    }

    pub fn datum(&self) -> &SpatialField<T> {
        &self.datum
    }

    pub fn extent(&self) -> (T, T) {
        (self.s_max, self.t_max)
    }

    pub fn steps(&self) -> (T, T) {
        (self.ds, self.dt)
    }

    pub fn options(&self) -> &GoursatOptions {
        &self.options
    }

    /// Same problem with other base steps.
    pub fn with_steps(&self, ds: T, dt: T) -> Result<Self> {
        Self::new(
            self.family.clone(),
            self.datum.clone(),
            (self.s_max, self.t_max),
            (ds, dt),
            self.options,
        )
    }

    pub fn settings(&self) -> MarchSettings<T> {
        MarchSettings {
            ds: self.ds,
            dt: self.dt,
            cells_s: cells(self.s_max, self.ds, "s").expect("validated"),
            cells_t: cells(self.t_max, self.dt, "t").expect("validated"),
            refine_threshold: self.options.refine_threshold,
            max_refinement: self.options.max_refinement,
            conditioning_limit: self.options.conditioning_limit,
        }
    }

    /// Symbol values at grid frequency `k`.
    pub fn symbols_at(&self, k: usize) -> FrequencySymbols<T> {
        let g = self.datum.grid();
        let xi = g.xi(k);
        let fr = self.family.freeze(&xi[..g.dimension()]);
        let p = fr.symbol_values();
        FrequencySymbols {
            psi1: p[0],
            psi2: p[1],
            psi3: p[2],
            coupling: fr.coupling().expect("interaction family"),
        }
    }

    /// `e^{−b(s,t;ξ)}·φ̂(ξ)` at every frequency. On the axes this is the
    /// characteristic data; elsewhere it is the closed-form solution.
    pub fn exact_spectral(&self, s: T, t: T) -> SpectralField<T> {
        let mut u = fourier_forward(&self.datum);
        let syms: Vec<_> = (0..u.values().len()).map(|k| self.symbols_at(k)).collect();
        for (v, sym) in u.values_mut().iter_mut().zip(&syms) {
            *v = prescribed(sym, *v, s, t);
        }
        u
    }
}

fn prescribed<T: Real>(sym: &FrequencySymbols<T>, phi_hat: Complex<T>, s: T, t: T) -> Complex<T> {
    (-sym.b(s, t)).exp() * phi_hat
}

/// `v(s,t) = T_{(s,t)}φ`.
pub fn exact_solution<T: Real>(p: &GoursatProblem<T>, s: T, t: T) -> Result<SpatialField<T>> {
    Ok(apply_t(&p.family, &[s, t], &p.datum)?.field)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrequencyReport {
    pub index: usize,
    pub xi: [f64; 2],
    pub status: FrequencyStatus,
    pub level: u32,
    pub conditioning: f64,
    /// `max |v̂_r − v̂_{r+1}|·4/3 / |φ̂|` between the chosen level and the
    /// next finer one.
    pub error_estimate: f64,
    /// `max |v̂ − v̂_exact| / |φ̂|` over the base lattice.
    pub max_error: f64,
}

/// `‖v − v_exact‖₂ / ‖φ‖₂` at one lattice node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NodeError {
    pub s: f64,
    pub t: f64,
    pub relative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorSummary {
    /// Largest [`NodeError::relative`] over the base lattice.
    pub global_relative: f64,
    /// Largest `‖v − v_exact‖₂ / ‖v_exact‖₂` over the base lattice.
    pub against_solution: f64,
    /// The same as `global_relative` at `(S, T)`.
    pub at_corner: f64,
    /// Largest per-frequency error over the solved frequencies.
    pub max_frequency_error: f64,
    pub solved: usize,
    pub skipped: usize,
    pub excluded: usize,
    /// Finest refinement level used.
    pub max_level: u32,
    /// Errors at the recorded nodes.
    pub nodes: Vec<NodeError>,
}

/// Recorded `v̂` and diagnostics.
#[derive(Debug, Clone)]
pub struct GoursatSolution<T> {
    problem: GoursatProblem<T>,
    rec_s: Vec<usize>,
    rec_t: Vec<usize>,
    /// `[(a·|rec_t| + b)·N_ξ + k]`.
    v_hat: Vec<Complex<T>>,
    frequencies: Vec<FrequencyReport>,
    errors: ErrorSummary,
}

fn recorded(cells: usize, every: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..=cells).step_by(every).collect();
    if *v.last().expect("nonempty") != cells {
        v.push(cells);
    }
    v
}

/// `v̂` on the base lattice from a march at `level`; axes carry the data.
fn lattice<T: Real>(
    sym: &FrequencySymbols<T>,
    set: &MarchSettings<T>,
    level: u32,
    ph: Complex<T>,
    s_at: &[T],
    t_at: &[T],
) -> Vec<Complex<T>> {
    let cols = set.cells_t + 1;
    let mut out = vec![Complex::new(T::zero(), T::zero()); (set.cells_s + 1) * cols];
    march::march_w(sym, set, level, |i, j, w| {
        out[i * cols + j] = if i == 0 || j == 0 {
            prescribed(sym, ph, s_at[i], t_at[j])
        } else {
            (-(sym.psi1 * s_at[i] + sym.psi2 * t_at[j])).exp() * ph * w
        };
    });
    out
}

struct Chunk<T> {
    err_sq: Vec<f64>,
    exact_sq: Vec<f64>,
    recorded: Vec<(usize, Vec<Complex<T>>)>,
    reports: Vec<FrequencyReport>,
}

/// Solves every frequency of the transformed problem.
pub fn solve_transformed<T: Real>(p: &GoursatProblem<T>) -> Result<GoursatSolution<T>> {
    const CHUNK: usize = 16;
    let set = p.settings();
    let (ms, mt) = (set.cells_s, set.cells_t);
    let cols = mt + 1;
    let rec_s = recorded(ms, p.options.record_every);
    let rec_t = recorded(mt, p.options.record_every);
    let mut slot_s = vec![usize::MAX; ms + 1];
    rec_s.iter().enumerate().for_each(|(a, i)| slot_s[*i] = a);
    let mut slot_t = vec![usize::MAX; mt + 1];
    rec_t.iter().enumerate().for_each(|(b, j)| slot_t[*j] = b);
    let n_rec = rec_s.len() * rec_t.len();

    let phi_hat = fourier_forward(&p.datum);
    let grid = *p.datum.grid();
    let dim = grid.dimension();
    let peak = phi_hat.sup_norm().as_f64();
    let s_at: Vec<T> = (0..=ms).map(|i| T::lit(i as f64) * p.ds).collect();
    let t_at: Vec<T> = (0..=mt).map(|j| T::lit(j as f64) * p.dt).collect();
    let indices: Vec<usize> = (0..grid.len()).collect();

    let chunks: Vec<Chunk<T>> = indices
        .par_chunks(CHUNK)
        .map(|ks| {
            let mut out = Chunk {
                err_sq: vec![0.0; (ms + 1) * cols],
                exact_sq: vec![0.0; (ms + 1) * cols],
                recorded: Vec::with_capacity(ks.len()),
                reports: Vec::with_capacity(ks.len()),
            };
            for &k in ks {
                let sym = p.symbols_at(k);
                let ph = phi_hat.values()[k];
                let xi = grid.xi(k);
                let mut report = FrequencyReport {
                    index: k,
                    xi: [xi[0].as_f64(), if dim == 2 { xi[1].as_f64() } else { 0.0 }],
                    status: FrequencyStatus::Solved,
                    level: 0,
                    conditioning: 1.0,
                    error_estimate: 0.0,
                    max_error: 0.0,
                };
                let zero = Complex::new(T::zero(), T::zero());
                let mag = ph.norm().as_f64();
                let mut values = None;
                if mag > 0.0 && mag >= p.options.skip_tol * peak {
                    let sv = march::survey(&sym, &set);
                    report.conditioning = march::conditioning(&sv);
                    match march::refinement_level(&sym, &set, &sv) {
                        None => report.status = FrequencyStatus::RefinementCap,
                        Some(_) if report.conditioning > set.conditioning_limit => {
                            report.status = FrequencyStatus::IllConditioned
                        }
                        Some(level) => {
                            report.level = level;
                            let v = lattice(&sym, &set, level, ph, &s_at, &t_at);
                            let finer = lattice(&sym, &set, level + 1, ph, &s_at, &t_at);
                            report.error_estimate = v
                                .iter()
                                .zip(&finer)
                                .map(|(a, b)| (*a - *b).norm().as_f64() * 4.0 / 3.0 / mag)
                                .fold(0.0, f64::max);
                            if report.error_estimate > p.options.accuracy_limit {
                                report.status = FrequencyStatus::Inaccurate;
                            } else {
                                values = Some(v);
                            }
                        }
                    }
                } else {
                    report.status = FrequencyStatus::Skipped;
                }
                let mut rec = vec![zero; n_rec];
                for i in 0..=ms {
                    for j in 0..=mt {
                        let v = values.as_ref().map_or(zero, |v| v[i * cols + j]);
                        let exact = prescribed(&sym, ph, s_at[i], t_at[j]);
                        let e = (v - exact).norm().as_f64();
                        out.err_sq[i * cols + j] += e * e;
                        out.exact_sq[i * cols + j] += exact.norm_sqr().as_f64();
                        if values.is_some() {
                            report.max_error = report.max_error.max(e / mag);
                        }
                        if slot_s[i] != usize::MAX && slot_t[j] != usize::MAX {
                            rec[slot_s[i] * rec_t.len() + slot_t[j]] = v;
                        }
                    }
                }
                out.recorded.push((k, rec));
                out.reports.push(report);
            }
            out
        })
        .collect();

    let mut err_sq = vec![0.0f64; (ms + 1) * cols];
    let mut exact_sq = vec![0.0f64; (ms + 1) * cols];
    let mut v_hat = vec![Complex::new(T::zero(), T::zero()); n_rec * grid.len()];
    let mut frequencies = Vec::with_capacity(grid.len());
    for c in chunks {
        err_sq.iter_mut().zip(&c.err_sq).for_each(|(a, b)| *a += b);
        exact_sq.iter_mut().zip(&c.exact_sq).for_each(|(a, b)| *a += b);
        for (k, rec) in c.recorded {
            for (node, v) in rec.into_iter().enumerate() {
                v_hat[node * grid.len() + k] = v;
            }
        }
        frequencies.extend(c.reports);
    }

    let phi_norm_sq: f64 = phi_hat.values().iter().map(|v| v.norm_sqr().as_f64()).sum();
    if !(phi_norm_sq > 0.0) {
        return input("datum is identically zero");
    }
    let rel = |i: usize, j: usize| (err_sq[i * cols + j] / phi_norm_sq).sqrt();
    let global = (0..=ms)
        .flat_map(|i| (0..=mt).map(move |j| (i, j)))
        .map(|(i, j)| rel(i, j))
        .fold(0.0, f64::max);
    let against_solution = (0..err_sq.len())
        .map(|m| if exact_sq[m] > 0.0 { (err_sq[m] / exact_sq[m]).sqrt() } else { err_sq[m].sqrt() })
        .fold(0.0, f64::max);
    let nodes = rec_s
        .iter()
        .flat_map(|&i| rec_t.iter().map(move |&j| (i, j)))
        .map(|(i, j)| NodeError {
            s: s_at[i].as_f64(),
            t: t_at[j].as_f64(),
            relative: rel(i, j),
        })
        .collect();
    let count = |f: fn(FrequencyStatus) -> bool| frequencies.iter().filter(|r| f(r.status)).count();
    let errors = ErrorSummary {
        global_relative: global,
        against_solution,
        at_corner: rel(ms, mt),
        max_frequency_error: frequencies.iter().map(|r| r.max_error).fold(0.0, f64::max),
        solved: count(|s| s == FrequencyStatus::Solved),
        skipped: count(|s| s == FrequencyStatus::Skipped),
        excluded: count(|s| !s.included()),
        max_level: frequencies.iter().map(|r| r.level).max().unwrap_or(0),
        nodes,
    };
    Ok(GoursatSolution {
        problem: p.clone(),
        rec_s,
        rec_t,
        v_hat,
        frequencies,
        errors,
    })
}

impl<T: Real> GoursatSolution<T> {
    pub fn problem(&self) -> &GoursatProblem<T> {
        &self.problem
    }

    pub fn frequencies(&self) -> &[FrequencyReport] {
        &self.frequencies
    }

    pub fn errors(&self) -> &ErrorSummary {
        &self.errors
    }

    /// Recorded `s` values.
    pub fn s_values(&self) -> Vec<T> {
        self.rec_s.iter().map(|i| T::lit(*i as f64) * self.problem.ds).collect()
    }

    /// Recorded `t` values.
    pub fn t_values(&self) -> Vec<T> {
        self.rec_t.iter().map(|j| T::lit(*j as f64) * self.problem.dt).collect()
    }

    fn slot(&self, a: usize, b: usize) -> Result<usize> {
        if a >= self.rec_s.len() || b >= self.rec_t.len() {
            return input(format!(
                "recorded node ({a}, {b}) outside {}×{}",
                self.rec_s.len(),
                self.rec_t.len()
            ));
        }
        Ok(a * self.rec_t.len() + b)
    }

    /// `v̂` at recorded node `(a, b)`.
    pub fn spectral(&self, a: usize, b: usize) -> Result<SpectralField<T>> {
        let n = self.problem.datum.grid().len();
        let slot = self.slot(a, b)?;
        SpectralField::new(*self.problem.datum.grid(), self.v_hat[slot * n..(slot + 1) * n].to_vec())
    }

    /// `v` at recorded node `(a, b)`, transformed back.
    pub fn assemble(&self, a: usize, b: usize) -> Result<SpatialField<T>> {
        Ok(fourier_inverse(&self.spectral(a, b)?))
    }

    /// Index of a recorded node at `(s, t)`, if any.
    pub fn locate(&self, s: T, t: T) -> Option<(usize, usize)> {
        let find = |v: Vec<T>, x: T, h: T| {
            v.iter()
                .position(|y| (*y - x).abs() <= h * T::lit(1e-9))
        };
        Some((
            find(self.s_values(), s, self.problem.ds)?,
            find(self.t_values(), t, self.problem.dt)?,
        ))
    }

    /// Worst relative spatial error over the recorded nodes, computed from
    /// assembled fields.
    pub fn assembled_error(&self) -> Result<T> {
        let mut worst = T::zero();
        let phi = self.problem.datum.l2_norm();
        for (a, s) in self.s_values().into_iter().enumerate() {
            for (b, t) in self.t_values().into_iter().enumerate() {
                let num = self.assemble(a, b)?;
                let ex = exact_solution(&self.problem, s, t)?;
                let diff: T = num
                    .values()
                    .iter()
                    .zip(ex.values())
                    .map(|(x, y)| (*x - *y).norm_sqr())
                    .fold(T::zero(), |acc, v| acc + v);
                worst = worst.max((diff * num.cell()).sqrt() / phi);
            }
        }
        Ok(worst)
    }
}

/// Solves at steps `(Δs, Δt)` and `(Δs/2, Δt/2)` and returns
/// `(e_h, e_{h/2}, ratio)` of the global errors.
pub fn convergence_ratio<T: Real>(p: &GoursatProblem<T>) -> Result<(f64, f64, f64)> {
    let coarse = solve_transformed(p)?;
    let half = T::lit(0.5);
    let fine = solve_transformed(&p.with_steps(p.ds * half, p.dt * half)?)?;
    let (e1, e2) = (coarse.errors.global_relative, fine.errors.global_relative);
    let ratio = if e2 > 0.0 { e1 / e2 } else { f64::NAN };
    Ok((e1, e2, ratio))
}
