//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on
//! any failure.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use multilevy::goursat::{
    check_boundary_limits, check_residual, convergence_ratio, default_residual_points, solve_transformed, Axis,
    ExactSource, GoursatOptions, GoursatProblem, NegativeControl,
};
use multilevy::montecarlo::{
    curve_convolution_discrepancy, default_probes, ecf_check, sample_family, semigroup_convolution_check,
    ToleranceTier,
};
use multilevy::spectral::{
    apply_t, apply_t_convolution, check_commutation, check_contraction, synth_measure, AutoGrid, FrequencyGrid,
    SpatialField, SynthOptions,
};
use multilevy::symbolcalc::{eval_a_closed, eval_a_fd, eval_a_setpartition};
use multilevy::symbols::{catalog, check_negative_definite, SchoenbergConfig, SymbolFn, SymbolSpec};
use multilevy::timefamily::{Coupling, CurveReparametrization, TimeFamily};
use multilevy::{Error, Result};
use num_complex::Complex;

type C = Complex<f64>;
type Case = (String, TimeFamily<f64>, Vec<f64>, FrequencyGrid<f64>);

struct Outcome {
    passed: bool,
    detail: String,
}

fn run(id: usize, name: &str, limit: Option<Duration>, f: impl FnOnce() -> Result<Outcome>) -> bool {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    let (mut passed, mut detail) = match out {
        Ok(o) => (o.passed, o.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    if let Some(l) = limit {
        if took > l {
            passed = false;
            detail.push_str(&format!("; runtime {:.2}s over {:.0}s", took.as_secs_f64(), l.as_secs_f64()));
        }
    }
    println!(
        "{} criterion {id} ({name}): {detail} [{:.2}s]",
        if passed { "PASS" } else { "FAIL" },
        took.as_secs_f64()
    );
    passed
}

fn rel(a: C, b: C) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

fn power(alpha: f64, n: usize) -> SymbolSpec<f64> {
    SymbolSpec::power(alpha, n).unwrap()
}

fn heat() -> TimeFamily<f64> {
    let half = SymbolSpec::quadratic(vec![vec![0.5]]).unwrap();
    TimeFamily::separable(vec![half.clone(), half]).unwrap()
}

fn cauchy() -> TimeFamily<f64> {
    TimeFamily::monomial(vec![2, 1], power(1.0, 1)).unwrap()
}

fn biharmonic(c: Coupling) -> TimeFamily<f64> {
    TimeFamily::interaction(power(2.0, 1), power(2.0, 1), power(2.0, 1), c).unwrap()
}

fn balanced(n: usize, points: usize) -> FrequencyGrid<f64> {
    FrequencyGrid::new(n, points, (2.0 * PI / points as f64).sqrt()).unwrap()
}

/// `|ξ|⁴`, which is not negative definite.
struct Quartic;

impl SymbolFn<f64> for Quartic {
    fn dimension(&self) -> usize {
        1
    }
    fn eval_at(&self, xi: &[f64]) -> C {
        Complex::new(xi[0].powi(4), 0.0)
    }
}

fn schoenberg() -> Result<Outcome> {
    let cfg = SchoenbergConfig::<f64>::default();
    let mut worst = f64::INFINITY;
    let mut failures = Vec::new();
    let mut count = 0;
    for n in [1, 2] {
        for (name, psi) in catalog::<f64>(n) {
            let r = check_negative_definite(&psi, &cfg)?;
            count += 1;
            for e in &r.entries {
                worst = worst.min(e.min_eigenvalue);
            }
            if !r.passed {
                failures.push(format!("{name}/n={n}"));
            }
        }
    }
    let control = check_negative_definite(&Quartic, &cfg)?;
    let passed = failures.is_empty() && !control.passed;
    Ok(Outcome {
        passed,
        detail: format!(
            "{count} symbols × t∈{{0.1,1,10}}, min eigenvalue {worst:.3e} ≥ {:.1e}; failures {failures:?}; |ξ|⁴ control rejected: {}",
            -1e-8 * 32.0,
            !control.passed
        ),
    })
}

fn densities() -> Result<Outcome> {
    let t0 = Instant::now();
    let f = heat();
    let g = FrequencyGrid::auto(&f.at(&[1.0, 1.0])?, 1024, &AutoGrid::default())?;
    let m = synth_measure(&f, &[1.0, 1.0], g, &SynthOptions::default())?;
    let gauss_err = m
        .density()
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let x = g.axis(i, g.dx());
            (p - (-x * x / 4.0).exp() / (4.0 * PI).sqrt()).abs()
        })
        .fold(0.0, f64::max);
    let gauss_mass = (m.mass() - 1.0).abs();
    let gauss_time = t0.elapsed();

    let t1 = Instant::now();
    let f = cauchy();
    let g = FrequencyGrid::auto(&f.at(&[1.0, 1.0])?, 4096, &AutoGrid::default())?;
    let m = synth_measure(&f, &[1.0, 1.0], g, &SynthOptions::default())?;
    let cauchy_err = m
        .density()
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let x = g.axis(i, g.dx());
            (p - 1.0 / (PI * (1.0 + x * x))).abs()
        })
        .fold(0.0, f64::max);
    let cauchy_time = t1.elapsed();
    let fast = gauss_time.as_secs_f64() < 1.0 && cauchy_time.as_secs_f64() < 1.0;
    Ok(Outcome {
        passed: gauss_err <= 1e-6 && gauss_mass <= 1e-8 && cauchy_err <= 1e-4 && fast,
        detail: format!(
            "Normal(0,2) sup error {gauss_err:.2e} (≤1e-6), mass deviation {gauss_mass:.1e} (≤1e-8), {:.3}s; \
             Cauchy sup error {cauchy_err:.2e} (≤1e-4, N=4096), {:.3}s",
            gauss_time.as_secs_f64(),
            cauchy_time.as_secs_f64()
        ),
    })
}

fn multiplier_vs_convolution() -> Result<Outcome> {
    let synth = SynthOptions {
        allow_undecayed: true,
        ..SynthOptions::default()
    };
    let mut cases: Vec<Case> = Vec::new();
    for n in [1, 2] {
        let g = balanced(n, if n == 1 { 1024 } else { 128 });
        for (name, psi) in catalog::<f64>(n) {
            cases.push((format!("{name}/n={n}"), TimeFamily::separable(vec![psi])?, vec![0.7], g));
        }
    }
    let g = balanced(1, 1024);
    cases.push(("heat".into(), heat(), vec![0.5, 0.7], g));
    cases.push(("cauchy_monomial".into(), cauchy(), vec![0.8, 1.2], g));
    cases.push(("biharmonic_product".into(), biharmonic(Coupling::Product), vec![0.3, 0.4], g));
    cases.push(("biharmonic_saturating".into(), biharmonic(Coupling::Saturating), vec![0.3, 0.4], g));
    let mut worst = 0.0f64;
    let mut worst_name = String::new();
    for (name, f, s, g) in &cases {
        let m = synth_measure(f, s, *g, &synth)?;
        for seed in 0..10 {
            let u = SpatialField::random_smooth(*g, 1000 + seed);
            let a = apply_t(f, s, &u)?.field;
            let b = apply_t_convolution(&m, &u)?;
            let d = b.relative_l2_distance(&a);
            if d > worst {
                worst = d;
                worst_name = name.clone();
            }
        }
    }
    Ok(Outcome {
        passed: worst <= 1e-8,
        detail: format!(
            "{} families × 10 fields, worst relative L² {worst:.2e} ({worst_name}) ≤ 1e-8",
            cases.len()
        ),
    })
}

fn symbol_calculus() -> Result<Outcome> {
    let rng = multilevy::random::CounterRng::new(2024);
    let mut closed_sp = 0.0f64;
    let mut fd_err = 0.0f64;
    let mut ratios = Vec::new();
    for coupling in [Coupling::Product, Coupling::Saturating] {
        let psi2 = SymbolSpec::combination(vec![(1.0, power(1.5, 1)), (1.0, SymbolSpec::drift(vec![0.4])?)], 1)?;
        let f = TimeFamily::interaction(power(2.0, 1), psi2, power(1.0, 1), coupling)?;
        for j in 0..20u64 {
            let s = 0.05 + 0.95 * rng.uniform_at(3 * j);
            let t = 0.05 + 0.95 * rng.uniform_at(3 * j + 1);
            let xi = 3.0 * rng.uniform_at(3 * j + 2) - 1.5;
            let closed = eval_a_closed(&f, s, t, &[xi])?;
            let sp = eval_a_setpartition(&f, &[s, t], &[xi])?;
            closed_sp = closed_sp.max(rel(closed, sp));
            let coarse = rel(eval_a_fd(&f, &[s, t], &[xi], 2e-3)?.value, closed);
            let fine = rel(eval_a_fd(&f, &[s, t], &[xi], 1e-3)?.value, closed);
            fd_err = fd_err.max(fine).max(rel(eval_a_fd(&f, &[s, t], &[xi], 1e-3)?.value, sp));
            // Cancellation in the mixed difference costs about ε/(h²|a|).
            let roundoff = f64::EPSILON / (1e-6 * closed.norm());
            if fine > 100.0 * roundoff {
                ratios.push(coarse / fine);
            }
        }
    }
    let ratio_ok = ratios.iter().all(|r| (r - 4.0).abs() <= 1.2);
    let (rmin, rmax) = ratios
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(a, b), r| (a.min(*r), b.max(*r)));

    let p2 = power(2.0, 1);
    let e16 = eval_a_setpartition(&TimeFamily::separable(vec![p2.clone(), p2.clone()])?, &[0.3, 2.0], &[2.0])?;
    let c = 0.8;
    let e17 = eval_a_setpartition(
        &TimeFamily::separable(vec![p2.clone(), SymbolSpec::drift(vec![c])?])?,
        &[1.0, 1.0],
        &[1.5],
    )?;
    let e18 = eval_a_setpartition(
        &TimeFamily::separable(vec![SymbolSpec::drift(vec![1.0])?, SymbolSpec::drift(vec![-1.0])?])?,
        &[0.4, 0.6],
        &[1.5],
    )?;
    let b0 = SymbolSpec::block(power(1.0, 1), 0, 2)?;
    let b1 = SymbolSpec::block(power(2.0, 1), 1, 2)?;
    let e19 = eval_a_setpartition(&TimeFamily::separable(vec![b0, b1])?, &[0.5, 0.9], &[0.7, -1.3])?;
    let examples = [
        (e16, C::new(16.0, 0.0)),
        (e17, C::new(0.0, c * 1.5f64.powi(3))),
        (e18, C::new(2.25, 0.0)),
        (e19, C::new(0.7 * 1.69, 0.0)),
    ];
    let ex_err = examples.iter().map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    Ok(Outcome {
        passed: closed_sp <= 1e-9 && fd_err <= 1e-5 && ratio_ok && !ratios.is_empty() && ex_err <= 1e-12,
        detail: format!(
            "closed vs set-partition {closed_sp:.1e} (≤1e-9); FD at h=1e-3 {fd_err:.1e} (≤1e-5); \
             halving ratios in [{rmin:.2}, {rmax:.2}] (4±1.2); examples ξ⁴, icξ³, ξ², ψ₁(ξ¹)ψ₂(ξ²) max error {ex_err:.1e}"
        ),
    })
}

fn wide_gaussian() -> Result<SpatialField<f64>> {
    let grid = FrequencyGrid::new(1, 1024, 2.0 * PI / 102.4)?;
    Ok(SpatialField::from_real_fn(grid, |x| (-x[0] * x[0] / 32.0).exp()))
}

fn goursat_problem(c: Coupling, h: f64) -> Result<GoursatProblem<f64>> {
    GoursatProblem::new(biharmonic(c), wide_gaussian()?, (1.0, 1.0), (h, h), GoursatOptions::default())
}

fn goursat() -> Result<Outcome> {
    let p = goursat_problem(Coupling::Product, 1.0 / 64.0)?;
    let sol = solve_transformed(&p)?;
    let e = sol.errors();
    let (e1, e2, ratio) = convergence_ratio(&p)?;
    Ok(Outcome {
        passed: e.global_relative <= 1e-5 && e.against_solution <= 1e-5 && (ratio - 4.0).abs() <= 0.8,
        detail: format!(
            "global relative error {:.2e} (vs ‖φ‖) / {:.2e} (vs ‖v‖) at steps 1/64, ≤1e-5; \
             {} solved, {} skipped, {} excluded; halving {e1:.2e} → {e2:.2e}, ratio {ratio:.3} (4±0.8)",
            e.global_relative, e.against_solution, e.solved, e.skipped, e.excluded
        ),
    })
}

fn residual() -> Result<Outcome> {
    let mut parts = Vec::new();
    let mut ok = true;
    for c in [Coupling::Product, Coupling::Saturating] {
        let p = goursat_problem(c, 1.0 / 8.0)?;
        let r = check_residual(&ExactSource { problem: &p }, &default_residual_points(1.0, 1.0), 0.1)?;
        ok &= r.quadratic && r.accepted;
        parts.push(format!(
            "{c:?}: {:.2e} → {:.2e}, ratio {:.2}",
            r.max_relative[0], r.max_relative[1], r.ratio
        ));
        if c == Coupling::Product {
            let ctl = NegativeControl {
                family: p.family().clone(),
                base: p.datum().clone(),
            };
            let n = check_residual(&ctl, &default_residual_points(1.0, 1.0), 0.1)?;
            ok &= !n.accepted;
            parts.push(format!(
                "negative control residual {:.2e}, ratio {:.2}, rejected {}",
                n.max_relative[1], n.ratio, !n.accepted
            ));
        }
    }
    Ok(Outcome {
        passed: ok,
        detail: parts.join("; "),
    })
}

fn boundary_limits() -> Result<Outcome> {
    let eps = [1e-1, 1e-2, 1e-3, 1e-4];
    let mut ok = true;
    let mut slopes = Vec::new();
    let uncoupled = TimeFamily::interaction(power(2.0, 1), power(2.0, 1), SymbolSpec::zero(1)?, Coupling::Product)?;
    let problems = [
        ("product", goursat_problem(Coupling::Product, 0.125)?),
        ("saturating", goursat_problem(Coupling::Saturating, 0.125)?),
        (
            "uncoupled",
            GoursatProblem::new(uncoupled, wide_gaussian()?, (1.0, 1.0), (0.125, 0.125), GoursatOptions::default())?,
        ),
    ];
    for (name, p) in &problems {
        for axis in [Axis::S, Axis::T] {
            let r = check_boundary_limits(p, axis, 0.7, &eps)?;
            let bounded = r.samples.iter().all(|s| s.difference <= r.bound * s.epsilon * (1.0 + 1e-12));
            ok &= r.passed && r.linear && r.monotone && bounded;
            slopes.push(format!("{name}/{axis:?} slope {:.4} C={:.3}", r.slope, r.bound));
        }
    }
    Ok(Outcome {
        passed: ok,
        detail: format!("s∈{{1e-1..1e-4}}: {}", slopes.join(", ")),
    })
}

fn contraction_commutation() -> Result<Outcome> {
    let mut worst_ratio = 0.0f64;
    let mut worst_comm = 0.0f64;
    let mut count = 0;
    for n in [1usize, 2] {
        let g = FrequencyGrid::new(n, if n == 1 { 512 } else { 64 }, 0.5)?;
        let u = SpatialField::random_smooth(g, 21);
        let cat = catalog::<f64>(n);
        for (_, psi) in &cat {
            for (_, other) in &cat {
                let f = TimeFamily::separable(vec![psi.clone(), other.clone()])?;
                let a = f.at(&[0.8, 0.3])?;
                let b = f.at(&[0.2, 1.1])?;
                let r = check_contraction(&a, &u)?;
                if !r.l2_ok {
                    worst_ratio = f64::INFINITY;
                }
                worst_ratio = worst_ratio.max(r.l2_out / r.l2_in);
                worst_comm = worst_comm.max(check_commutation(&a, &b, &u)?.relative_difference);
                count += 1;
            }
        }
    }
    Ok(Outcome {
        passed: worst_ratio <= 1.0 + 1e-12 && worst_comm <= 1e-12,
        detail: format!(
            "{count} symbol pairs: max ‖Tu‖/‖u‖ = {worst_ratio:.15} (≤1+1e-12), max commutator {worst_comm:.2e} (≤1e-12)"
        ),
    })
}

fn monte_carlo() -> Result<Outcome> {
    let mut parts = Vec::new();
    let mut ok = true;
    let f = heat();
    let g = FrequencyGrid::auto(&f.at(&[1.0, 1.0])?, 1024, &AutoGrid::default())?;
    let b = sample_family(&f, &[1.0, 1.0], g, &SynthOptions::default(), 100_000, 1)?;
    let r = ecf_check(&b, &default_probes(), ToleranceTier::Strict)?;
    ok &= r.passed;
    parts.push(format!(
        "Gaussian ECF max dev {:.2e} vs 3.5/√m={:.2e}",
        r.max_deviation, r.statistical
    ));

    let f = cauchy();
    let g = FrequencyGrid::auto(&f.at(&[1.0, 1.0])?, 4096, &AutoGrid::default())?;
    let b = sample_family(&f, &[1.0, 1.0], g, &SynthOptions::default(), 100_000, 2)?;
    let r = ecf_check(&b, &default_probes(), ToleranceTier::HeavyTail)?;
    ok &= r.passed;
    parts.push(format!("Cauchy ECF max dev {:.2e}", r.max_deviation));

    let sqrt = f.restrict_to_curve(0, CurveReparametrization::Sqrt, vec![1.0])?;
    let g = FrequencyGrid::auto(&sqrt.at(1.0)?, 4096, &AutoGrid::default())?;
    let r = semigroup_convolution_check(&sqrt, 1.0, 1.0, g, ToleranceTier::HeavyTail)?;
    ok &= r.passed;
    parts.push(format!("sqrt curve L¹ {:.1e}", r.relative_l1));

    let m2 = TimeFamily::monomial(vec![2, 1], power(2.0, 1))?;
    let axis = m2.restrict_to_curve(1, CurveReparametrization::Identity, vec![2.0])?;
    let g = FrequencyGrid::auto(&axis.at(0.5)?, 1024, &AutoGrid::default())?;
    let r = semigroup_convolution_check(&axis, 0.5, 0.75, g, ToleranceTier::Strict)?;
    ok &= r.passed;
    parts.push(format!("t-axis at s₀=2 L¹ {:.1e}", r.relative_l1));

    let bent = m2.restrict_to_curve(0, CurveReparametrization::Identity, vec![1.0])?;
    let g = FrequencyGrid::auto(&bent.at(1.0)?, 1024, &AutoGrid::default())?;
    let contract = matches!(
        semigroup_convolution_check(&bent, 1.0, 1.0, g, ToleranceTier::Strict),
        Err(Error::Contract(_))
    );
    let d = curve_convolution_discrepancy(&bent, 1.0, 1.0, g)?;
    let expected_failure = contract && d > ToleranceTier::Strict.tolerance();
    ok &= expected_failure;
    parts.push(format!(
        "nonlinear s↦(s,1) control: contract error {contract}, L¹ {d:.2e} → expected failure {expected_failure}"
    ));
    Ok(Outcome {
        passed: ok,
        detail: parts.join("; "),
    })
}

fn main() {
    let s = |x: u64| Some(Duration::from_secs(x));
    let results = [
        run(1, "Schoenberg PSD suite", s(5), schoenberg),
        run(2, "density recovery", None, densities),
        run(3, "multiplier vs convolution", None, multiplier_vs_convolution),
        run(4, "symbol calculus three-way", None, symbol_calculus),
        run(5, "Goursat solver", s(30), goursat),
        run(6, "residual check", None, residual),
        run(7, "boundary limits", None, boundary_limits),
        run(8, "contraction and commutation", None, contraction_commutation),
        run(9, "Monte Carlo", s(10), monte_carlo),
    ];
    let passed = results.iter().filter(|p| **p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
