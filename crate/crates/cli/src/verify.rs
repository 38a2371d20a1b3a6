use std::f64::consts::PI;

use multilevy::goursat::{
    check_boundary_limits, check_residual, convergence_ratio, default_residual_points, solve_transformed, Axis,
    ExactSource, GoursatOptions, NegativeControl,
};
use multilevy::montecarlo::{default_probes, ecf_check, sample_family, semigroup_convolution_check, ToleranceTier};
use multilevy::random::CounterRng;
use multilevy::spectral::{
    apply_t, apply_t_convolution, check_commutation, check_contraction, synth_measure, AutoGrid, SynthOptions,
};
use multilevy::symbolcalc::{eval_a_closed, eval_a_fd, eval_a_setpartition};
use multilevy::symbols::{catalog, check_negative_definite, SchoenbergConfig};
use multilevy::timefamily::{Coupling, CurveReparametrization};
use multilevy::{Family, Grid, Problem, Spatial, Symbol};

use crate::args::{Common, Suite};
use crate::output::Outcome;
use crate::summary::Summary;

pub fn run(suite: Suite, common: &Common, sum: &mut Summary) -> Outcome {
    sum.input("suite", format!("{suite:?}").to_lowercase());
    sum.input("seed", common.seed);
    if matches!(suite, Suite::Core | Suite::All) {
        core(common.seed, sum)?;
    }
    if matches!(suite, Suite::Goursat | Suite::All) {
        goursat(sum)?;
    }
    if matches!(suite, Suite::Montecarlo | Suite::All) {
        montecarlo(common.seed, sum)?;
    }
    Ok(())
}

fn power(alpha: f64) -> multilevy::Result<Symbol> {
    Symbol::power(alpha, 1)
}

fn balanced(n: usize, points: usize) -> multilevy::Result<Grid> {
    Grid::new(n, points, (2.0 * PI / points as f64).sqrt())
}

fn core(seed: u64, sum: &mut Summary) -> Outcome {
    let cfg = SchoenbergConfig::<f64>::default();
    let psd_tol = cfg.tol.unwrap_or(1e-8 * cfg.sample_count as f64);
    sum.tol("psd", psd_tol);
    for n in [1, 2] {
        for (name, psi) in catalog::<f64>(n) {
            let r = check_negative_definite(&psi, &cfg)?;
            let worst = r.entries.iter().map(|e| e.min_eigenvalue).fold(f64::INFINITY, f64::min);
            sum.check(&format!("psd/{name}/n{n}"), worst, -psd_tol, r.passed);
        }
    }

    sum.tol("contraction_slack", 1e-12);
    sum.tol("commutation", 1e-12);
    for n in [1usize, 2] {
        let g = Grid::new(n, if n == 1 { 512 } else { 32 }, 0.5)?;
        let u = Spatial::random_smooth(g, seed);
        let cat = catalog::<f64>(n);
        let (mut ratio, mut comm) = (0.0f64, 0.0f64);
        for (_, a) in &cat {
            for (_, b) in &cat {
                let f = Family::separable(vec![a.clone(), b.clone()])?;
                let x = f.at(&[0.8, 0.3])?;
                let y = f.at(&[0.2, 1.1])?;
                let r = check_contraction(&x, &u)?;
                ratio = ratio.max(r.l2_out / r.l2_in);
                comm = comm.max(check_commutation(&x, &y, &u)?.relative_difference);
            }
        }
        sum.at_most(&format!("contraction/n{n}"), ratio, 1.0 + 1e-12);
        sum.at_most(&format!("commutation/n{n}"), comm, 1e-12);
    }

    sum.tol("equivalence", 1e-8);
    let synth = SynthOptions {
        allow_undecayed: true,
        ..SynthOptions::default()
    };
    for n in [1usize, 2] {
        let g = balanced(n, if n == 1 { 1024 } else { 128 })?;
        let mut worst = 0.0f64;
        for (_, psi) in catalog::<f64>(n) {
            let f = Family::separable(vec![psi])?;
            let m = synth_measure(&f, &[0.7], g, &synth)?;
            for j in 0..3 {
                let u = Spatial::random_smooth(g, seed.wrapping_add(j));
                let a = apply_t(&f, &[0.7], &u)?.field;
                worst = worst.max(apply_t_convolution(&m, &u)?.relative_l2_distance(&a));
            }
        }
        sum.at_most(&format!("equivalence/n{n}"), worst, 1e-8);
    }

    sum.tol("closed_form", 1e-9);
    sum.tol("finite_difference", 1e-5);
    let rng = CounterRng::new(seed);
    let (mut closed, mut fd) = (0.0f64, 0.0f64);
    for coupling in [Coupling::Product, Coupling::Saturating] {
        let f = Family::interaction(power(2.0)?, power(1.5)?, power(1.0)?, coupling)?;
        for j in 0..16u64 {
            let s = 0.05 + 0.95 * rng.uniform_at(3 * j);
            let t = 0.05 + 0.95 * rng.uniform_at(3 * j + 1);
            let xi = 3.0 * rng.uniform_at(3 * j + 2) - 1.5;
            let sp = eval_a_setpartition(&f, &[s, t], &[xi])?;
            let scale = sp.norm().max(1e-300);
            closed = closed.max((eval_a_closed(&f, s, t, &[xi])? - sp).norm() / scale);
            fd = fd.max((eval_a_fd(&f, &[s, t], &[xi], 1e-3)?.value - sp).norm() / scale);
        }
    }
    sum.at_most("symbol/closed_form", closed, 1e-9);
    sum.at_most("symbol/finite_difference", fd, 1e-5);
    Ok(())
}

fn biharmonic(c: Coupling, h: f64) -> multilevy::Result<Problem> {
    let f = Family::interaction(power(2.0)?, power(2.0)?, power(2.0)?, c)?;
    let g = Grid::new(1, 1024, 2.0 * PI / 102.4)?;
    let u = Spatial::from_real_fn(g, |x: &[f64]| (-x[0] * x[0] / 32.0).exp());
    Problem::new(f, u, (1.0, 1.0), (h, h), GoursatOptions::default())
}

fn goursat(sum: &mut Summary) -> Outcome {
    sum.tol("goursat", 1e-5);
    let p = biharmonic(Coupling::Product, 1.0 / 64.0)?;
    let e = solve_transformed(&p)?.errors().clone();
    sum.at_most("goursat/global_relative", e.global_relative, 1e-5);
    let (_, _, ratio) = convergence_ratio(&p)?;
    sum.check("goursat/convergence_ratio", ratio, 4.0, (ratio - 4.0).abs() <= 0.8);

    for c in [Coupling::Product, Coupling::Saturating] {
        let p = biharmonic(c, 0.125)?;
        let points = default_residual_points(1.0, 1.0);
        let r = check_residual(&ExactSource { problem: &p }, &points, 0.1)?;
        sum.check(&format!("residual/{c:?}"), r.ratio, 4.0, r.accepted);
        for axis in [Axis::S, Axis::T] {
            let b = check_boundary_limits(&p, axis, 0.7, &[1e-1, 1e-2, 1e-3, 1e-4])?;
            sum.check(&format!("boundary/{c:?}/{axis:?}"), b.slope, 1.0, b.passed);
        }
        if c == Coupling::Product {
            let ctl = NegativeControl {
                family: p.family().clone(),
                base: p.datum().clone(),
            };
            let n = check_residual(&ctl, &points, 0.1)?;
            sum.check("residual/negative_control_rejected", n.ratio, 4.0, !n.accepted);
        }
    }
    Ok(())
}

fn montecarlo(seed: u64, sum: &mut Summary) -> Outcome {
    let half = Symbol::quadratic(vec![vec![0.5]])?;
    let heat = Family::separable(vec![half.clone(), half])?;
    let cauchy = Family::monomial(vec![2, 1], power(1.0)?)?;
    for (name, f, points, tier) in [
        ("gaussian", &heat, 1024, ToleranceTier::Strict),
        ("cauchy", &cauchy, 4096, ToleranceTier::HeavyTail),
    ] {
        let g = Grid::auto(&f.at(&[1.0, 1.0])?, points, &AutoGrid::default())?;
        let b = sample_family(f, &[1.0, 1.0], g, &SynthOptions::default(), 100_000, seed)?;
        let r = ecf_check(&b, &default_probes(), tier)?;
        let bound = r.probes.iter().map(|p| p.bound).fold(0.0, f64::max);
        sum.check(&format!("ecf/{name}"), r.max_deviation, bound, r.passed);
    }
    let sqrt = cauchy.restrict_to_curve(0, CurveReparametrization::Sqrt, vec![1.0])?;
    let g = Grid::auto(&sqrt.at(1.0)?, 4096, &AutoGrid::default())?;
    let r = semigroup_convolution_check(&sqrt, 1.0, 1.0, g, ToleranceTier::HeavyTail)?;
    sum.at_most("semigroup/sqrt_curve", r.relative_l1, r.tolerance);
    let m2 = Family::monomial(vec![2, 1], power(2.0)?)?;
    let axis = m2.restrict_to_curve(1, CurveReparametrization::Identity, vec![2.0])?;
    let g = Grid::auto(&axis.at(0.5)?, 1024, &AutoGrid::default())?;
    let r = semigroup_convolution_check(&axis, 0.5, 0.75, g, ToleranceTier::Strict)?;
    sum.at_most("semigroup/time_axis", r.relative_l1, r.tolerance);
    Ok(())
}
