use super::*;
use crate::spectral::AutoGrid;
use crate::symbols::{catalog, SymbolSpec};
use crate::timefamily::CurveReparametrization;

fn heat() -> TimeFamily<f64> {
    let half = SymbolSpec::quadratic(vec![vec![0.5]]).unwrap();
    TimeFamily::separable(vec![half.clone(), half]).unwrap()
}

fn cauchy_family() -> TimeFamily<f64> {
    TimeFamily::monomial(vec![2, 1], SymbolSpec::power(1.0, 1).unwrap()).unwrap()
}

fn auto(family: &TimeFamily<f64>, s: &[f64], points: usize) -> FrequencyGrid<f64> {
    FrequencyGrid::auto(&family.at(s).unwrap(), points, &AutoGrid::default()).unwrap()
}

#[test]
fn gaussian_sample_variance() {
    let f = heat();
    let b = sample_family(&f, &[1.0, 1.0], auto(&f, &[1.0, 1.0], 1024), &SynthOptions::default(), 100_000, 7).unwrap();
    assert_eq!(b.len(), 100_000);
    assert!((b.variance() - 2.0).abs() <= 0.05, "{}", b.variance());
    assert!(b.mean().abs() < 0.03);
    let half = b.grid().extent() / 2.0;
    assert!(b.draws().iter().all(|x| *x >= -half && *x < half));
}

#[test]
fn same_seed_same_batch() {
    let f = heat();
    let g = auto(&f, &[1.0, 1.0], 1024);
    let a = sample_family(&f, &[1.0, 1.0], g, &SynthOptions::default(), 5000, 42).unwrap();
    let b = sample_family(&f, &[1.0, 1.0], g, &SynthOptions::default(), 5000, 42).unwrap();
    let c = sample_family(&f, &[1.0, 1.0], g, &SynthOptions::default(), 5000, 43).unwrap();
    assert_eq!(a.draws(), b.draws());
    assert_ne!(a.draws(), c.draws());
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let d = single.install(|| sample_family(&f, &[1.0, 1.0], g, &SynthOptions::default(), 5000, 42).unwrap());
    assert_eq!(a.draws(), d.draws());
}

#[test]
fn delta_measure_draws_stay_in_one_cell() {
    let grid = FrequencyGrid::<f64>::new(1, 256, 0.1).unwrap();
    let mut d = vec![0.0; 256];
    d[grid.origin()] = 1.0 / grid.dx();
    let m = GriddedMeasure::from_density(grid, d);
    let b = sample_measure(&m, 1000, 1).unwrap();
    assert!(b.draws().iter().all(|x| x.abs() <= grid.dx()));
}

#[test]
fn two_dimensional_sampling_is_unsupported() {
    let grid = FrequencyGrid::new(2, 16, 0.5).unwrap();
    let m = GriddedMeasure::from_density(grid, vec![1.0 / (grid.dx() * grid.dx() * 256.0); 256]);
    assert!(matches!(sample_measure(&m, 10, 1), Err(Error::Capability(_))));
}

#[test]
fn negative_density_is_clamped_and_reported() {
    let grid = FrequencyGrid::<f64>::new(1, 8, 1.0).unwrap();
    let dx = grid.dx();
    let d = vec![0.0, -0.1, 0.5, 0.5, 0.2, 0.0, 0.0, 0.0].into_iter().map(|v| v / dx).collect();
    let m = GriddedMeasure::from_density(grid, d);
    let b = sample_measure(&m, 100, 3).unwrap();
    assert!((b.clamped_mass() - 0.1 / 1.2).abs() < 1e-12);
    let lo = grid.x(2)[0] - dx / 2.0;
    let hi = grid.x(4)[0] + dx / 2.0;
    assert!(b.draws().iter().all(|x| *x >= lo && *x <= hi));
}

#[test]
fn gaussian_ecf_within_envelope() {
    let f = heat();
    let b = sample_family(&f, &[1.0, 1.0], auto(&f, &[1.0, 1.0], 1024), &SynthOptions::default(), 100_000, 11).unwrap();
    let r = ecf_check(&b, &default_probes(), ToleranceTier::Strict).unwrap();
    assert!(r.passed, "{r:?}");
    assert!(r.max_deviation < 0.5 * r.statistical);
    let zero = r.probes.iter().find(|p| p.xi == 0.0).unwrap();
    assert_eq!(zero.ecf, [1.0, 0.0]);
}

#[test]
fn cauchy_ecf_within_envelope() {
    let f = cauchy_family();
    let s = [1.0, 1.0];
    let b = sample_family(&f, &s, auto(&f, &s, 4096), &SynthOptions::default(), 100_000, 5).unwrap();
    assert!(b.heavy_tailed());
    let r = ecf_check(&b, &default_probes(), ToleranceTier::HeavyTail).unwrap();
    assert!(r.passed, "{r:?}");
    for p in &r.probes {
        assert!((p.target[0] - (-p.xi.abs()).exp()).abs() < 1e-12);
    }
}

#[test]
fn shifted_sample_fails_ecf() {
    let f = heat();
    let b = sample_family(&f, &[1.0, 1.0], auto(&f, &[1.0, 1.0], 1024), &SynthOptions::default(), 100_000, 11).unwrap();
    let wrong = heat();
    let b = b.with_source(wrong, vec![0.5, 0.5]);
    assert!(!ecf_check(&b, &default_probes(), ToleranceTier::Strict).unwrap().passed);
}

#[test]
fn ecf_probe_outside_band_is_rejected() {
    let f = heat();
    let b = sample_family(&f, &[1.0, 1.0], auto(&f, &[1.0, 1.0], 256), &SynthOptions::default(), 100, 1).unwrap();
    let far = 2.0 * std::f64::consts::PI / b.grid().dx();
    assert!(ecf_check(&b, &[far], ToleranceTier::Strict).is_err());
}

#[test]
fn catalog_ecf_envelope() {
    for (name, psi) in catalog::<f64>(1) {
        let f = TimeFamily::separable(vec![psi]).unwrap();
        let opts = AutoGrid {
            allow_undecayed: true,
            ..AutoGrid::default()
        };
        let g = FrequencyGrid::auto(&f.at(&[1.0]).unwrap(), 4096, &opts).unwrap();
        let synth = SynthOptions {
            allow_undecayed: true,
            ..SynthOptions::default()
        };
        for (m, seed) in [(10_000, 101), (100_000, 202)] {
            let b = sample_family(&f, &[1.0], g, &synth, m, seed).unwrap();
            let tier = ToleranceTier::for_heavy_tail(b.heavy_tailed());
            let probes: Vec<f64> = default_probes()
                .into_iter()
                .filter(|p| p.abs() <= std::f64::consts::PI / g.dx())
                .collect();
            let r = ecf_check(&b, &probes, tier).unwrap();
            assert!(r.passed, "{name} m={m}: {r:?}");
        }
    }
}

#[test]
fn convolution_holds_on_sqrt_curve() {
    let f = cauchy_family();
    let r = f.restrict_to_curve(0, CurveReparametrization::Sqrt, vec![1.0]).unwrap();
    assert!(r.is_linear());
    let g = FrequencyGrid::auto(&r.at(1.0).unwrap(), 4096, &AutoGrid::default()).unwrap();
    let rep = semigroup_convolution_check(&r, 1.0, 1.0, g, ToleranceTier::HeavyTail).unwrap();
    assert!(rep.passed, "{rep:?}");
    assert!(rep.relative_l1 < 1e-10);
}

#[test]
fn convolution_holds_on_time_axis() {
    let f = TimeFamily::monomial(vec![2, 1], SymbolSpec::power(2.0, 1).unwrap()).unwrap();
    let r = f.restrict_to_curve(1, CurveReparametrization::Identity, vec![2.0]).unwrap();
    assert!(r.is_linear());
    let g = FrequencyGrid::auto(&r.at(0.5).unwrap(), 1024, &AutoGrid::default()).unwrap();
    let rep = semigroup_convolution_check(&r, 0.5, 0.75, g, ToleranceTier::Strict).unwrap();
    assert!(rep.passed, "{rep:?}");
}

#[test]
fn zero_time_is_identity() {
    let f = TimeFamily::monomial(vec![2, 1], SymbolSpec::power(2.0, 1).unwrap()).unwrap();
    let r = f.restrict_to_curve(0, CurveReparametrization::Sqrt, vec![1.0]).unwrap();
    let g = FrequencyGrid::auto(&r.at(1.0).unwrap(), 1024, &AutoGrid::default()).unwrap();
    let d = curve_convolution_discrepancy(&r, 1.0, 0.0, g).unwrap();
    assert!(d < 1e-13, "{d}");
}

#[test]
fn nonlinear_curve_is_a_contract_error_and_fails_raw() {
    let f = TimeFamily::monomial(vec![2, 1], SymbolSpec::power(2.0, 1).unwrap()).unwrap();
    let r = f.restrict_to_curve(0, CurveReparametrization::Identity, vec![1.0]).unwrap();
    assert!(!r.is_linear());
    let g = FrequencyGrid::auto(&r.at(1.0).unwrap(), 1024, &AutoGrid::default()).unwrap();
    assert!(matches!(
        semigroup_convolution_check(&r, 1.0, 1.0, g, ToleranceTier::Strict),
        Err(Error::Contract(_))
    ));
    let d = curve_convolution_discrepancy(&r, 1.0, 1.0, g).unwrap();
    assert!(d > 0.1, "{d}");
}

#[test]
fn cdf_sampling_matches_cell_masses() {
    // Chi-square style check on a coarse density.
    let grid = FrequencyGrid::<f64>::new(1, 8, 1.0).unwrap();
    let dx = grid.dx();
    let w = [0.0, 0.05, 0.1, 0.2, 0.3, 0.2, 0.1, 0.05];
    let m = GriddedMeasure::from_density(grid, w.iter().map(|v| v / dx).collect());
    let b = sample_measure(&m, 200_000, 9).unwrap();
    let mut counts = [0usize; 8];
    for x in b.draws() {
        let k = ((x / dx) + 4.5).floor() as usize;
        counts[k.min(7)] += 1;
    }
    for (c, p) in counts.iter().zip(w) {
        let expect = p * 200_000.0;
        assert!((*c as f64 - expect).abs() <= 5.0 * expect.sqrt() + 1.0, "{counts:?}");
    }
}

#[test]
fn f32_sampling() {
    let half = SymbolSpec::<f32>::quadratic(vec![vec![0.5]]).unwrap();
    let f = TimeFamily::separable(vec![half]).unwrap();
    let g = FrequencyGrid::auto(&f.at(&[2.0]).unwrap(), 1024, &AutoGrid::default()).unwrap();
    let opts = SynthOptions {
        mass_tol: 1e-5,
        ..SynthOptions::default()
    };
    let b = sample_family(&f, &[2.0], g, &opts, 20_000, 3).unwrap();
    assert!((b.variance() - 2.0).abs() < 0.1);
}
