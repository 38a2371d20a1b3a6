use std::path::Path;

use multilevy::montecarlo::{default_probes, ecf_check, sample_family, ToleranceTier};
use multilevy::spectral::{apply_t, apply_t_convolution, synth_measure, SynthOptions};
use multilevy::symbolcalc::{eval_a_closed, eval_a_fd, eval_a_setpartition, Method};
use multilevy::timefamily::{estimate_growth, radial_grid, FamilyKind};
use multilevy::{Family, Spatial};
use num_complex::Complex;
use serde::Serialize;

use crate::args::{ApplyMethod, Common, SymbolMethod, Times};
use crate::output::{axis_names, balanced_grid, create, grid_for, num, read_family, read_field, Csv, Failure, Outcome};
use crate::summary::Summary;

const CONVOLUTION_AGREEMENT: f64 = 1e-8;
const CONTRACTION_SLACK: f64 = 1e-12;
const CLOSED_FORM_AGREEMENT: f64 = 1e-9;

fn load(path: &Path, times: &Times, sum: &mut Summary) -> Outcome<(Family, Vec<f64>)> {
    let family = read_family(path)?;
    let s = times.resolve(family.times())?;
    sum.input("family", &family);
    sum.input("times", &s);
    Ok((family, s))
}

pub fn density(path: &Path, times: &Times, allow_undecayed: bool, common: &Common, sum: &mut Summary) -> Outcome {
    let (family, s) = load(path, times, sum)?;
    let grid = grid_for(&family.at(&s)?, common, allow_undecayed)?;
    let opts = SynthOptions {
        allow_undecayed,
        ..SynthOptions::default()
    };
    sum.input("grid", grid);
    sum.tol("mass", opts.mass_tol);
    sum.tol("boundary", opts.boundary_tol);
    let m = synth_measure(&family, &s, grid, &opts)?;
    let d = m.diagnostics();
    sum.at_most("mass_deviation", (d.mass - 1.0).abs(), opts.mass_tol);
    sum.at_most("negativity", d.negativity, d.negativity_tol);
    sum.diag("measure", d);
    sum.diag("density_at_origin", m.at_origin());

    let n = grid.dimension();
    let mut header = axis_names("x", n);
    header.push("density".into());
    let mut csv = Csv::create(&common.out, "density.csv", &header)?;
    for (i, p) in m.density().iter().enumerate() {
        let x = grid.x(i);
        let mut row: Vec<String> = x[..n].iter().map(|v| num(*v)).collect();
        row.push(num(*p));
        csv.row(&row)?;
    }
    csv.finish()?;
    sum.outputs.push("density.csv".into());
    Ok(())
}

pub fn apply(
    path: &Path,
    times: &Times,
    input: Option<&Path>,
    method: ApplyMethod,
    binary: bool,
    common: &Common,
    sum: &mut Summary,
) -> Outcome {
    let (family, s) = load(path, times, sum)?;
    let u = match input {
        Some(p) => {
            sum.input("field", p.display().to_string());
            read_field(p)?
        }
        None => {
            let g = balanced_grid(family.dimension(), common)?;
            sum.input("field", format!("random_smooth(seed={})", common.seed));
            Spatial::random_smooth(g, common.seed)
        }
    };
    sum.input("grid", u.grid());
    sum.input("method", format!("{method:?}").to_lowercase());
    let applied = apply_t(&family, &s, &u)?;
    sum.diag("tail_ratio", applied.tail_ratio);
    sum.diag("warnings", &applied.warnings);
    sum.tol("contraction_slack", CONTRACTION_SLACK);
    let ratio = applied.field.l2_norm() / u.l2_norm().max(f64::MIN_POSITIVE);
    sum.at_most("l2_contraction", ratio, 1.0 + CONTRACTION_SLACK);

    let result = match method {
        ApplyMethod::Multiplier => applied.field,
        ApplyMethod::Convolution | ApplyMethod::Both => {
            let m = synth_measure(
                &family,
                &s,
                *u.grid(),
                &SynthOptions {
                    allow_undecayed: true,
                    ..SynthOptions::default()
                },
            )?;
            let conv = apply_t_convolution(&m, &u)?;
            if method == ApplyMethod::Both {
                sum.tol("convolution_agreement", CONVOLUTION_AGREEMENT);
                sum.at_most(
                    "convolution_agreement",
                    conv.relative_l2_distance(&applied.field),
                    CONVOLUTION_AGREEMENT,
                );
                applied.field
            } else {
                conv
            }
        }
    };
    let (w, _) = create(&common.out, "applied.csv")?;
    result.write_csv(w)?;
    sum.outputs.push("applied.csv".into());
    if binary {
        let (w, _) = create(&common.out, "applied.mlvf")?;
        result.write_binary(w)?;
        sum.outputs.push("applied.mlvf".into());
    }
    Ok(())
}

fn eval_method(family: &Family, s: &[f64], xi: &[f64], m: Method, h: f64) -> multilevy::Result<Complex<f64>> {
    match m {
        Method::SetPartition => eval_a_setpartition(family, s, xi),
        Method::ClosedForm => eval_a_closed(family, s[0], s[1], xi),
        Method::FiniteDifference => Ok(eval_a_fd(family, s, xi, h)?.value),
    }
}

pub fn symbol(
    path: &Path,
    times: &Times,
    method: SymbolMethod,
    fd_step: f64,
    common: &Common,
    sum: &mut Summary,
) -> Outcome {
    let (family, s) = load(path, times, sum)?;
    let grid = balanced_grid(family.dimension(), common)?;
    sum.input("grid", grid);
    sum.input("method", format!("{method:?}"));
    sum.input("fd_step", fd_step);
    let mut methods = method.methods();
    if method == SymbolMethod::All && !matches!(family.kind(), FamilyKind::Interaction { .. }) {
        methods.retain(|m| *m != Method::ClosedForm);
    }
    let n = grid.dimension();
    let mut header = axis_names("xi", n);
    header.extend(["re_a", "im_a", "method"].map(String::from));
    let mut csv = Csv::create(&common.out, "symbol.csv", &header)?;
    let mut closed_gap = 0.0f64;
    let mut fd_gap = 0.0f64;
    for k in 0..grid.len() {
        let xi = &grid.xi(k)[..n];
        let mut reference = None;
        for m in &methods {
            let a = eval_method(&family, &s, xi, *m, fd_step)?;
            let mut row: Vec<String> = xi.iter().map(|v| num(*v)).collect();
            row.extend([num(a.re), num(a.im), m.name().into()]);
            csv.row(&row)?;
            match (m, reference) {
                (Method::SetPartition, _) => reference = Some(a),
                (Method::ClosedForm, Some(r)) => closed_gap = closed_gap.max((a - r).norm() / r.norm().max(1.0)),
                (Method::FiniteDifference, Some(r)) => fd_gap = fd_gap.max((a - r).norm() / r.norm().max(1.0)),
                _ => {}
            }
        }
    }
    csv.finish()?;
    sum.outputs.push("symbol.csv".into());
    if methods.len() > 1 {
        if methods.contains(&Method::ClosedForm) {
            sum.tol("closed_form_agreement", CLOSED_FORM_AGREEMENT);
            sum.at_most("closed_form_agreement", closed_gap, CLOSED_FORM_AGREEMENT);
        }
        // Truncation grows with |ξ|, so this is reported rather than checked.
        sum.diag("finite_difference_gap", fd_gap);
    }
    Ok(())
}

#[derive(Serialize)]
struct Sidecar<'a> {
    family: &'a Family,
    s: &'a [f64],
    seed: u64,
    m: usize,
}

pub fn sample(path: &Path, times: &Times, m: usize, common: &Common, sum: &mut Summary) -> Outcome {
    let (family, s) = load(path, times, sum)?;
    if family.dimension() != 1 {
        return Err(Failure::Usage("sampling is implemented for one-dimensional families only".into()));
    }
    let grid = grid_for(&family.at(&s)?, common, false)?;
    sum.input("grid", grid);
    sum.input("m", m);
    sum.input("seed", common.seed);
    let batch = sample_family(&family, &s, grid, &SynthOptions::default(), m, common.seed)?;
    let tier = common
        .tol_tier
        .map(ToleranceTier::from)
        .unwrap_or_else(|| ToleranceTier::for_heavy_tail(batch.heavy_tailed()));
    sum.input("tol_tier", tier);
    sum.tol("tier", tier.tolerance());
    let nyquist = std::f64::consts::PI / grid.dx();
    let probes: Vec<f64> = default_probes().into_iter().filter(|p| p.abs() <= nyquist).collect();
    let report = ecf_check(&batch, &probes, tier)?;
    for p in &report.probes {
        sum.at_most(&format!("ecf_xi={}", p.xi), p.deviation, p.bound);
    }
    sum.diag("clamped_mass", batch.clamped_mass());
    sum.diag("mean", batch.mean());
    sum.diag("variance", batch.variance());
    sum.diag("statistical_bound", report.statistical);

    let mut csv = Csv::create(&common.out, "samples.csv", &["x".to_string()])?;
    for x in batch.draws() {
        csv.row(&[num(*x)])?;
    }
    csv.finish()?;
    let (mut w, _) = create(&common.out, "samples.json")?;
    let side = Sidecar {
        family: &family,
        s: &s,
        seed: common.seed,
        m,
    };
    serde_json::to_writer_pretty(&mut w, &side).map_err(|e| Failure::Usage(e.to_string()))?;
    std::io::Write::flush(&mut w).map_err(|e| Failure::Usage(e.to_string()))?;
    sum.outputs.extend(["samples.csv".into(), "samples.json".into()]);
    Ok(())
}

fn parse_sigma(text: &str) -> Outcome<Vec<u8>> {
    text.split(',')
        .map(|p| p.trim().parse::<u8>().map_err(|e| Failure::Usage(format!("bad multi-index {text:?}: {e}"))))
        .collect()
}

#[allow(clippy::too_many_arguments)]
pub fn growth(
    path: &Path,
    times: &Times,
    sigma: &[String],
    r_min: f64,
    r_max: f64,
    count: usize,
    common: &Common,
    sum: &mut Summary,
) -> Outcome {
    let (family, s) = load(path, times, sum)?;
    let k = family.times();
    let sigmas: Vec<Vec<u8>> = if sigma.is_empty() {
        (0..1u32 << k)
            .map(|mask| (0..k).map(|j| ((mask >> j) & 1) as u8).collect())
            .collect()
    } else {
        sigma.iter().map(|t| parse_sigma(t)).collect::<Outcome<_>>()?
    };
    sum.input("sigma", &sigmas);
    sum.input("radii", [r_min, r_max]);
    sum.input("count", count);
    let grid = radial_grid(family.dimension(), count, r_min, r_max);
    let mut csv = Csv::create(
        &common.out,
        "growth.csv",
        &["sigma", "r_hat", "c_hat", "fit_residual", "fit_points"].map(String::from),
    )?;
    let mut fits = Vec::new();
    for sg in &sigmas {
        let g = estimate_growth(&family, sg, &s, &grid)?;
        let label = sg.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(";");
        csv.row(&[
            label,
            num(g.r_hat),
            num(g.c_hat),
            num(g.fit_residual),
            g.fit_points.to_string(),
        ])?;
        fits.push(g);
    }
    csv.finish()?;
    sum.diag("fits", &fits);
    sum.outputs.push("growth.csv".into());
    Ok(())
}
