use std::path::{Path, PathBuf};

use multilevy::goursat::{
    convergence_ratio, exact_solution, solve_transformed, GoursatOptions, GoursatProblem,
};
use multilevy::{Family, Grid, Spatial};
use serde::{Deserialize, Serialize};

use crate::args::Common;
use crate::output::{axis_names, num, read_field, read_json, Csv, Failure, Outcome};
use crate::summary::Summary;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Datum {
    /// `exp(−|x|²/(2·variance))`.
    Gaussian { variance: f64 },
    RandomSmooth { seed: u64 },
    /// Field file, relative paths resolved against the problem file.
    Field { path: PathBuf },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub points: usize,
    pub dxi: f64,
}

fn default_target() -> f64 {
    1e-5
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub family: Family,
    pub datum: Datum,
    /// Required unless the datum is a field file.
    #[serde(default)]
    pub grid: Option<GridSpec>,
    pub extent: [f64; 2],
    pub steps: [f64; 2],
    #[serde(default)]
    pub options: GoursatOptions,
    /// Largest accepted relative error.
    #[serde(default = "default_target")]
    pub target: f64,
    /// Also solve with halved steps and check the ratio of errors.
    #[serde(default)]
    pub convergence: bool,
}

fn datum(file: &ProblemFile, base: &Path, common: &Common) -> Outcome<Spatial> {
    let n = file.family.dimension();
    let grid = || -> Outcome<Grid> {
        let spec = file.grid;
        let points = common.grid_n.or(spec.map(|g| g.points));
        let dxi = common.grid_dxi.or(spec.map(|g| g.dxi));
        match (points, dxi) {
            (Some(p), Some(d)) => Ok(Grid::new(n, p, d)?),
            _ => Err(Failure::Usage("problem needs a grid (points and dxi)".into())),
        }
    };
    match &file.datum {
        Datum::Gaussian { variance } => {
            if !(*variance > 0.0) {
                return Err(Failure::Usage("datum variance must be positive".into()));
            }
            let v = *variance;
            Ok(Spatial::from_real_fn(grid()?, move |x: &[f64]| {
                (-x.iter().map(|c| c * c).sum::<f64>() / (2.0 * v)).exp()
            }))
        }
        Datum::RandomSmooth { seed } => Ok(Spatial::random_smooth(grid()?, *seed)),
        Datum::Field { path } => {
            if file.grid.is_some() || common.grid_n.is_some() || common.grid_dxi.is_some() {
                return Err(Failure::Usage("a field datum fixes its own grid".into()));
            }
            read_field(&base.join(path))
        }
    }
}

pub fn run(path: &Path, common: &Common, sum: &mut Summary) -> Outcome {
    let file: ProblemFile = read_json(path)?;
    sum.input("problem", &file);
    let base = path.parent().unwrap_or(Path::new("."));
    let u = datum(&file, base, common)?;
    sum.input("grid", u.grid());
    let p = GoursatProblem::new(
        file.family.clone(),
        u,
        (file.extent[0], file.extent[1]),
        (file.steps[0], file.steps[1]),
        file.options,
    )?;
    sum.tol("target", file.target);
    let sol = solve_transformed(&p)?;
    let e = sol.errors();
    sum.at_most("global_relative", e.global_relative, file.target);
    sum.at_most("against_solution", e.against_solution, file.target);
    sum.diag("at_corner", e.at_corner);
    sum.diag("max_frequency_error", e.max_frequency_error);
    sum.diag("solved", e.solved);
    sum.diag("skipped", e.skipped);
    sum.diag("excluded", e.excluded);
    sum.diag("max_level", e.max_level);
    if file.convergence {
        let (e1, e2, ratio) = convergence_ratio(&p)?;
        sum.tol("convergence_ratio_band", 0.8);
        sum.check("convergence_ratio", ratio, 4.0, (ratio - 4.0).abs() <= 0.8);
        sum.diag("halved_error", e2);
        sum.diag("base_error", e1);
    }

    let mut errs = Csv::create(&common.out, "errors.csv", &["s", "t", "relative"].map(String::from))?;
    for node in &e.nodes {
        errs.row(&[num(node.s), num(node.t), num(node.relative)])?;
    }
    errs.finish()?;

    let mut freq = Csv::create(
        &common.out,
        "frequencies.csv",
        &["index", "xi0", "xi1", "status", "level", "conditioning", "error_estimate", "max_error"].map(String::from),
    )?;
    for f in sol.frequencies() {
        let status = serde_json::to_value(f.status)
            .ok()
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_default();
        freq.row(&[
            f.index.to_string(),
            num(f.xi[0]),
            num(f.xi[1]),
            status,
            f.level.to_string(),
            num(f.conditioning),
            num(f.error_estimate),
            num(f.max_error),
        ])?;
    }
    freq.finish()?;

    let grid = *p.datum().grid();
    let n = grid.dimension();
    let mut header = vec!["s".to_string(), "t".to_string()];
    header.extend(axis_names("x", n));
    header.extend(["re_v", "im_v", "re_exact", "im_exact", "abs_err"].map(String::from));
    let mut csv = Csv::create(&common.out, "solution.csv", &header)?;
    for (a, s) in sol.s_values().iter().enumerate() {
        for (b, t) in sol.t_values().iter().enumerate() {
            let v = sol.assemble(a, b)?;
            let exact = exact_solution(&p, *s, *t)?;
            for k in 0..grid.len() {
                let x = grid.x(k);
                let (vv, ve) = (v.values()[k], exact.values()[k]);
                let mut row = vec![num(*s), num(*t)];
                row.extend(x[..n].iter().map(|c| num(*c)));
                row.extend([num(vv.re), num(vv.im), num(ve.re), num(ve.im), num((vv - ve).norm())]);
                csv.row(&row)?;
            }
        }
    }
    csv.finish()?;
    sum.outputs
        .extend(["errors.csv", "frequencies.csv", "solution.csv"].map(String::from));
    Ok(())
}
