use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use multilevy::spectral::{AutoGrid, Multiplier};
use multilevy::{Error, Family, Grid, Spatial};
use serde::de::DeserializeOwned;

use crate::args::Common;

/// How a run ended, mapped onto the exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments, unreadable or malformed input: exit 1.
    Usage(String),
    /// A numerical contract was not met: exit 2.
    Accuracy(String),
}

impl Failure {
    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Accuracy(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Accuracy { .. } | Error::GridTooSmall { .. } => Failure::Accuracy(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<String> for Failure {
    fn from(m: String) -> Self {
        Failure::Usage(m)
    }
}

pub type Outcome<T = ()> = std::result::Result<T, Failure>;

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Outcome<T> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

pub fn read_family(path: &Path) -> Outcome<Family> {
    read_json(path)
}

/// `.mlvf` files use the binary layout, everything else CSV.
pub fn read_field(path: &Path) -> Outcome<Spatial> {
    let f = File::open(path).map_err(|e| format!("cannot open {}: {e}", path.display()))?;
    let binary = path.extension().is_some_and(|e| e == "mlvf");
    Ok(if binary {
        Spatial::read_binary(std::io::BufReader::new(f))?
    } else {
        Spatial::read_csv(f)?
    })
}

pub fn create(out: &Path, name: &str) -> Outcome<(BufWriter<File>, PathBuf)> {
    std::fs::create_dir_all(out).map_err(|e| format!("cannot create {}: {e}", out.display()))?;
    let path = out.join(name);
    let f = File::create(&path).map_err(|e| format!("cannot create {}: {e}", path.display()))?;
    Ok((BufWriter::new(f), path))
}

/// 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct Csv {
    w: BufWriter<File>,
}

impl Csv {
    pub fn create(out: &Path, name: &str, header: &[String]) -> Outcome<Self> {
        let (w, _) = create(out, name)?;
        let mut c = Csv { w };
        c.row(header)?;
        Ok(c)
    }

    pub fn row<S: AsRef<str>>(&mut self, cells: &[S]) -> Outcome {
        let line = cells.iter().map(|c| c.as_ref()).collect::<Vec<_>>().join(",");
        writeln!(self.w, "{line}").map_err(|e| Failure::Usage(e.to_string()))
    }

    pub fn finish(mut self) -> Outcome {
        self.w.flush().map_err(|e| Failure::Usage(e.to_string()))
    }
}

pub fn axis_names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|d| format!("{prefix}{d}")).collect()
}

/// Both overrides: explicit grid. Otherwise the spacing is chosen
/// automatically for the multiplier.
pub fn grid_for<M: Multiplier<f64> + ?Sized>(m: &M, common: &Common, allow_undecayed: bool) -> Outcome<Grid> {
    let n = m.dimension();
    let points = common.grid_n.unwrap_or_else(|| Grid::default_points(n));
    Ok(match common.grid_dxi {
        Some(dxi) => Grid::new(n, points, dxi)?,
        None => {
            let opts = AutoGrid {
                allow_undecayed,
                ..AutoGrid::default()
            };
            Grid::auto(m, points, &opts)?
        }
    })
}

/// Explicit grid with `Δx = Δξ` as the fallback spacing.
pub fn balanced_grid(n: usize, common: &Common) -> Outcome<Grid> {
    let points = common.grid_n.unwrap_or_else(|| Grid::default_points(n));
    let dxi = common
        .grid_dxi
        .unwrap_or_else(|| (2.0 * std::f64::consts::PI / points as f64).sqrt());
    Ok(Grid::new(n, points, dxi)?)
}
