//! Field import and export. Formats are described in `docs/formats.md`.

use std::io::{Read, Write};

use num_complex::Complex;

use super::{Field, FrequencyGrid, Side};
use crate::error::{input, Result};
use crate::scalar::Real;

pub const MAGIC: [u8; 4] = *b"MLVF";

fn coord_name<S: Side>(axis: usize) -> String {
    if S::TAG == b'X' {
        format!("x{axis}")
    } else {
        format!("xi{axis}")
    }
}

impl<T: Real, S: Side> Field<T, S> {
    /// One row per node in storage order: coordinates, `re`, `im`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let n = self.grid().dimension();
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<String> = (0..n).map(coord_name::<S>).collect();
        header.push("re".into());
        header.push("im".into());
        w.write_record(&header)?;
        let mut row = Vec::with_capacity(n + 2);
        for (i, v) in self.values().iter().enumerate() {
            row.clear();
            let c = self.coords(i);
            for x in &c[..n] {
                row.push(format!("{:.16e}", x.as_f64()));
            }
            row.push(format!("{:.16e}", v.re.as_f64()));
            row.push(format!("{:.16e}", v.im.as_f64()));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a field written by [`Field::write_csv`]; the grid is inferred from
    /// the coordinates and checked node by node.
    pub fn read_csv<R: Read>(source: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(source);
        let header = r.headers()?.clone();
        let n = header.len().saturating_sub(2);
        let expected: Vec<String> = (0..n)
            .map(coord_name::<S>)
            .chain(["re".to_string(), "im".to_string()])
            .collect();
        if !(1..=2).contains(&n) || header.iter().ne(expected.iter().map(String::as_str)) {
            return input(format!(
                "{} field CSV needs header {:?}, found {:?}",
                S::NAME,
                expected,
                header
            ));
        }
        let mut coords: Vec<[f64; 2]> = Vec::new();
        let mut values = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let num = |k: usize| -> Result<f64> {
                rec[k]
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| crate::Error::Input(format!("bad number {:?}: {e}", &rec[k])))
            };
            let mut c = [0.0; 2];
            for (d, slot) in c.iter_mut().enumerate().take(n) {
                *slot = num(d)?;
            }
            coords.push(c);
            values.push(Complex::new(T::lit(num(n)?), T::lit(num(n + 1)?)));
        }
        let total = values.len();
        let points = if n == 1 {
            total
        } else {
            (total as f64).sqrt().round() as usize
        };
        if points < 2 || points.pow(n as u32) != total {
            return input(format!("{total} rows do not form a {n}-dimensional square grid"));
        }
        // Consecutive rows differ along the last axis.
        let h = coords[1][n - 1] - coords[0][n - 1];
        let dxi = if S::TAG == b'X' {
            std::f64::consts::TAU / (points as f64 * h)
        } else {
            h
        };
        let grid = FrequencyGrid::new(n, points, T::lit(dxi))?;
        let field = Self::new(grid, values)?;
        let tol = 1e-9 * (h.abs() * points as f64);
        for (i, c) in coords.iter().enumerate() {
            let want = field.coords(i);
            for d in 0..n {
                if (want[d].as_f64() - c[d]).abs() > tol {
                    return input(format!("row {i} is not on a uniform symmetric grid"));
                }
            }
        }
        Ok(field)
    }

    /// Little-endian binary: magic, side tag, padding, `n`, `N`, `Δξ`,
    /// then interleaved `re, im` doubles.
    pub fn write_binary<W: Write>(&self, mut out: W) -> Result<()> {
        let g = self.grid();
        out.write_all(&MAGIC)?;
        out.write_all(&[S::TAG, 0, 0, 0])?;
        out.write_all(&(g.dimension() as u32).to_le_bytes())?;
        out.write_all(&(g.points() as u32).to_le_bytes())?;
        out.write_all(&g.dxi().as_f64().to_le_bytes())?;
        let mut buf = Vec::with_capacity(16 * g.len());
        for v in self.values() {
            buf.extend_from_slice(&v.re.as_f64().to_le_bytes());
            buf.extend_from_slice(&v.im.as_f64().to_le_bytes());
        }
        out.write_all(&buf)?;
        out.flush()?;
        Ok(())
    }

    pub fn read_binary<R: Read>(mut source: R) -> Result<Self> {
        let mut head = [0u8; 24];
        source.read_exact(&mut head)?;
        if head[..4] != MAGIC {
            return input("not a field file (bad magic)");
        }
        if head[4] != S::TAG {
            return input(format!(
                "field file holds side tag {:?}, expected {} ({:?})",
                head[4] as char,
                S::NAME,
                S::TAG as char
            ));
        }
        let word = |k: usize| u32::from_le_bytes(head[k..k + 4].try_into().expect("4 bytes"));
        let n = word(8) as usize;
        let points = word(12) as usize;
        let dxi = f64::from_le_bytes(head[16..24].try_into().expect("8 bytes"));
        let grid = FrequencyGrid::new(n, points, T::lit(dxi))?;
        let mut payload = vec![0u8; 16 * grid.len()];
        source.read_exact(&mut payload)?;
        let mut extra = [0u8; 1];
        if source.read(&mut extra)? != 0 {
            return input("trailing bytes after field payload");
        }
        let values = payload
            .chunks_exact(16)
            .map(|c| {
                let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
                let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
                Complex::new(T::lit(re), T::lit(im))
            })
            .collect();
        Self::new(grid, values)
    }
}
