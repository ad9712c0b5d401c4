//! CSV and JSON output with a fixed, lossless number format.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::linalg::CMatrix;

/// 17 significant digits, enough to round-trip any `f64`.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// `(re, im)` cells.
pub fn complex_cells(z: Complex64) -> [String; 2] {
    [num(z.re), num(z.im)]
}

/// Writes a header and rows of pre-formatted cells.
pub fn write_csv<I, R>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.into_iter().collect::<Vec<_>>())?;
    }
    w.flush()?;
    Ok(())
}

/// One row per entry: `i, j, re, im`.
pub fn write_matrix_csv(path: &Path, m: &CMatrix) -> Result<()> {
    let rows = (0..m.nrows()).flat_map(|i| {
        (0..m.ncols()).map(move |j| {
            let [re, im] = complex_cells(m[(i, j)]);
            vec![i.to_string(), j.to_string(), re, im]
        })
    });
    write_csv(path, &["i", "j", "re", "im"], rows)
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.1 + 0.2] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn matrix_file_layout() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.csv");
        write_matrix_csv(&p, &CMatrix::from_fn(1, 2, |_, j| Complex64::new(j as f64, -1.0))).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "i,j,re,im");
        assert_eq!(lines[2], "0,1,1.0000000000000000e0,-1.0000000000000000e0");
    }
}
