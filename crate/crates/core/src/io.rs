//! Plain-text fixture formats.
//!
//! Matrix files: first line `d`, then `d` rows of `d` whitespace-separated
//! floats. Dataset files: first line `n d`, then `n` rows of `d` floats.
//! Values are written at 17 significant digits so a file reads back to the
//! exact `f64`s that produced it.

use crate::spd::{SpdMatrix, SymMatrix};
use nalgebra::{DMatrix, DVector};
use std::io::{BufRead, Write};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed {what}: {detail}")]
    Malformed { what: &'static str, detail: String },
    #[error(transparent)]
    NotSpd(#[from] crate::spd::SpdError),
}

fn malformed(what: &'static str, detail: impl Into<String>) -> FormatError {
    FormatError::Malformed { what, detail: detail.into() }
}

/// 17 significant digits: `f64` round-trips exactly.
fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_matrix(w: &mut impl Write, m: &DMatrix<f64>) -> Result<(), FormatError> {
    let d = m.nrows();
    writeln!(w, "{d}")?;
    for i in 0..d {
        let row: Vec<String> = (0..m.ncols()).map(|j| fmt_f64(m[(i, j)])).collect();
        writeln!(w, "{}", row.join(" "))?;
    }
    Ok(())
}

pub fn read_matrix(r: &mut impl BufRead) -> Result<DMatrix<f64>, FormatError> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| malformed("matrix", "empty file"))??;
    let d: usize = header
        .trim()
        .parse()
        .map_err(|e| malformed("matrix", format!("bad dimension line {header:?}: {e}")))?;
    let mut data = Vec::with_capacity(d * d);
    for i in 0..d {
        let line = lines
            .next()
            .ok_or_else(|| malformed("matrix", format!("missing row {i}")))??;
        let row = parse_row(&line, d, "matrix")?;
        data.extend(row);
    }
    Ok(DMatrix::from_row_slice(d, d, &data))
}

fn parse_row(line: &str, expect: usize, what: &'static str) -> Result<Vec<f64>, FormatError> {
    let vals: Result<Vec<f64>, _> = line.split_whitespace().map(str::parse::<f64>).collect();
    let vals = vals.map_err(|e| malformed(what, format!("bad float in {line:?}: {e}")))?;
    if vals.len() != expect {
        return Err(malformed(what, format!("expected {expect} values, got {}", vals.len())));
    }
    Ok(vals)
}

pub fn write_matrix_file(path: impl AsRef<Path>, m: &DMatrix<f64>) -> Result<(), FormatError> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_matrix(&mut f, m)
}

pub fn read_matrix_file(path: impl AsRef<Path>) -> Result<DMatrix<f64>, FormatError> {
    let mut f = std::io::BufReader::new(std::fs::File::open(path)?);
    read_matrix(&mut f)
}

/// Read a matrix file and validate it as SPD.
pub fn read_spd_file(path: impl AsRef<Path>) -> Result<SpdMatrix, FormatError> {
    let m = read_matrix_file(path)?;
    Ok(SpdMatrix::new(SymMatrix::new(m))?)
}

pub fn write_dataset(w: &mut impl Write, samples: &[DVector<f64>]) -> Result<(), FormatError> {
    let n = samples.len();
    let d = samples.first().map_or(0, |s| s.len());
    writeln!(w, "{n} {d}")?;
    for s in samples {
        let row: Vec<String> = s.iter().map(|&x| fmt_f64(x)).collect();
        writeln!(w, "{}", row.join(" "))?;
    }
    Ok(())
}

pub fn read_dataset(r: &mut impl BufRead) -> Result<Vec<DVector<f64>>, FormatError> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| malformed("dataset", "empty file"))??;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 2 {
        return Err(malformed("dataset", format!("bad header {header:?}")));
    }
    let n: usize = parts[0]
        .parse()
        .map_err(|e| malformed("dataset", format!("bad n: {e}")))?;
    let d: usize = parts[1]
        .parse()
        .map_err(|e| malformed("dataset", format!("bad d: {e}")))?;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| malformed("dataset", format!("missing row {i}")))??;
        out.push(DVector::from_vec(parse_row(&line, d, "dataset")?));
    }
    Ok(out)
}

pub fn write_dataset_file(path: impl AsRef<Path>, samples: &[DVector<f64>]) -> Result<(), FormatError> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_dataset(&mut f, samples)
}

pub fn read_dataset_file(path: impl AsRef<Path>) -> Result<Vec<DVector<f64>>, FormatError> {
    let mut f = std::io::BufReader::new(std::fs::File::open(path)?);
    read_dataset(&mut f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;

    #[test]
    fn matrix_roundtrip_is_exact() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(3);
        let m = DMatrix::from_fn(5, 5, |_, _| (rng.random::<f64>() - 0.5) * 1e3);
        let mut buf = Vec::new();
        write_matrix(&mut buf, &m).unwrap();
        let back = read_matrix(&mut std::io::BufReader::new(&buf[..])).unwrap();
        assert_eq!(m, back, "17-significant-digit format must round-trip bitwise");
    }

    #[test]
    fn dataset_roundtrip_is_exact() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(4);
        let samples: Vec<DVector<f64>> =
            (0..7).map(|_| DVector::from_fn(3, |_, _| rng.random::<f64>() * 2.0 - 1.0)).collect();
        let mut buf = Vec::new();
        write_dataset(&mut buf, &samples).unwrap();
        let back = read_dataset(&mut std::io::BufReader::new(&buf[..])).unwrap();
        assert_eq!(samples, back);
    }

    #[test]
    fn malformed_inputs_error() {
        let mut r = std::io::BufReader::new(&b"2\n1.0 2.0\n"[..]);
        assert!(read_matrix(&mut r).is_err());
        let mut r = std::io::BufReader::new(&b"abc\n"[..]);
        assert!(read_matrix(&mut r).is_err());
    }
}
