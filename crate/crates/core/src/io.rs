//! Coordinate text format for matrices, whitespace-separated vector files,
//! and atomic file writes.
//!
//! Matrix format: first line `rows cols nnz`, then nnz lines `i j value`
//! with 1-based indices. Duplicate (i,j) pairs are forbidden; unlisted
//! entries are zero. Values are written with 17 significant digits, which
//! round-trips every f64 exactly.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::{Matrix, Vector};

/// Formats a float with 17 significant digits.
pub fn format_g17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes bytes to `path` atomically (write to a sibling temp file, then rename).
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp-write");
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn write_matrix(path: &Path, a: &Matrix) -> Result<()> {
    let mut out = String::new();
    let count = crate::matrix::nnz(a);
    out.push_str(&format!("{} {} {}\n", a.rows(), a.cols(), count));
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let v = a.get(i, j);
            if v != 0.0 {
                out.push_str(&format!("{} {} {}\n", i + 1, j + 1, format_g17(v)));
            }
        }
    }
    write_atomic(path, out.as_bytes())
}

fn parse_count(token: &str, line: usize, what: &str) -> Result<usize> {
    token
        .parse::<usize>()
        .map_err(|_| Error::parse(line, format!("invalid {what}: {token:?}")))
}

pub fn read_matrix(path: &Path) -> Result<Matrix> {
    let text = fs::read_to_string(path)?;
    parse_matrix(&text)
}

pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty file".to_string()))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 3 {
        return Err(Error::parse(1, "header must be \"rows cols nnz\""));
    }
    let rows = parse_count(tokens[0], 1, "row count")?;
    let cols = parse_count(tokens[1], 1, "column count")?;
    let count = parse_count(tokens[2], 1, "nnz count")?;
    if rows == 0 || cols == 0 {
        return Err(Error::parse(1, "dimensions must be positive"));
    }
    if rows > crate::matrix::SIZE_CEILING || cols > crate::matrix::SIZE_CEILING {
        return Err(Error::parse(1, "dimensions exceed the size ceiling"));
    }

    let mut entries = vec![0.0; rows * cols];
    let mut seen: HashSet<(usize, usize)> = HashSet::with_capacity(count);
    let mut parsed = 0usize;
    for (idx, line) in lines {
        let lineno = idx + 1;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 3 {
            return Err(Error::parse(
                lineno,
                format!("expected \"i j value\", got {line:?}"),
            ));
        }
        let i = parse_count(tokens[0], lineno, "row index")?;
        let j = parse_count(tokens[1], lineno, "column index")?;
        if i < 1 || i > rows || j < 1 || j > cols {
            return Err(Error::parse(
                lineno,
                format!("index ({i},{j}) out of range for {rows}x{cols}"),
            ));
        }
        let value: f64 = tokens[2]
            .parse()
            .map_err(|_| Error::parse(lineno, format!("invalid value: {:?}", tokens[2])))?;
        if !value.is_finite() {
            return Err(Error::parse(lineno, "value must be finite"));
        }
        if !seen.insert((i, j)) {
            return Err(Error::parse(lineno, format!("duplicate entry ({i},{j})")));
        }
        entries[(i - 1) * cols + (j - 1)] = value;
        parsed += 1;
    }
    if parsed != count {
        return Err(Error::parse(
            parsed + 1,
            format!("header declares {count} entries, file has {parsed}"),
        ));
    }
    Matrix::new(rows, cols, entries)
}

/// Reads a whitespace-separated vector file (any layout of tokens).
pub fn read_vector(path: &Path) -> Result<Vector> {
    let text = fs::read_to_string(path)?;
    let mut entries = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        for token in line.split_whitespace() {
            let value: f64 = token
                .parse()
                .map_err(|_| Error::parse(idx + 1, format!("invalid value: {token:?}")))?;
            if !value.is_finite() {
                return Err(Error::parse(idx + 1, "value must be finite"));
            }
            entries.push(value);
        }
    }
    Vector::new(entries)
}

/// Writes a vector one entry per line, 17 significant digits.
pub fn write_vector(path: &Path, x: &Vector) -> Result<()> {
    let mut out = String::new();
    for &v in x.entries() {
        out.push_str(&format_g17(v));
        out.push('\n');
    }
    write_atomic(path, out.as_bytes())
}
