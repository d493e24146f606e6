//! Dense matrices, vectors, index sets, and the structured builders used by
//! the hard-instance constructions (Hadamard, Kronecker, block-diagonal,
//! all-ones, identity, single-entry) plus head/tail selection.

use crate::error::{Error, Result};

/// Per-dimension ceiling on matrix sizes. Keeps everything at desk scale.
pub const SIZE_CEILING: usize = 1 << 16;

/// Largest Hadamard order exponent supported by [`hadamard`].
pub const HADAMARD_MAX_K: u32 = 16;

/// Dense real matrix in row-major order. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid("matrix dimensions must be positive"));
        }
        if rows > SIZE_CEILING || cols > SIZE_CEILING {
            return Err(Error::SizeLimit(format!(
                "{rows}x{cols} exceeds the {SIZE_CEILING} per-dimension ceiling"
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                expected: format!("{} entries", rows * cols),
                got: format!("{}", entries.len()),
            });
        }
        if entries.iter().any(|e| !e.is_finite()) {
            return Err(Error::invalid("matrix entries must be finite"));
        }
        Ok(Matrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Matrix::new(rows, cols, vec![0.0; rows * cols])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, value: f64) {
        debug_assert!(i < self.rows && j < self.cols);
        self.entries[i * self.cols + j] = value;
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = vec![0.0; self.entries.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[j * self.rows + i] = self.entries[i * self.cols + j];
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            entries: out,
        }
    }

    fn check_same_shape(&self, other: &Matrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch {
                expected: format!("{}x{}", self.rows, self.cols),
                got: format!("{}x{}", other.rows, other.cols),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Matrix::new(self.rows, self.cols, entries)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Matrix::new(self.rows, self.cols, entries)
    }

    pub fn scale(&self, factor: f64) -> Matrix {
        assert!(factor.is_finite(), "scale factor must be finite");
        let entries = self.entries.iter().map(|a| a * factor).collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                expected: format!("inner dimension {}", self.cols),
                got: format!("{}", other.rows),
            });
        }
        let mut out = vec![0.0; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entries[i * self.cols + k];
                if a == 0.0 {
                    continue;
                }
                let row = &other.entries[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Matrix::new(self.rows, other.cols, out)
    }

    /// Submatrix made of the given rows, all columns.
    pub fn select_rows(&self, rows: &IndexSet) -> Result<Matrix> {
        rows.check_bound(self.rows)?;
        let mut entries = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows.as_slice() {
            entries.extend_from_slice(&self.entries[i * self.cols..(i + 1) * self.cols]);
        }
        Matrix::new(rows.len(), self.cols, entries)
    }

    /// Submatrix made of the given columns, all rows.
    pub fn select_cols(&self, cols: &IndexSet) -> Result<Matrix> {
        cols.check_bound(self.cols)?;
        let mut entries = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            for &j in cols.as_slice() {
                entries.push(self.entries[i * self.cols + j]);
            }
        }
        Matrix::new(self.rows, cols.len(), entries)
    }

    /// Principal submatrix on the given index set (square matrices).
    pub fn principal_submatrix(&self, indices: &IndexSet) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::invalid(
                "principal submatrix requires a square matrix",
            ));
        }
        indices.check_bound(self.rows)?;
        let mut entries = Vec::with_capacity(indices.len() * indices.len());
        for &i in indices.as_slice() {
            for &j in indices.as_slice() {
                entries.push(self.entries[i * self.cols + j]);
            }
        }
        Matrix::new(indices.len(), indices.len(), entries)
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.entries.iter().map(|e| e * e).sum()
    }
}

/// Dense real vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    entries: Vec<f64>,
}

impl Vector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("vector dimension must be positive"));
        }
        if entries.iter().any(|e| !e.is_finite()) {
            return Err(Error::invalid("vector entries must be finite"));
        }
        Ok(Vector { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize) -> f64 {
        self.entries[i]
    }

    pub fn nnz(&self) -> usize {
        self.entries.iter().filter(|e| **e != 0.0).count()
    }
}

/// Sorted set of distinct indices into rows or columns.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexSet {
    indices: Vec<usize>,
}

impl IndexSet {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("indices must be strictly increasing"));
        }
        Ok(IndexSet { indices })
    }

    pub fn contiguous(range: std::ops::Range<usize>) -> Self {
        IndexSet {
            indices: range.collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.indices
    }

    pub fn check_bound(&self, bound: usize) -> Result<()> {
        match self.indices.last() {
            Some(&last) if last >= bound => Err(Error::invalid(format!(
                "index {last} out of bounds for dimension {bound}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn is_disjoint(&self, other: &IndexSet) -> bool {
        // Both sorted; merge scan.
        let (mut i, mut j) = (0, 0);
        while i < self.indices.len() && j < other.indices.len() {
            match self.indices[i].cmp(&other.indices[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }
}

/// Sylvester Hadamard matrix of order 2^k, entries exactly +1/-1.
pub fn hadamard(k: u32) -> Result<Matrix> {
    if k > HADAMARD_MAX_K {
        return Err(Error::SizeLimit(format!(
            "hadamard order 2^{k} exceeds the 2^{HADAMARD_MAX_K} ceiling"
        )));
    }
    let n = 1usize << k;
    let mut entries = vec![0.0; n * n];
    entries[0] = 1.0;
    // Doubling: H_{2m} = [[H_m, H_m], [H_m, -H_m]].
    let mut m = 1;
    while m < n {
        for i in 0..m {
            for j in 0..m {
                let v = entries[i * n + j];
                entries[i * n + (j + m)] = v;
                entries[(i + m) * n + j] = v;
                entries[(i + m) * n + (j + m)] = -v;
            }
        }
        m *= 2;
    }
    Matrix::new(n, n, entries)
}

/// Kronecker product: block (i,j) of the result equals a(i,j) * b.
pub fn kronecker(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    let rows = a.rows().saturating_mul(b.rows());
    let cols = a.cols().saturating_mul(b.cols());
    if rows > SIZE_CEILING || cols > SIZE_CEILING {
        return Err(Error::SizeLimit(format!(
            "kronecker result {rows}x{cols} exceeds the {SIZE_CEILING} per-dimension ceiling"
        )));
    }
    let mut out = vec![0.0; rows * cols];
    for ia in 0..a.rows() {
        for ja in 0..a.cols() {
            let v = a.get(ia, ja);
            if v == 0.0 {
                continue;
            }
            for ib in 0..b.rows() {
                for jb in 0..b.cols() {
                    out[(ia * b.rows() + ib) * cols + (ja * b.cols() + jb)] = v * b.get(ib, jb);
                }
            }
        }
    }
    Matrix::new(rows, cols, out)
}

/// Block-diagonal matrix with the given blocks in order; off-block entries
/// are exactly zero.
pub fn block_diagonal(blocks: &[Matrix]) -> Matrix {
    assert!(
        !blocks.is_empty(),
        "block_diagonal requires at least one block"
    );
    let rows: usize = blocks.iter().map(Matrix::rows).sum();
    let cols: usize = blocks.iter().map(Matrix::cols).sum();
    assert!(
        rows <= SIZE_CEILING && cols <= SIZE_CEILING,
        "block_diagonal result exceeds the per-dimension ceiling"
    );
    let mut out = Matrix {
        rows,
        cols,
        entries: vec![0.0; rows * cols],
    };
    let (mut r0, mut c0) = (0, 0);
    for block in blocks {
        for i in 0..block.rows() {
            for j in 0..block.cols() {
                out.set(r0 + i, c0 + j, block.get(i, j));
            }
        }
        r0 += block.rows();
        c0 += block.cols();
    }
    out
}

pub fn all_ones(n: usize) -> Matrix {
    assert!((1..=SIZE_CEILING).contains(&n));
    Matrix {
        rows: n,
        cols: n,
        entries: vec![1.0; n * n],
    }
}

pub fn identity(n: usize) -> Matrix {
    assert!((1..=SIZE_CEILING).contains(&n));
    let mut m = Matrix {
        rows: n,
        cols: n,
        entries: vec![0.0; n * n],
    };
    for i in 0..n {
        m.set(i, i, 1.0);
    }
    m
}

/// Matrix with a single non-zero entry of value 1 at position (1,1)
/// (0-based: (0,0)).
pub fn single_entry(n: usize) -> Matrix {
    assert!((1..=SIZE_CEILING).contains(&n));
    let mut m = Matrix {
        rows: n,
        cols: n,
        entries: vec![0.0; n * n],
    };
    m.set(0, 0, 1.0);
    m
}

/// Indices of the c largest-magnitude entries, ties broken by lower index.
fn top_magnitude_indices(x: &Vector, c: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..x.dim()).collect();
    idx.sort_by(|&i, &j| {
        x.get(j)
            .abs()
            .partial_cmp(&x.get(i).abs())
            .expect("entries are finite")
            .then(i.cmp(&j))
    });
    idx.truncate(c);
    idx
}

/// Keeps the c largest-magnitude entries in place, zeros the rest.
pub fn head(x: &Vector, c: usize) -> Result<Vector> {
    if c > x.dim() {
        return Err(Error::invalid(format!(
            "head count {c} out of range for dimension {}",
            x.dim()
        )));
    }
    let mut out = vec![0.0; x.dim()];
    for i in top_magnitude_indices(x, c) {
        out[i] = x.get(i);
    }
    Vector::new(out)
}

/// Complement of [`head`]: tail(x, c) = x - head(x, c), with disjoint support.
pub fn tail(x: &Vector, c: usize) -> Result<Vector> {
    if c > x.dim() {
        return Err(Error::invalid(format!(
            "tail count {c} out of range for dimension {}",
            x.dim()
        )));
    }
    let mut out = x.entries().to_vec();
    for i in top_magnitude_indices(x, c) {
        out[i] = 0.0;
    }
    Vector::new(out)
}

/// Number of entries with |value| > 0, exactly (builders produce exact zeros).
pub fn nnz(a: &Matrix) -> usize {
    a.entries().iter().filter(|e| **e != 0.0).count()
}
