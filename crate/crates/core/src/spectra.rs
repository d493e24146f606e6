//! Singular values and Schatten/ℓp norm evaluation.
//!
//! The dense solver is a one-sided Jacobi orthogonalization (cyclic sweeps
//! over column pairs). It is simple and delivers high relative accuracy on
//! the small dense sizes used here. A two-sided Jacobi eigensolver for
//! symmetric matrices backs the spectral-approximation generator.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Matrix, Vector};

/// Convergence threshold: a column pair counts as orthogonal when the dot
/// product is at most this factor times the product of the column norms.
pub const SVD_PAIR_TOL: f64 = 1e-13;

/// Cyclic sweep limit for both Jacobi solvers.
pub const SVD_MAX_SWEEPS: usize = 60;

/// Largest dimension accepted by the dense solver.
pub const SVD_MAX_DIM: usize = 2048;

/// Default relative tolerance for the numerical rank cutoff.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

/// Largest finite Schatten exponent; sigma^p overflows beyond this and the
/// result is within 1 ulp of the spectral norm anyway.
pub const MAX_FINITE_EXPONENT: f64 = 512.0;

/// Schatten exponent: rank (0), finite p in (0, 512], or the spectral norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchattenExponent {
    Zero,
    Finite(f64),
    Inf,
}

impl SchattenExponent {
    pub fn finite(p: f64) -> Result<Self> {
        if !p.is_finite() || p <= 0.0 {
            return Err(Error::invalid(format!(
                "finite Schatten exponent must be a positive real, got {p}"
            )));
        }
        if p > MAX_FINITE_EXPONENT {
            return Err(Error::invalid(format!(
                "finite Schatten exponent {p} exceeds {MAX_FINITE_EXPONENT}; use \"inf\""
            )));
        }
        Ok(SchattenExponent::Finite(p))
    }

    /// Parses "0" (rank), "inf" (spectral), or a positive real.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "0" {
            return Ok(SchattenExponent::Zero);
        }
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(SchattenExponent::Inf);
        }
        let p: f64 = t
            .parse()
            .map_err(|_| Error::invalid(format!("cannot parse Schatten exponent: {s:?}")))?;
        if p == 0.0 {
            return Ok(SchattenExponent::Zero);
        }
        SchattenExponent::finite(p)
    }

    /// 1/p, with 1/inf = 0. Not defined for the rank tag.
    pub fn inv(self) -> f64 {
        match self {
            SchattenExponent::Zero => panic!("1/p undefined for the Schatten-0 tag"),
            SchattenExponent::Finite(p) => 1.0 / p,
            SchattenExponent::Inf => 0.0,
        }
    }

    /// Value used for ordering comparisons: 0, p, or +inf.
    pub fn order(self) -> f64 {
        match self {
            SchattenExponent::Zero => 0.0,
            SchattenExponent::Finite(p) => p,
            SchattenExponent::Inf => f64::INFINITY,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, SchattenExponent::Finite(_))
    }
}

impl std::fmt::Display for SchattenExponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SchattenExponent::Zero => write!(f, "0"),
            SchattenExponent::Finite(p) => write!(f, "{p}"),
            SchattenExponent::Inf => write!(f, "inf"),
        }
    }
}

impl Serialize for SchattenExponent {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SchattenExponent {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        SchattenExponent::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Descending singular values of a matrix, with the source dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
    rows: usize,
    cols: usize,
}

impl Spectrum {
    pub(crate) fn new(mut values: Vec<f64>, rows: usize, cols: usize) -> Self {
        debug_assert_eq!(values.len(), rows.min(cols));
        values.sort_by(|a, b| b.partial_cmp(a).expect("singular values are finite"));
        Spectrum { values, rows, cols }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
}

/// Thin singular value decomposition, a ~ u * diag(sigma) * v^T.
pub struct Svd {
    pub u: Matrix,
    pub spectrum: Spectrum,
    pub v: Matrix,
}

struct JacobiOutcome {
    // Column-major working matrix, m x n with m >= n, prescaled by 1/scale.
    w: Vec<f64>,
    m: usize,
    n: usize,
    // Prescaling factor: singular values are scale * column norms.
    scale: f64,
    // Column-major accumulated right-rotation matrix, n x n.
    v: Option<Vec<f64>>,
}

impl JacobiOutcome {
    fn column_norm(&self, j: usize) -> f64 {
        let col = &self.w[j * self.m..(j + 1) * self.m];
        self.scale * col.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// One-sided Jacobi on the columns of a (transposed first if rows < cols).
fn jacobi_one_sided(a: &Matrix, want_v: bool) -> Result<(JacobiOutcome, bool)> {
    if a.rows().max(a.cols()) > SVD_MAX_DIM {
        return Err(Error::SizeLimit(format!(
            "dense SVD supports dimensions up to {SVD_MAX_DIM}, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let transposed = a.rows() < a.cols();
    let (m, n) = if transposed {
        (a.cols(), a.rows())
    } else {
        (a.rows(), a.cols())
    };

    // Prescale by the largest magnitude so Gram entries neither overflow
    // nor underflow at working scale.
    let max_abs = a.entries().iter().fold(0.0f64, |acc, e| acc.max(e.abs()));
    let scale = if max_abs > 0.0 { max_abs } else { 1.0 };

    // Column-major: column j occupies w[j*m .. (j+1)*m].
    let mut w = vec![0.0; m * n];
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let (r, c) = if transposed { (j, i) } else { (i, j) };
            w[c * m + r] = a.get(i, j) / scale;
        }
    }
    let mut v = want_v.then(|| {
        let mut id = vec![0.0; n * n];
        for j in 0..n {
            id[j * n + j] = 1.0;
        }
        id
    });

    let mut residual = 0.0f64;
    for _sweep in 0..SVD_MAX_SWEEPS {
        let mut rotated = false;
        residual = 0.0;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let (mut app, mut aqq, mut apq) = (0.0, 0.0, 0.0);
                {
                    let (left, right) = w.split_at(q * m);
                    let cp = &left[p * m..p * m + m];
                    let cq = &right[..m];
                    for (x, y) in cp.iter().zip(cq) {
                        app += x * x;
                        aqq += y * y;
                        apq += x * y;
                    }
                }
                // Split square roots keep the bound meaningful for columns
                // whose squared norms would underflow when multiplied.
                let norms = app.sqrt() * aqq.sqrt();
                if app == 0.0 || aqq == 0.0 || apq.abs() <= SVD_PAIR_TOL * norms {
                    continue;
                }
                residual = residual.max(if norms > 0.0 { apq.abs() / norms } else { 0.0 });
                rotated = true;
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau.abs() > 1e150 {
                    // Asymptotic branch avoids overflow in tau^2.
                    0.5 / tau
                } else {
                    tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;

                let (left, right) = w.split_at_mut(q * m);
                let cp = &mut left[p * m..p * m + m];
                let cq = &mut right[..m];
                for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
                    let (xp, xq) = (*x, *y);
                    *x = c * xp - s * xq;
                    *y = s * xp + c * xq;
                }
                if let Some(v) = v.as_mut() {
                    let (left, right) = v.split_at_mut(q * n);
                    let vp = &mut left[p * n..p * n + n];
                    let vq = &mut right[..n];
                    for (x, y) in vp.iter_mut().zip(vq.iter_mut()) {
                        let (xp, xq) = (*x, *y);
                        *x = c * xp - s * xq;
                        *y = s * xp + c * xq;
                    }
                }
            }
        }
        if !rotated {
            return Ok((JacobiOutcome { w, m, n, scale, v }, transposed));
        }
    }
    Err(Error::NoConvergence {
        sweeps: SVD_MAX_SWEEPS,
        residual,
    })
}

/// Singular values of a, descending.
pub fn singular_values(a: &Matrix) -> Result<Spectrum> {
    let (out, _) = jacobi_one_sided(a, false)?;
    let values: Vec<f64> = (0..out.n).map(|j| out.column_norm(j)).collect();
    Ok(Spectrum::new(values, a.rows(), a.cols()))
}

/// Thin SVD with singular vectors.
pub fn svd(a: &Matrix) -> Result<Svd> {
    let (out, transposed) = jacobi_one_sided(a, true)?;
    let (m, n) = (out.m, out.n);
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n).map(|j| out.column_norm(j)).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap().then(i.cmp(&j)));

    let values: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    // Left vectors: normalized working columns (zero columns stay zero).
    let mut u_entries = vec![0.0; m * n];
    for (dst, &src) in order.iter().enumerate() {
        let norm = norms[src] / out.scale;
        if norm > 0.0 {
            for i in 0..m {
                u_entries[i * n + dst] = out.w[src * m + i] / norm;
            }
        }
    }
    let u = Matrix::new(m, n, u_entries)?;
    let vmat = out.v.expect("requested vectors");
    let mut v_entries = vec![0.0; n * n];
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            v_entries[i * n + dst] = vmat[src * n + i];
        }
    }
    let v = Matrix::new(n, n, v_entries)?;

    let spectrum = Spectrum {
        values,
        rows: a.rows(),
        cols: a.cols(),
    };
    if transposed {
        // a^T = u sigma v^T, so a = v sigma u^T.
        Ok(Svd {
            u: v,
            spectrum,
            v: u,
        })
    } else {
        Ok(Svd { u, spectrum, v })
    }
}

/// Eigendecomposition of a symmetric matrix via two-sided Jacobi.
/// Returns eigenvalues (descending) and the orthogonal matrix of
/// eigenvectors as columns.
pub fn symmetric_eigen(a: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    if a.rows() != a.cols() {
        return Err(Error::invalid(
            "symmetric eigendecomposition requires a square matrix",
        ));
    }
    if a.rows() > SVD_MAX_DIM {
        return Err(Error::SizeLimit(format!(
            "dense eigensolver supports dimensions up to {SVD_MAX_DIM}"
        )));
    }
    let n = a.rows();
    let max_abs = a.entries().iter().fold(0.0f64, |acc, e| acc.max(e.abs()));
    let sym_tol = 1e-10 * max_abs.max(f64::MIN_POSITIVE);
    for i in 0..n {
        for j in (i + 1)..n {
            if (a.get(i, j) - a.get(j, i)).abs() > sym_tol {
                return Err(Error::invalid(format!(
                    "matrix is not symmetric at ({i},{j})"
                )));
            }
        }
    }

    let scale = if max_abs > 0.0 { max_abs } else { 1.0 };
    let mut w: Vec<f64> = a.entries().iter().map(|e| e / scale).collect();
    let mut q = vec![0.0; n * n];
    for i in 0..n {
        q[i * n + i] = 1.0;
    }

    let mut residual = 0.0f64;
    for _sweep in 0..SVD_MAX_SWEEPS {
        let mut rotated = false;
        residual = 0.0;
        for p in 0..n.saturating_sub(1) {
            for r in (p + 1)..n {
                let apq = w[p * n + r];
                let app = w[p * n + p];
                let aqq = w[r * n + r];
                let local = app.abs().sqrt() * aqq.abs().sqrt();
                // Entries at most 1 after prescaling, so the absolute bound
                // stops churn on roundoff-level off-diagonals.
                if apq == 0.0 || (apq.abs() <= SVD_PAIR_TOL * local && apq.abs() <= SVD_PAIR_TOL) {
                    continue;
                }
                residual = residual.max(apq.abs());
                rotated = true;
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                // Apply J^T W J on rows/columns p and r.
                for k in 0..n {
                    let wkp = w[k * n + p];
                    let wkq = w[k * n + r];
                    w[k * n + p] = c * wkp - s * wkq;
                    w[k * n + r] = s * wkp + c * wkq;
                }
                for k in 0..n {
                    let wpk = w[p * n + k];
                    let wqk = w[r * n + k];
                    w[p * n + k] = c * wpk - s * wqk;
                    w[r * n + k] = s * wpk + c * wqk;
                }
                for k in 0..n {
                    let qkp = q[k * n + p];
                    let qkq = q[k * n + r];
                    q[k * n + p] = c * qkp - s * qkq;
                    q[k * n + r] = s * qkp + c * qkq;
                }
            }
        }
        if !rotated {
            let mut order: Vec<usize> = (0..n).collect();
            let diag: Vec<f64> = (0..n).map(|i| scale * w[i * n + i]).collect();
            order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap().then(i.cmp(&j)));
            let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
            let mut q_entries = vec![0.0; n * n];
            for (dst, &src) in order.iter().enumerate() {
                for i in 0..n {
                    q_entries[i * n + dst] = q[i * n + src];
                }
            }
            return Ok((values, Matrix::new(n, n, q_entries)?));
        }
    }
    Err(Error::NoConvergence {
        sweeps: SVD_MAX_SWEEPS,
        residual,
    })
}

/// Schatten norm of a spectrum; returns 0 for the zero matrix under all tags.
pub fn schatten_norm(s: &Spectrum, p: SchattenExponent) -> f64 {
    match p {
        SchattenExponent::Zero => numerical_rank(s, DEFAULT_RANK_TOL) as f64,
        SchattenExponent::Inf => s.max(),
        SchattenExponent::Finite(p) => {
            let max = s.max();
            if max == 0.0 {
                return 0.0;
            }
            let sum: f64 = s.values().iter().map(|v| (v / max).powf(p)).sum();
            max * sum.powf(1.0 / p)
        }
    }
}

/// Count of singular values above rel_tol * sigma_1. Rank of the zero matrix is 0.
pub fn numerical_rank(s: &Spectrum, rel_tol: f64) -> usize {
    assert!(
        rel_tol > 0.0 && rel_tol < 1.0,
        "rank tolerance must lie in (0, 1)"
    );
    let max = s.max();
    if max == 0.0 {
        return 0;
    }
    s.values().iter().filter(|&&v| v > rel_tol * max).count()
}

/// ℓp norm of a vector; INF is the max magnitude, ZERO counts the support.
pub fn lp_norm(x: &Vector, p: SchattenExponent) -> f64 {
    match p {
        SchattenExponent::Zero => x.nnz() as f64,
        SchattenExponent::Inf => x.entries().iter().fold(0.0, |acc, e| acc.max(e.abs())),
        SchattenExponent::Finite(p) => {
            let max = x.entries().iter().fold(0.0f64, |acc, e| acc.max(e.abs()));
            if max == 0.0 {
                return 0.0;
            }
            let sum: f64 = x.entries().iter().map(|e| (e.abs() / max).powf(p)).sum();
            max * sum.powf(1.0 / p)
        }
    }
}

/// Convenience: Schatten norm straight from a matrix.
pub fn schatten_norm_of(a: &Matrix, p: SchattenExponent) -> Result<f64> {
    Ok(schatten_norm(&singular_values(a)?, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{all_ones, hadamard, identity, Matrix, Vector};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rel_err(got: f64, want: f64) -> f64 {
        (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
    }

    fn random_matrix(rows: usize, cols: usize, seed: u64) -> Matrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let entries = (0..rows * cols)
            .map(|_| rng.random_range(-1.0..1.0))
            .collect();
        Matrix::new(rows, cols, entries).unwrap()
    }

    #[test]
    fn diagonal_spectrum() {
        let d = Matrix::new(2, 2, vec![3.0, 0.0, 0.0, 4.0]).unwrap();
        let s = singular_values(&d).unwrap();
        assert_eq!(s.values(), &[4.0, 3.0]);
    }

    #[test]
    fn hadamard_spectrum_is_flat() {
        let h = hadamard(3).unwrap();
        let s = singular_values(&h).unwrap();
        let want = 8f64.sqrt();
        assert_eq!(s.values().len(), 8);
        for &v in s.values() {
            assert!(rel_err(v, want) <= 1e-12);
        }
        assert!(
            rel_err(
                schatten_norm(
                    &singular_values(&hadamard(4).unwrap()).unwrap(),
                    SchattenExponent::Inf
                ),
                4.0
            ) <= 1e-12
        );
    }

    #[test]
    fn all_ones_is_rank_one() {
        let s = singular_values(&all_ones(4)).unwrap();
        assert!(rel_err(s.values()[0], 4.0) <= 1e-12);
        for &v in &s.values()[1..] {
            assert!(v.abs() <= 1e-12);
        }
        assert_eq!(numerical_rank(&s, DEFAULT_RANK_TOL), 1);
        assert!(rel_err(schatten_norm(&s, SchattenExponent::Finite(1.0)), 4.0) <= 1e-12);
        assert!(rel_err(schatten_norm(&s, SchattenExponent::Finite(2.0)), 4.0) <= 1e-12);
    }

    #[test]
    fn identity_norms() {
        let s = singular_values(&identity(16)).unwrap();
        assert_eq!(schatten_norm(&s, SchattenExponent::Finite(2.0)), 4.0);
        assert_eq!(
            numerical_rank(&singular_values(&identity(7)).unwrap(), DEFAULT_RANK_TOL),
            7
        );
    }

    #[test]
    fn zero_matrix_conventions() {
        let s = singular_values(&Matrix::zeros(3, 5).unwrap()).unwrap();
        assert_eq!(s.values(), &[0.0, 0.0, 0.0]);
        assert_eq!(schatten_norm(&s, SchattenExponent::Finite(2.0)), 0.0);
        assert_eq!(schatten_norm(&s, SchattenExponent::Inf), 0.0);
        assert_eq!(schatten_norm(&s, SchattenExponent::Zero), 0.0);
    }

    #[test]
    fn frobenius_identity_on_random_matrices() {
        for seed in 0..20 {
            let a = random_matrix(24, 17, seed);
            let s = singular_values(&a).unwrap();
            let fro2 = schatten_norm(&s, SchattenExponent::Finite(2.0)).powi(2);
            assert!(rel_err(fro2, a.sum_of_squares()) <= 1e-9);
        }
    }

    #[test]
    fn transpose_invariance() {
        for seed in 0..10 {
            let a = random_matrix(13, 29, seed);
            let s1 = singular_values(&a).unwrap();
            let s2 = singular_values(&a.transpose()).unwrap();
            for (x, y) in s1.values().iter().zip(s2.values()) {
                assert!((x - y).abs() <= 1e-10 * s1.max());
            }
        }
    }

    #[test]
    fn orthogonal_invariance_under_scaled_hadamard() {
        let k = 6u32;
        let n = 1usize << k;
        let h = hadamard(k).unwrap().scale(1.0 / (n as f64).sqrt());
        let a = random_matrix(n, n, 11);
        let s0 = singular_values(&a).unwrap();
        let left = singular_values(&h.matmul(&a).unwrap()).unwrap();
        let right = singular_values(&a.matmul(&h.transpose()).unwrap()).unwrap();
        for (x, y) in s0.values().iter().zip(left.values()) {
            assert!((x - y).abs() <= 1e-9 * s0.max());
        }
        for (x, y) in s0.values().iter().zip(right.values()) {
            assert!((x - y).abs() <= 1e-9 * s0.max());
        }
    }

    #[test]
    fn svd_residual_on_random_matrices() {
        for seed in 0..5 {
            let a = random_matrix(64, 64, 100 + seed);
            let dec = svd(&a).unwrap();
            let sigma1 = dec.spectrum.max();
            let ata = a.transpose().matmul(&a).unwrap();
            for j in 0..8 {
                let sigma = dec.spectrum.values()[j];
                let vj: Vec<f64> = (0..64).map(|i| dec.v.get(i, j)).collect();
                let mut resid: f64 = 0.0;
                for i in 0..64 {
                    let mut acc = 0.0;
                    for l in 0..64 {
                        acc += ata.get(i, l) * vj[l];
                    }
                    resid = resid.max((acc - sigma * sigma * vj[i]).abs());
                }
                assert!(resid <= 1e-8 * sigma1 * sigma1, "residual {resid:.3e}");
            }
        }
    }

    #[test]
    fn svd_reconstructs_rectangular_inputs() {
        for (rows, cols) in [(10, 6), (6, 10)] {
            let a = random_matrix(rows, cols, 77);
            let dec = svd(&a).unwrap();
            let r = rows.min(cols);
            assert_eq!(dec.u.rows(), rows);
            assert_eq!(dec.u.cols(), r);
            assert_eq!(dec.v.rows(), cols);
            let mut max_dev: f64 = 0.0;
            for i in 0..rows {
                for j in 0..cols {
                    let mut acc = 0.0;
                    for l in 0..r {
                        acc += dec.u.get(i, l) * dec.spectrum.values()[l] * dec.v.get(j, l);
                    }
                    max_dev = max_dev.max((acc - a.get(i, j)).abs());
                }
            }
            assert!(
                max_dev <= 1e-12 * dec.spectrum.max(),
                "deviation {max_dev:.3e}"
            );
        }
    }

    #[test]
    fn holder_relation_on_spectra() {
        for seed in 0..20 {
            let a = random_matrix(12, 12, 200 + seed);
            let s = singular_values(&a).unwrap();
            for (p, q) in [(1.0, 2.0), (1.0, 4.0), (2.0, 3.0)] {
                let np = schatten_norm(&s, SchattenExponent::Finite(p));
                let nq = schatten_norm(&s, SchattenExponent::Finite(q));
                let r = 12f64;
                assert!(nq <= np * (1.0 + 1e-12));
                assert!(np <= r.powf(1.0 / p - 1.0 / q) * nq * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn symmetric_eigen_recovers_diagonal() {
        let a = Matrix::new(3, 3, vec![2.0, 1.0, 0.0, 1.0, 2.0, 0.0, 0.0, 0.0, -1.0]).unwrap();
        let (vals, q) = symmetric_eigen(&a).unwrap();
        assert!(rel_err(vals[0], 3.0) <= 1e-12);
        assert!(rel_err(vals[1], 1.0) <= 1e-12);
        assert!(rel_err(vals[2], -1.0) <= 1e-12);
        // Q diag(vals) Q^T reconstructs a.
        let mut reconst = Matrix::zeros(3, 3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = 0.0;
                for l in 0..3 {
                    acc += q.get(i, l) * vals[l] * q.get(j, l);
                }
                reconst.set(i, j, acc);
            }
        }
        assert!(a.max_abs_diff(&reconst).unwrap() <= 1e-12);
    }

    #[test]
    fn symmetric_eigen_rejects_asymmetric() {
        let a = Matrix::new(2, 2, vec![1.0, 2.0, 3.0, 1.0]).unwrap();
        assert!(symmetric_eigen(&a).is_err());
    }

    #[test]
    fn lp_norm_basics() {
        let x = Vector::new(vec![3.0, 4.0]).unwrap();
        assert_eq!(lp_norm(&x, SchattenExponent::Finite(2.0)), 5.0);
        let ones = Vector::new(vec![1.0; 4]).unwrap();
        assert_eq!(lp_norm(&ones, SchattenExponent::Finite(1.0)), 4.0);
        let y = Vector::new(vec![1.0, -2.0]).unwrap();
        assert_eq!(lp_norm(&y, SchattenExponent::Inf), 2.0);
        assert_eq!(lp_norm(&y, SchattenExponent::Zero), 2.0);
    }

    #[test]
    fn exponent_parsing_and_guards() {
        assert_eq!(
            SchattenExponent::parse("0").unwrap(),
            SchattenExponent::Zero
        );
        assert_eq!(
            SchattenExponent::parse("inf").unwrap(),
            SchattenExponent::Inf
        );
        assert_eq!(
            SchattenExponent::parse("2.5").unwrap(),
            SchattenExponent::Finite(2.5)
        );
        assert!(SchattenExponent::parse("-1").is_err());
        assert!(SchattenExponent::finite(513.0).is_err());
        assert!(SchattenExponent::finite(f64::NAN).is_err());
    }

    #[test]
    fn large_exponent_stays_in_log_space() {
        let d = Matrix::new(2, 2, vec![1e200, 0.0, 0.0, 1e190]).unwrap();
        let s = singular_values(&d).unwrap();
        let n = schatten_norm(&s, SchattenExponent::Finite(512.0));
        assert!(n.is_finite());
        assert!(rel_err(n, 1e200) <= 1e-12);
    }

    #[test]
    fn svd_rejects_oversize() {
        // Construction is allowed up to the matrix ceiling, but the dense
        // solver refuses beyond SVD_MAX_DIM.
        let wide = Matrix::zeros(1, SVD_MAX_DIM + 1).unwrap();
        assert!(matches!(singular_values(&wide), Err(Error::SizeLimit(_))));
    }
}
