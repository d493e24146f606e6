//! The four explicit hard-instance families separating Schatten p-norm
//! sparsification from Schatten q-norm sparsification.
//!
//! Each instance is a triple A = A' + B where A' is sparse (nnz 1 or n),
//! ||B||_{S_p} / ||A'||_{S_p} is a small explicit ratio (P2), and
//! ||A'||_{S_q} = ||B||_{S_q} (P3), so that any good S_q approximation of A
//! must approximate the dense, flat-spectrum B.
//!
//! Logarithms are base 2 throughout: with n = 2^k every divisor the
//! constructions need (m = n/k^2 or n/k, replication counts) is an exact
//! integer, and the epsilon thresholds are computed in the same base.
//!
//! Case overview (log n = k):
//!   1: q >= 2,  1 <= p < q     A' = sqrt(n) k^(1-2/q) I,  B = first-m-rows(H) (x) 1,  m = n/k^2
//!   2: p > q >= 2              A' = J^1,  B = n^(-1/q-1/2) H
//!   3: 1 <= p < q <= 2         A' = I,    B = n^(1/q-1) J_n
//!   4: 1 <= q < min(p, 2)      A' = J^1,  B = k^(-1/q) C,  C = blockdiag of k copies of (1/m) J_m, m = n/k

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{self, format_g17};
use crate::matrix::{
    all_ones, block_diagonal, hadamard, identity, kronecker, single_entry, IndexSet, Matrix, Vector,
};
use crate::spectra::SchattenExponent;

/// The fixed hardness constant from the lower-bound statements.
pub const EPS0: f64 = 0.1;

/// Which of the four (p, q) regimes an instance belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseId {
    Case1 = 1,
    Case2 = 2,
    Case3 = 3,
    Case4 = 4,
}

impl CaseId {
    pub fn from_number(n: u8) -> Result<Self> {
        match n {
            1 => Ok(CaseId::Case1),
            2 => Ok(CaseId::Case2),
            3 => Ok(CaseId::Case3),
            4 => Ok(CaseId::Case4),
            other => Err(Error::invalid(format!("case must be 1..=4, got {other}"))),
        }
    }

    pub fn number(self) -> u8 {
        self as u8
    }
}

/// A product of base^exponent factors. Expected values are carried in this
/// closed form so acceptance checks compare against a single rounding of
/// the analytic formula instead of compounded arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct PowProduct {
    factors: Vec<(f64, f64)>,
}

impl PowProduct {
    pub fn one() -> Self {
        PowProduct {
            factors: Vec::new(),
        }
    }

    pub fn pow(base: f64, exp: f64) -> Self {
        PowProduct {
            factors: vec![(base, exp)],
        }
    }

    pub fn times(mut self, base: f64, exp: f64) -> Self {
        self.factors.push((base, exp));
        self
    }

    pub fn value(&self) -> f64 {
        self.factors.iter().map(|(b, e)| b.powf(*e)).product()
    }

    fn literal(value: f64) -> Self {
        PowProduct::pow(value, 1.0)
    }
}

/// Closed-form facts about an instance: the spectra of B and A' as
/// (value, multiplicity) runs (zeros implied), the P2 ratio, and the common
/// S_q norm of P3.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticFacts {
    pub b_spectrum: Vec<(PowProduct, usize)>,
    pub ap_spectrum: Vec<(PowProduct, usize)>,
    pub p2_ratio: PowProduct,
    pub q_norm: PowProduct,
}

fn expand_spectrum(runs: &[(PowProduct, usize)], len: usize) -> Vec<f64> {
    let mut values = Vec::with_capacity(len);
    for (value, mult) in runs {
        let v = value.value();
        values.extend(std::iter::repeat_n(v, *mult));
    }
    assert!(values.len() <= len, "spectrum runs exceed min dimension");
    values.resize(len, 0.0);
    values.sort_by(|a, b| b.partial_cmp(a).unwrap());
    values
}

impl AnalyticFacts {
    /// B's singular values, descending, padded with zeros to length `len`.
    pub fn b_spectrum_values(&self, len: usize) -> Vec<f64> {
        expand_spectrum(&self.b_spectrum, len)
    }

    pub fn ap_spectrum_values(&self, len: usize) -> Vec<f64> {
        expand_spectrum(&self.ap_spectrum, len)
    }
}

/// A labeled hard instance: the triple (A', B, A = A' + B), its parameters,
/// and the analytic expected values.
#[derive(Debug, Clone)]
pub struct HardInstance {
    pub case_id: CaseId,
    pub k: u32,
    pub n: usize,
    pub p: SchattenExponent,
    pub q: SchattenExponent,
    pub a_prime: Matrix,
    pub b: Matrix,
    pub a: Matrix,
    /// Lower bound on eps for P2 to hold; equals the analytic P2 ratio.
    pub eps_threshold: f64,
    /// Case 1 with m = 1 collapses B to J_n.
    pub degenerate: bool,
    pub expected: AnalyticFacts,
}

impl HardInstance {
    /// nnz(A') required by P1.
    pub fn expected_nnz_a_prime(&self) -> usize {
        match self.case_id {
            CaseId::Case1 | CaseId::Case3 => self.n,
            CaseId::Case2 | CaseId::Case4 => 1,
        }
    }

    /// Row blocks U_i of B for case 1: m blocks of k^2 replicated rows each.
    pub fn case1_row_blocks(&self) -> Option<Vec<IndexSet>> {
        if self.case_id != CaseId::Case1 {
            return None;
        }
        let height = (self.k * self.k) as usize;
        let m = self.n / height;
        Some(
            (0..m)
                .map(|i| IndexSet::contiguous(i * height..(i + 1) * height))
                .collect(),
        )
    }
}

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::invalid(msg.to_string()))
    }
}

fn power_of_two_k(k: u32) -> Result<()> {
    require(
        matches!(k, 2 | 4 | 8 | 16),
        "k must be a power of 2 in {2, 4, 8, 16} so the block sizes divide exactly",
    )
}

fn plain_k(k: u32) -> Result<()> {
    require((1..=16).contains(&k), "k must lie in 1..=16")
}

/// Case 1 (q >= 2, 1 <= p < q): B replicates the first m = n/k^2 Hadamard
/// rows, giving m flat singular values sqrt(n)*k; A' = sqrt(n) k^(1-2/q) I.
pub fn build_case1(k: u32, p: SchattenExponent, q: SchattenExponent) -> Result<HardInstance> {
    power_of_two_k(k)?;
    require(
        p.is_finite() && p.order() >= 1.0,
        "case 1 requires finite p >= 1",
    )?;
    require(
        q.order() >= 2.0 && p.order() < q.order(),
        "case 1 requires q >= 2 and p < q",
    )?;
    let n = 1usize << k;
    let kf = k as f64;
    let nf = n as f64;
    let height = (k * k) as usize; // n^(2*alpha - 1)
    let m = n / height;

    let h = hadamard(k)?;
    let h_top = h.select_rows(&IndexSet::contiguous(0..m))?;
    let ones_col = Matrix::new(height, 1, vec![1.0; height])?;
    let b = kronecker(&h_top, &ones_col)?;

    let scalar = nf.sqrt() * kf.powf(1.0 - 2.0 * q.inv());
    let a_prime = identity(n).scale(scalar);
    let a = a_prime.add(&b)?;

    let n_alpha = PowProduct::pow(nf, 0.5).times(kf, 1.0);
    let ap_value = PowProduct::pow(nf, 0.5).times(kf, 1.0 - 2.0 * q.inv());
    let p2_ratio = PowProduct::pow(kf, -2.0 * (p.inv() - q.inv()));
    let q_norm = PowProduct::pow(nf, 0.5 + q.inv()).times(kf, 1.0 - 2.0 * q.inv());
    let expected = AnalyticFacts {
        b_spectrum: vec![(n_alpha, m)],
        ap_spectrum: vec![(ap_value, n)],
        p2_ratio: p2_ratio.clone(),
        q_norm,
    };

    Ok(HardInstance {
        case_id: CaseId::Case1,
        k,
        n,
        p,
        q,
        a_prime,
        b,
        a,
        eps_threshold: p2_ratio.value(),
        degenerate: m == 1,
        expected,
    })
}

/// Case 2 (p > q >= 2): A' = J^1 and B = n^(-1/q-1/2) H with n flat
/// singular values n^(-1/q); both S_q norms equal 1.
pub fn build_case2(k: u32, p: SchattenExponent, q: SchattenExponent) -> Result<HardInstance> {
    plain_k(k)?;
    require(
        q.is_finite() && q.order() >= 2.0,
        "case 2 requires finite q >= 2",
    )?;
    require(
        p.order() > q.order(),
        "case 2 requires p > q (p may be inf)",
    )?;
    let n = 1usize << k;
    let nf = n as f64;

    let scale = nf.powf(-q.inv() - 0.5);
    let b = hadamard(k)?.scale(scale);
    let a_prime = single_entry(n);
    let a = a_prime.add(&b)?;

    let p2_ratio = PowProduct::pow(nf, p.inv() - q.inv());
    let expected = AnalyticFacts {
        b_spectrum: vec![(PowProduct::pow(nf, -q.inv()), n)],
        ap_spectrum: vec![(PowProduct::one(), 1)],
        p2_ratio: p2_ratio.clone(),
        q_norm: PowProduct::one(),
    };

    Ok(HardInstance {
        case_id: CaseId::Case2,
        k,
        n,
        p,
        q,
        a_prime,
        b,
        a,
        eps_threshold: p2_ratio.value(),
        degenerate: false,
        expected,
    })
}

/// Case 3 (1 <= p < q <= 2): A' = I and B = n^(1/q-1) J_n, rank one with
/// singular value n^(1/q).
pub fn build_case3(k: u32, p: SchattenExponent, q: SchattenExponent) -> Result<HardInstance> {
    plain_k(k)?;
    require(
        p.is_finite() && q.is_finite() && p.order() >= 1.0,
        "case 3 requires finite exponents with p >= 1",
    )?;
    require(
        p.order() < q.order() && q.order() <= 2.0,
        "case 3 requires p < q <= 2",
    )?;
    let n = 1usize << k;
    let nf = n as f64;

    let b = all_ones(n).scale(nf.powf(q.inv() - 1.0));
    let a_prime = identity(n);
    let a = a_prime.add(&b)?;

    let p2_ratio = PowProduct::pow(nf, q.inv() - p.inv());
    let expected = AnalyticFacts {
        b_spectrum: vec![(PowProduct::pow(nf, q.inv()), 1)],
        ap_spectrum: vec![(PowProduct::one(), n)],
        p2_ratio: p2_ratio.clone(),
        q_norm: PowProduct::pow(nf, q.inv()),
    };

    Ok(HardInstance {
        case_id: CaseId::Case3,
        k,
        n,
        p,
        q,
        a_prime,
        b,
        a,
        eps_threshold: p2_ratio.value(),
        degenerate: false,
        expected,
    })
}

/// Case 4 (1 <= q < min(p, 2)): A' = J^1 and B = k^(-1/q) C, where C is
/// block-diagonal with k copies of (1/m) J_m, m = n/k.
pub fn build_case4(k: u32, p: SchattenExponent, q: SchattenExponent) -> Result<HardInstance> {
    power_of_two_k(k)?;
    require(
        q.is_finite() && q.order() >= 1.0 && q.order() < 2.0,
        "case 4 requires finite q in [1, 2)",
    )?;
    require(
        p.order() > q.order(),
        "case 4 requires p > q (p may be inf)",
    )?;
    let n = 1usize << k;
    let kf = k as f64;
    let m = n / k as usize;

    let block = all_ones(m).scale(1.0 / m as f64);
    let blocks: Vec<Matrix> = std::iter::repeat_n(block, k as usize).collect();
    let c = block_diagonal(&blocks);
    let b = c.scale(kf.powf(-q.inv()));
    let a_prime = single_entry(n);
    let a = a_prime.add(&b)?;

    let p2_ratio = PowProduct::pow(kf, p.inv() - q.inv());
    let expected = AnalyticFacts {
        b_spectrum: vec![(PowProduct::pow(kf, -q.inv()), k as usize)],
        ap_spectrum: vec![(PowProduct::one(), 1)],
        p2_ratio: p2_ratio.clone(),
        q_norm: PowProduct::one(),
    };

    Ok(HardInstance {
        case_id: CaseId::Case4,
        k,
        n,
        p,
        q,
        a_prime,
        b,
        a,
        eps_threshold: p2_ratio.value(),
        degenerate: false,
        expected,
    })
}

/// Dispatch by case number.
pub fn build_case(
    case: CaseId,
    k: u32,
    p: SchattenExponent,
    q: SchattenExponent,
) -> Result<HardInstance> {
    match case {
        CaseId::Case1 => build_case1(k, p, q),
        CaseId::Case2 => build_case2(k, p, q),
        CaseId::Case3 => build_case3(k, p, q),
        CaseId::Case4 => build_case4(k, p, q),
    }
}

/// The p > q counterexample vector (1, n^(-1/q), ..., n^(-1/q)).
pub fn vector_counterexample(n: usize, q: SchattenExponent) -> Vector {
    assert!(n >= 2, "counterexample needs n >= 2");
    assert!(
        q.is_finite() && q.order() >= 1.0,
        "counterexample needs finite q >= 1"
    );
    let small = (n as f64).powf(-q.inv());
    let mut entries = vec![small; n];
    entries[0] = 1.0;
    Vector::new(entries).expect("entries are finite")
}

// ---------------------------------------------------------------------------
// Serialization: A_prime.mtx, B.mtx, A.mtx + instance.json in a directory.
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct SpectrumRunDoc {
    value: String,
    multiplicity: usize,
}

#[derive(Serialize, Deserialize)]
struct ExpectedDoc {
    b_spectrum: Vec<SpectrumRunDoc>,
    ap_spectrum: Vec<SpectrumRunDoc>,
    p2_ratio: String,
    q_norm: String,
}

#[derive(Serialize, Deserialize)]
struct InstanceDoc {
    case_id: u8,
    n: usize,
    k: u32,
    p: SchattenExponent,
    q: SchattenExponent,
    eps_threshold: String,
    eps0: String,
    degenerate: bool,
    expected: ExpectedDoc,
}

fn runs_to_doc(runs: &[(PowProduct, usize)]) -> Vec<SpectrumRunDoc> {
    runs.iter()
        .map(|(v, m)| SpectrumRunDoc {
            value: format_g17(v.value()),
            multiplicity: *m,
        })
        .collect()
}

fn runs_from_doc(docs: &[SpectrumRunDoc]) -> Result<Vec<(PowProduct, usize)>> {
    docs.iter()
        .map(|d| {
            let v: f64 = d
                .value
                .parse()
                .map_err(|_| Error::invalid(format!("bad spectrum value {:?}", d.value)))?;
            Ok((PowProduct::literal(v), d.multiplicity))
        })
        .collect()
}

impl HardInstance {
    pub fn save(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        io::write_matrix(&dir.join("A_prime.mtx"), &self.a_prime)?;
        io::write_matrix(&dir.join("B.mtx"), &self.b)?;
        io::write_matrix(&dir.join("A.mtx"), &self.a)?;
        let doc = InstanceDoc {
            case_id: self.case_id.number(),
            n: self.n,
            k: self.k,
            p: self.p,
            q: self.q,
            eps_threshold: format_g17(self.eps_threshold),
            eps0: format_g17(EPS0),
            degenerate: self.degenerate,
            expected: ExpectedDoc {
                b_spectrum: runs_to_doc(&self.expected.b_spectrum),
                ap_spectrum: runs_to_doc(&self.expected.ap_spectrum),
                p2_ratio: format_g17(self.expected.p2_ratio.value()),
                q_norm: format_g17(self.expected.q_norm.value()),
            },
        };
        let json = serde_json::to_string_pretty(&doc)?;
        io::write_atomic(&dir.join("instance.json"), json.as_bytes())?;
        Ok(())
    }

    pub fn load(dir: &Path) -> Result<HardInstance> {
        let doc: InstanceDoc =
            serde_json::from_str(&fs::read_to_string(dir.join("instance.json"))?)?;
        let a_prime = io::read_matrix(&dir.join("A_prime.mtx"))?;
        let b = io::read_matrix(&dir.join("B.mtx"))?;
        let a = io::read_matrix(&dir.join("A.mtx"))?;
        let parse_scalar = |s: &str| -> Result<f64> {
            s.parse()
                .map_err(|_| Error::invalid(format!("bad scalar {s:?} in instance.json")))
        };
        Ok(HardInstance {
            case_id: CaseId::from_number(doc.case_id)?,
            k: doc.k,
            n: doc.n,
            p: doc.p,
            q: doc.q,
            a_prime,
            b,
            a,
            eps_threshold: parse_scalar(&doc.eps_threshold)?,
            degenerate: doc.degenerate,
            expected: AnalyticFacts {
                b_spectrum: runs_from_doc(&doc.expected.b_spectrum)?,
                ap_spectrum: runs_from_doc(&doc.expected.ap_spectrum)?,
                p2_ratio: PowProduct::literal(parse_scalar(&doc.expected.p2_ratio)?),
                q_norm: PowProduct::literal(parse_scalar(&doc.expected.q_norm)?),
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::nnz;
    use crate::spectra::{
        numerical_rank, schatten_norm, singular_values, SchattenExponent as E, DEFAULT_RANK_TOL,
    };

    fn rel_err(got: f64, want: f64) -> f64 {
        (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn case1_k8_matches_analytic_facts() {
        let inst = build_case1(8, E::Finite(1.0), E::Finite(4.0)).unwrap();
        assert_eq!(inst.n, 256);
        assert!(!inst.degenerate);
        assert_eq!(nnz(&inst.a_prime), 256);
        // m = 4 singular values of 128; Frobenius^2 = n^2.
        let s = singular_values(&inst.b).unwrap();
        let expected = inst.expected.b_spectrum_values(256);
        assert_eq!(expected[..4], [128.0, 128.0, 128.0, 128.0]);
        for (got, want) in s.values().iter().zip(&expected) {
            assert!((got - want).abs() <= 1e-8 * 128.0);
        }
        assert!(rel_err(inst.b.sum_of_squares(), 65536.0) == 0.0);
        // A' scalar = 16 * sqrt(8).
        assert!(rel_err(inst.a_prime.get(0, 0), 16.0 * 8f64.sqrt()) <= 1e-15);
        assert!(rel_err(inst.expected.p2_ratio.value(), 8f64.powf(-1.5)) <= 1e-15);
        assert!(rel_err(inst.expected.q_norm.value(), 16.0 * 8f64.sqrt() * 4.0) <= 1e-15);
        // Support overlap confined to the diagonal: A = A' + B exactly.
        let reconst = inst.a_prime.add(&inst.b).unwrap();
        assert_eq!(inst.a.max_abs_diff(&reconst).unwrap(), 0.0);
    }

    #[test]
    fn case1_k4_degenerates_to_all_ones() {
        let inst = build_case1(4, E::Finite(1.0), E::Finite(2.0)).unwrap();
        assert!(inst.degenerate);
        assert_eq!(inst.n, 16);
        assert_eq!(inst.b.max_abs_diff(&all_ones(16)).unwrap(), 0.0);
        let s = singular_values(&inst.b).unwrap();
        assert!(rel_err(s.values()[0], 16.0) <= 1e-12);
        assert_eq!(numerical_rank(&s, DEFAULT_RANK_TOL), 1);
    }

    #[test]
    fn case1_schatten_zero_reuse() {
        let inst = build_case1(8, E::Finite(1.0), E::Finite(4.0)).unwrap();
        let sb = singular_values(&inst.b).unwrap();
        assert_eq!(numerical_rank(&sb, DEFAULT_RANK_TOL), 4);
        let sa = singular_values(&inst.a).unwrap();
        assert_eq!(numerical_rank(&sa, DEFAULT_RANK_TOL), 256);
    }

    #[test]
    fn case2_k4_unit_frobenius() {
        let inst = build_case2(4, E::Finite(4.0), E::Finite(2.0)).unwrap();
        assert_eq!(nnz(&inst.a_prime), 1);
        assert!(rel_err(inst.b.sum_of_squares(), 1.0) <= 1e-12);
        let s = singular_values(&inst.b).unwrap();
        for &v in s.values() {
            assert!(rel_err(v, 0.25) <= 1e-10);
        }
        assert!(rel_err(schatten_norm(&s, E::Finite(2.0)), 1.0) <= 1e-10);
    }

    #[test]
    fn case2_p2_ratios() {
        let inst = build_case2(8, E::Finite(4.0), E::Finite(2.0)).unwrap();
        assert!(rel_err(inst.expected.p2_ratio.value(), 0.25) <= 1e-15);
        assert!(rel_err(inst.eps_threshold, 0.25) <= 1e-15);
        let inst_inf = build_case2(8, E::Inf, E::Finite(2.0)).unwrap();
        assert!(rel_err(inst_inf.expected.p2_ratio.value(), 0.0625) <= 1e-15);
    }

    #[test]
    fn case1_accepts_spectral_target() {
        // q = inf: A' = sqrt(n) * k * I and ||B||_inf = sqrt(n) * k match.
        let inst = build_case1(4, E::Finite(1.0), E::Inf).unwrap();
        let sb = singular_values(&inst.b).unwrap();
        let sap = singular_values(&inst.a_prime).unwrap();
        let b_inf = schatten_norm(&sb, E::Inf);
        let ap_inf = schatten_norm(&sap, E::Inf);
        assert!(rel_err(b_inf, 16.0) <= 1e-10);
        assert!(rel_err(ap_inf, 16.0) <= 1e-12);
        assert!(rel_err(inst.expected.q_norm.value(), 16.0) <= 1e-15);
    }

    #[test]
    fn case3_k4_norm_match() {
        let inst = build_case3(4, E::Finite(1.0), E::Finite(2.0)).unwrap();
        let sb = singular_values(&inst.b).unwrap();
        let sa = singular_values(&inst.a_prime).unwrap();
        assert!(rel_err(schatten_norm(&sb, E::Finite(2.0)), 4.0) <= 1e-10);
        assert!(rel_err(schatten_norm(&sa, E::Finite(2.0)), 4.0) <= 1e-12);
        // rank(B) = 1, rank(A) full.
        assert_eq!(numerical_rank(&sb, DEFAULT_RANK_TOL), 1);
        let s_full = singular_values(&inst.a).unwrap();
        assert_eq!(numerical_rank(&s_full, DEFAULT_RANK_TOL), 16);
    }

    #[test]
    fn case3_k8_ratio() {
        let inst = build_case3(8, E::Finite(1.0), E::Finite(2.0)).unwrap();
        assert!(rel_err(inst.expected.p2_ratio.value(), 0.0625) <= 1e-15);
        assert!(rel_err(inst.expected.q_norm.value(), 16.0) <= 1e-15);
    }

    #[test]
    fn case4_k8_block_structure() {
        let inst = build_case4(8, E::Finite(2.0), E::Finite(1.0)).unwrap();
        assert_eq!(nnz(&inst.b), 8192); // n * m = 256 * 32
        assert_eq!(nnz(&inst.a_prime), 1);
        // B = (1/8) C at q = 1; S_1 norm is 8 * (1/8) = 1.
        let s = singular_values(&inst.b).unwrap();
        let expected = inst.expected.b_spectrum_values(256);
        for (got, want) in s.values().iter().zip(&expected) {
            assert!((got - want).abs() <= 1e-10);
        }
        assert!(rel_err(schatten_norm(&s, E::Finite(1.0)), 1.0) <= 1e-8);
        assert!(rel_err(inst.expected.p2_ratio.value(), 8f64.powf(-0.5)) <= 1e-15);
    }

    #[test]
    fn kronecker_spectrum_cross_check() {
        // Singular values of a Kronecker product are all pairwise products.
        let a = Matrix::new(2, 2, vec![2.0, 0.0, 0.0, 3.0]).unwrap();
        let b = Matrix::new(2, 2, vec![5.0, 0.0, 0.0, 7.0]).unwrap();
        let s = singular_values(&kronecker(&a, &b).unwrap()).unwrap();
        let want = [21.0, 15.0, 14.0, 10.0];
        for (got, want) in s.values().iter().zip(&want) {
            assert!(rel_err(*got, *want) <= 1e-12);
        }
    }

    #[test]
    fn block_diagonal_spectrum_cross_check() {
        let block = all_ones(32).scale(1.0 / 32.0);
        let blocks: Vec<Matrix> = std::iter::repeat_n(block, 8).collect();
        let s = singular_values(&block_diagonal(&blocks)).unwrap();
        for &v in &s.values()[..8] {
            assert!(rel_err(v, 1.0) <= 1e-10);
        }
        for &v in &s.values()[8..] {
            assert!(v.abs() <= 1e-10);
        }
    }

    #[test]
    fn builder_preconditions() {
        assert!(build_case1(3, E::Finite(1.0), E::Finite(4.0)).is_err());
        assert!(build_case1(8, E::Finite(3.0), E::Finite(2.0)).is_err());
        assert!(build_case2(8, E::Finite(2.0), E::Finite(2.0)).is_err());
        assert!(build_case2(8, E::Finite(3.0), E::Finite(1.0)).is_err());
        assert!(build_case3(8, E::Finite(1.0), E::Finite(3.0)).is_err());
        assert!(build_case4(8, E::Finite(1.0), E::Finite(2.0)).is_err());
        assert!(build_case4(5, E::Finite(2.0), E::Finite(1.0)).is_err());
    }

    #[test]
    fn counterexample_vector() {
        let x = vector_counterexample(4, E::Finite(1.0));
        assert_eq!(x.entries(), &[1.0, 0.25, 0.25, 0.25]);
        let y = vector_counterexample(4, E::Finite(2.0));
        assert_eq!(y.entries(), &[1.0, 0.5, 0.5, 0.5]);
        // ||x - e_1||_q = ((n-1)/n)^{1/q} -> 1 for large n.
        let n = 1024;
        let z = vector_counterexample(n, E::Finite(2.0));
        let resid = crate::matrix::tail(&z, 1).unwrap();
        let norm = crate::spectra::lp_norm(&resid, E::Finite(2.0));
        let want = ((n as f64 - 1.0) / n as f64).sqrt();
        assert!(rel_err(norm, want) <= 1e-12);
    }

    #[test]
    fn save_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let inst = build_case2(4, E::Finite(4.0), E::Finite(2.0)).unwrap();
        inst.save(dir.path()).unwrap();
        for name in ["A_prime.mtx", "B.mtx", "A.mtx", "instance.json"] {
            assert!(dir.path().join(name).exists());
        }
        let loaded = HardInstance::load(dir.path()).unwrap();
        assert_eq!(loaded.case_id, CaseId::Case2);
        assert_eq!(loaded.n, 16);
        assert_eq!(loaded.b, inst.b);
        assert_eq!(loaded.a, inst.a);
        assert!(rel_err(loaded.eps_threshold, inst.eps_threshold) <= 1e-16);
        assert!(
            rel_err(
                loaded.expected.p2_ratio.value(),
                inst.expected.p2_ratio.value()
            ) <= 1e-16
        );
    }
}
