//! Python bindings for the spnorm toolkit: matrices, Schatten norms, the
//! vector promotion algorithm, the hard-instance families, verification
//! reports, and attack sweeps.

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use pyo3::IntoPyObjectExt;

use spnorm::attack::{self, StrategyKind};
use spnorm::forge;
use spnorm::matrix;
use spnorm::sparsify;
use spnorm::spectra;
use spnorm::verify;
use spnorm::{CaseId, IndexSet, SchattenExponent, VerificationReport};

fn to_py_err(err: spnorm::Error) -> PyErr {
    match err {
        spnorm::Error::Io(e) => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// Accepts 2, 2.0, "2", "0", or "inf".
fn parse_exponent(obj: &Bound<'_, PyAny>) -> PyResult<SchattenExponent> {
    if let Ok(text) = obj.extract::<String>() {
        return SchattenExponent::parse(&text).map_err(to_py_err);
    }
    if let Ok(value) = obj.extract::<f64>() {
        if value == 0.0 {
            return Ok(SchattenExponent::Zero);
        }
        if value.is_infinite() && value > 0.0 {
            return Ok(SchattenExponent::Inf);
        }
        return SchattenExponent::finite(value).map_err(to_py_err);
    }
    Err(PyValueError::new_err(
        "exponent must be a number or one of \"0\", \"inf\"",
    ))
}

fn vector_from(entries: Vec<f64>) -> PyResult<matrix::Vector> {
    matrix::Vector::new(entries).map_err(to_py_err)
}

fn json_to_py(py: Python<'_>, value: &serde_json::Value) -> PyResult<Py<PyAny>> {
    match value {
        serde_json::Value::Null => py.None().into_py_any(py),
        serde_json::Value::Bool(b) => b.into_py_any(py),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_py_any(py)
            } else {
                n.as_f64().unwrap_or(f64::NAN).into_py_any(py)
            }
        }
        serde_json::Value::String(s) => s.into_py_any(py),
        serde_json::Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_py_any(py)
        }
        serde_json::Value::Object(map) => {
            let dict = PyDict::new(py);
            for (key, item) in map {
                dict.set_item(key, json_to_py(py, item)?)?;
            }
            dict.into_py_any(py)
        }
    }
}

fn report_to_py(py: Python<'_>, report: &VerificationReport) -> PyResult<Py<PyAny>> {
    let value = serde_json::to_value(report)
        .map_err(|e| PyValueError::new_err(format!("report serialization failed: {e}")))?;
    json_to_py(py, &value)
}

/// Dense real matrix with row-major storage.
#[pyclass(name = "Matrix", from_py_object)]
#[derive(Clone)]
struct PyMatrix {
    inner: matrix::Matrix,
}

#[pymethods]
impl PyMatrix {
    /// Builds a matrix from a list of equal-length rows.
    #[new]
    fn new(rows: Vec<Vec<f64>>) -> PyResult<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != width) {
            return Err(PyValueError::new_err("rows must have equal lengths"));
        }
        let entries: Vec<f64> = rows.into_iter().flatten().collect();
        let inner = matrix::Matrix::new(height, width, entries).map_err(to_py_err)?;
        Ok(PyMatrix { inner })
    }

    #[getter]
    fn rows(&self) -> usize {
        self.inner.rows()
    }

    #[getter]
    fn cols(&self) -> usize {
        self.inner.cols()
    }

    #[getter]
    fn nnz(&self) -> usize {
        matrix::nnz(&self.inner)
    }

    fn get(&self, i: usize, j: usize) -> PyResult<f64> {
        if i >= self.inner.rows() || j >= self.inner.cols() {
            return Err(PyValueError::new_err("index out of range"));
        }
        Ok(self.inner.get(i, j))
    }

    fn to_lists(&self) -> Vec<Vec<f64>> {
        (0..self.inner.rows())
            .map(|i| {
                (0..self.inner.cols())
                    .map(|j| self.inner.get(i, j))
                    .collect()
            })
            .collect()
    }

    fn transpose(&self) -> PyMatrix {
        PyMatrix {
            inner: self.inner.transpose(),
        }
    }

    fn add(&self, other: &PyMatrix) -> PyResult<PyMatrix> {
        Ok(PyMatrix {
            inner: self.inner.add(&other.inner).map_err(to_py_err)?,
        })
    }

    fn sub(&self, other: &PyMatrix) -> PyResult<PyMatrix> {
        Ok(PyMatrix {
            inner: self.inner.sub(&other.inner).map_err(to_py_err)?,
        })
    }

    fn scale(&self, factor: f64) -> PyMatrix {
        PyMatrix {
            inner: self.inner.scale(factor),
        }
    }

    fn matmul(&self, other: &PyMatrix) -> PyResult<PyMatrix> {
        Ok(PyMatrix {
            inner: self.inner.matmul(&other.inner).map_err(to_py_err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!("Matrix({}x{})", self.inner.rows(), self.inner.cols())
    }
}

/// One of the four hard-instance families: A = A' + B with analytic facts.
#[pyclass(name = "HardInstance")]
struct PyHardInstance {
    inner: forge::HardInstance,
}

#[pymethods]
impl PyHardInstance {
    #[getter]
    fn case_id(&self) -> u8 {
        self.inner.case_id.number()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn k(&self) -> u32 {
        self.inner.k
    }

    #[getter]
    fn p(&self) -> String {
        self.inner.p.to_string()
    }

    #[getter]
    fn q(&self) -> String {
        self.inner.q.to_string()
    }

    #[getter]
    fn eps_threshold(&self) -> f64 {
        self.inner.eps_threshold
    }

    #[getter]
    fn degenerate(&self) -> bool {
        self.inner.degenerate
    }

    #[getter]
    fn a_prime(&self) -> PyMatrix {
        PyMatrix {
            inner: self.inner.a_prime.clone(),
        }
    }

    #[getter]
    fn b(&self) -> PyMatrix {
        PyMatrix {
            inner: self.inner.b.clone(),
        }
    }

    #[getter]
    fn a(&self) -> PyMatrix {
        PyMatrix {
            inner: self.inner.a.clone(),
        }
    }

    /// Analytic expectations: B/A' spectra, the P2 ratio, the P3 value.
    fn expected(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let dict = PyDict::new(py);
        dict.set_item(
            "b_spectrum",
            self.inner.expected.b_spectrum_values(self.inner.n),
        )?;
        dict.set_item(
            "ap_spectrum",
            self.inner.expected.ap_spectrum_values(self.inner.n),
        )?;
        dict.set_item("p2_ratio", self.inner.expected.p2_ratio.value())?;
        dict.set_item("q_norm", self.inner.expected.q_norm.value())?;
        dict.into_py_any(py)
    }

    /// Writes A_prime.mtx, B.mtx, A.mtx, instance.json into the directory.
    fn save(&self, dir: &str) -> PyResult<()> {
        self.inner
            .save(std::path::Path::new(dir))
            .map_err(to_py_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "HardInstance(case={}, n={}, p={}, q={})",
            self.inner.case_id.number(),
            self.inner.n,
            self.inner.p,
            self.inner.q
        )
    }
}

#[pyfunction]
fn hadamard(k: u32) -> PyResult<PyMatrix> {
    Ok(PyMatrix {
        inner: matrix::hadamard(k).map_err(to_py_err)?,
    })
}

#[pyfunction]
fn identity(n: usize) -> PyMatrix {
    PyMatrix {
        inner: matrix::identity(n),
    }
}

#[pyfunction]
fn all_ones(n: usize) -> PyMatrix {
    PyMatrix {
        inner: matrix::all_ones(n),
    }
}

#[pyfunction]
fn single_entry(n: usize) -> PyMatrix {
    PyMatrix {
        inner: matrix::single_entry(n),
    }
}

#[pyfunction]
fn kronecker(a: &PyMatrix, b: &PyMatrix) -> PyResult<PyMatrix> {
    Ok(PyMatrix {
        inner: matrix::kronecker(&a.inner, &b.inner).map_err(to_py_err)?,
    })
}

#[pyfunction]
fn block_diagonal(blocks: Vec<PyMatrix>) -> PyResult<PyMatrix> {
    if blocks.is_empty() {
        return Err(PyValueError::new_err("need at least one block"));
    }
    let inner: Vec<matrix::Matrix> = blocks.into_iter().map(|b| b.inner).collect();
    Ok(PyMatrix {
        inner: matrix::block_diagonal(&inner),
    })
}

#[pyfunction]
fn head(x: Vec<f64>, c: usize) -> PyResult<Vec<f64>> {
    let v = vector_from(x)?;
    Ok(matrix::head(&v, c).map_err(to_py_err)?.entries().to_vec())
}

#[pyfunction]
fn tail(x: Vec<f64>, c: usize) -> PyResult<Vec<f64>> {
    let v = vector_from(x)?;
    Ok(matrix::tail(&v, c).map_err(to_py_err)?.entries().to_vec())
}

#[pyfunction]
fn singular_values(m: &PyMatrix) -> PyResult<Vec<f64>> {
    Ok(spectra::singular_values(&m.inner)
        .map_err(to_py_err)?
        .values()
        .to_vec())
}

#[pyfunction]
fn schatten_norm(m: &PyMatrix, p: &Bound<'_, PyAny>) -> PyResult<f64> {
    let p = parse_exponent(p)?;
    let s = spectra::singular_values(&m.inner).map_err(to_py_err)?;
    Ok(spectra::schatten_norm(&s, p))
}

#[pyfunction]
#[pyo3(signature = (m, rel_tol = spectra::DEFAULT_RANK_TOL))]
fn numerical_rank(m: &PyMatrix, rel_tol: f64) -> PyResult<usize> {
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        return Err(PyValueError::new_err("rel_tol must lie in (0, 1)"));
    }
    let s = spectra::singular_values(&m.inner).map_err(to_py_err)?;
    Ok(spectra::numerical_rank(&s, rel_tol))
}

#[pyfunction]
fn lp_norm(x: Vec<f64>, p: &Bound<'_, PyAny>) -> PyResult<f64> {
    let p = parse_exponent(p)?;
    Ok(spectra::lp_norm(&vector_from(x)?, p))
}

#[pyfunction]
fn min_lp_sparsity(x: Vec<f64>, eps: f64, p: &Bound<'_, PyAny>) -> PyResult<usize> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(PyValueError::new_err("eps must lie in (0, 1)"));
    }
    let p = parse_exponent(p)?;
    Ok(sparsify::min_lp_sparsity(&vector_from(x)?, eps, p))
}

fn budget_to_py(py: Python<'_>, budget: &sparsify::PromotionBudget) -> PyResult<Py<PyAny>> {
    let dict = PyDict::new(py);
    dict.set_item("s", budget.s)?;
    dict.set_item("c_exact", budget.c_exact)?;
    dict.set_item("c_rounded", budget.c_rounded)?;
    dict.set_item("eps", budget.eps)?;
    dict.set_item("p", budget.p.to_string())?;
    dict.set_item("q", budget.q.to_string())?;
    dict.into_py_any(py)
}

#[pyfunction]
fn extra_budget(
    py: Python<'_>,
    s: usize,
    eps: f64,
    p: &Bound<'_, PyAny>,
    q: &Bound<'_, PyAny>,
) -> PyResult<Py<PyAny>> {
    let p = parse_exponent(p)?;
    let q = parse_exponent(q)?;
    let budget = sparsify::extra_budget(s, eps, p, q).map_err(to_py_err)?;
    budget_to_py(py, &budget)
}

#[pyfunction]
fn promote_sparsifier(
    py: Python<'_>,
    x: Vec<f64>,
    eps: f64,
    p: &Bound<'_, PyAny>,
    q: &Bound<'_, PyAny>,
) -> PyResult<(Vec<f64>, Py<PyAny>)> {
    let p = parse_exponent(p)?;
    let q = parse_exponent(q)?;
    let (promoted, budget) =
        sparsify::promote_sparsifier(&vector_from(x)?, eps, p, q).map_err(to_py_err)?;
    Ok((promoted.entries().to_vec(), budget_to_py(py, &budget)?))
}

#[pyfunction]
fn tail_bound(
    x: Vec<f64>,
    c: usize,
    p: &Bound<'_, PyAny>,
    q: &Bound<'_, PyAny>,
) -> PyResult<(f64, f64)> {
    let p = parse_exponent(p)?;
    let q = parse_exponent(q)?;
    let v = vector_from(x)?;
    if !(c >= 1 && c < v.dim()) {
        return Err(PyValueError::new_err("need 1 <= c < dim"));
    }
    Ok(sparsify::tail_bound(&v, c, p, q))
}

#[pyfunction]
fn build_instance(
    case: u8,
    k: u32,
    p: &Bound<'_, PyAny>,
    q: &Bound<'_, PyAny>,
) -> PyResult<PyHardInstance> {
    let case = CaseId::from_number(case).map_err(to_py_err)?;
    let p = parse_exponent(p)?;
    let q = parse_exponent(q)?;
    Ok(PyHardInstance {
        inner: forge::build_case(case, k, p, q).map_err(to_py_err)?,
    })
}

#[pyfunction]
fn load_instance(dir: &str) -> PyResult<PyHardInstance> {
    Ok(PyHardInstance {
        inner: forge::HardInstance::load(std::path::Path::new(dir)).map_err(to_py_err)?,
    })
}

#[pyfunction]
fn vector_counterexample(n: usize, q: &Bound<'_, PyAny>) -> PyResult<Vec<f64>> {
    let q = parse_exponent(q)?;
    if n < 2 || !q.is_finite() || q.order() < 1.0 {
        return Err(PyValueError::new_err("need n >= 2 and finite q >= 1"));
    }
    Ok(forge::vector_counterexample(n, q).entries().to_vec())
}

#[pyfunction]
#[pyo3(signature = (inst, eps, tol = verify::DEFAULT_INSTANCE_TOL))]
fn check_instance(
    py: Python<'_>,
    inst: &PyHardInstance,
    eps: f64,
    tol: f64,
) -> PyResult<Py<PyAny>> {
    let report = verify::check_instance(&inst.inner, eps, tol).map_err(to_py_err)?;
    report_to_py(py, &report)
}

#[pyfunction]
fn check_sparsifier(
    py: Python<'_>,
    a: &PyMatrix,
    a_cand: &PyMatrix,
    eps: f64,
    p: &Bound<'_, PyAny>,
) -> PyResult<Py<PyAny>> {
    let p = parse_exponent(p)?;
    let record = verify::check_sparsifier(&a.inner, &a_cand.inner, eps, p).map_err(to_py_err)?;
    let value = serde_json::to_value(&record)
        .map_err(|e| PyValueError::new_err(format!("record serialization failed: {e}")))?;
    json_to_py(py, &value)
}

fn index_sets(groups: Vec<Vec<usize>>) -> PyResult<Vec<IndexSet>> {
    groups
        .into_iter()
        .map(|mut g| {
            g.sort_unstable();
            IndexSet::new(g).map_err(to_py_err)
        })
        .collect()
}

#[pyfunction]
fn check_pinching(
    py: Python<'_>,
    m: &PyMatrix,
    parts: Vec<Vec<usize>>,
    p: &Bound<'_, PyAny>,
) -> PyResult<Py<PyAny>> {
    let p = parse_exponent(p)?;
    let record = verify::check_pinching(&m.inner, &index_sets(parts)?, p).map_err(to_py_err)?;
    let value = serde_json::to_value(&record)
        .map_err(|e| PyValueError::new_err(format!("record serialization failed: {e}")))?;
    json_to_py(py, &value)
}

#[pyfunction]
fn check_block_pinching(
    py: Python<'_>,
    m: &PyMatrix,
    col_groups: Vec<Vec<usize>>,
    q: &Bound<'_, PyAny>,
) -> PyResult<Py<PyAny>> {
    let q = parse_exponent(q)?;
    let record =
        verify::check_block_pinching(&m.inner, &index_sets(col_groups)?, q).map_err(to_py_err)?;
    let value = serde_json::to_value(&record)
        .map_err(|e| PyValueError::new_err(format!("record serialization failed: {e}")))?;
    json_to_py(py, &value)
}

#[pyfunction]
fn check_holder_vectors(
    py: Python<'_>,
    x: Vec<f64>,
    p: &Bound<'_, PyAny>,
    q: &Bound<'_, PyAny>,
) -> PyResult<Py<PyAny>> {
    let p = parse_exponent(p)?;
    let q = parse_exponent(q)?;
    let records = verify::check_holder_vectors(&vector_from(x)?, p, q).map_err(to_py_err)?;
    let value = serde_json::to_value(&records)
        .map_err(|e| PyValueError::new_err(format!("record serialization failed: {e}")))?;
    json_to_py(py, &value)
}

#[pyfunction]
fn check_rotfeld(
    py: Python<'_>,
    a: &PyMatrix,
    b: &PyMatrix,
    p: &Bound<'_, PyAny>,
) -> PyResult<Py<PyAny>> {
    let p = parse_exponent(p)?;
    let record = verify::check_rotfeld(&a.inner, &b.inner, p).map_err(to_py_err)?;
    let value = serde_json::to_value(&record)
        .map_err(|e| PyValueError::new_err(format!("record serialization failed: {e}")))?;
    json_to_py(py, &value)
}

#[pyfunction]
fn make_spectral_approx(a: &PyMatrix, eps: f64, seed: u64) -> PyResult<PyMatrix> {
    Ok(PyMatrix {
        inner: verify::make_spectral_approx(&a.inner, eps, seed).map_err(to_py_err)?,
    })
}

#[pyfunction]
fn check_spectral_to_schatten(
    py: Python<'_>,
    a: &PyMatrix,
    a_cand: &PyMatrix,
    eps: f64,
    ps: Vec<Bound<'_, PyAny>>,
) -> PyResult<Py<PyAny>> {
    let exponents: Vec<SchattenExponent> =
        ps.iter().map(parse_exponent).collect::<PyResult<_>>()?;
    let report = verify::check_spectral_to_schatten(&a.inner, &a_cand.inner, eps, &exponents)
        .map_err(to_py_err)?;
    report_to_py(py, &report)
}

#[pyfunction]
fn attack_topk(b: &PyMatrix, budget: usize) -> PyResult<PyMatrix> {
    Ok(PyMatrix {
        inner: attack::attack_topk(&b.inner, budget).map_err(to_py_err)?,
    })
}

#[pyfunction]
fn attack_uniform(b: &PyMatrix, budget: usize, seed: u64) -> PyMatrix {
    PyMatrix {
        inner: attack::attack_uniform(&b.inner, budget, seed),
    }
}

#[pyfunction]
fn attack_weighted(b: &PyMatrix, budget: usize, seed: u64) -> PyMatrix {
    PyMatrix {
        inner: attack::attack_weighted(&b.inner, budget, seed),
    }
}

#[pyfunction]
fn evaluate_attack(
    b: &PyMatrix,
    b_cand: &PyMatrix,
    q: &Bound<'_, PyAny>,
) -> PyResult<(f64, usize)> {
    let q = parse_exponent(q)?;
    let eval = attack::evaluate(&b.inner, &b_cand.inner, q).map_err(to_py_err)?;
    Ok((eval.rel_error_q, eval.achieved_nnz))
}

#[pyfunction]
fn sweep(
    py: Python<'_>,
    inst: &PyHardInstance,
    strategies: Vec<String>,
    budget_fracs: Vec<f64>,
    seeds: Vec<u64>,
) -> PyResult<Py<PyAny>> {
    let kinds: Vec<StrategyKind> = strategies
        .iter()
        .map(|s| StrategyKind::parse(s).map_err(to_py_err))
        .collect::<PyResult<_>>()?;
    let results = attack::sweep(&inst.inner, &kinds, &budget_fracs, &seeds).map_err(to_py_err)?;
    let value = serde_json::to_value(&results)
        .map_err(|e| PyValueError::new_err(format!("result serialization failed: {e}")))?;
    json_to_py(py, &value)
}

#[pyfunction]
fn read_matrix(path: &str) -> PyResult<PyMatrix> {
    Ok(PyMatrix {
        inner: spnorm::io::read_matrix(std::path::Path::new(path)).map_err(to_py_err)?,
    })
}

#[pyfunction]
fn write_matrix(path: &str, m: &PyMatrix) -> PyResult<()> {
    spnorm::io::write_matrix(std::path::Path::new(path), &m.inner).map_err(to_py_err)
}

#[pymodule]
fn spnorm_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMatrix>()?;
    m.add_class::<PyHardInstance>()?;
    m.add_function(wrap_pyfunction!(hadamard, m)?)?;
    m.add_function(wrap_pyfunction!(identity, m)?)?;
    m.add_function(wrap_pyfunction!(all_ones, m)?)?;
    m.add_function(wrap_pyfunction!(single_entry, m)?)?;
    m.add_function(wrap_pyfunction!(kronecker, m)?)?;
    m.add_function(wrap_pyfunction!(block_diagonal, m)?)?;
    m.add_function(wrap_pyfunction!(head, m)?)?;
    m.add_function(wrap_pyfunction!(tail, m)?)?;
    m.add_function(wrap_pyfunction!(singular_values, m)?)?;
    m.add_function(wrap_pyfunction!(schatten_norm, m)?)?;
    m.add_function(wrap_pyfunction!(numerical_rank, m)?)?;
    m.add_function(wrap_pyfunction!(lp_norm, m)?)?;
    m.add_function(wrap_pyfunction!(min_lp_sparsity, m)?)?;
    m.add_function(wrap_pyfunction!(extra_budget, m)?)?;
    m.add_function(wrap_pyfunction!(promote_sparsifier, m)?)?;
    m.add_function(wrap_pyfunction!(tail_bound, m)?)?;
    m.add_function(wrap_pyfunction!(build_instance, m)?)?;
    m.add_function(wrap_pyfunction!(load_instance, m)?)?;
    m.add_function(wrap_pyfunction!(vector_counterexample, m)?)?;
    m.add_function(wrap_pyfunction!(check_instance, m)?)?;
    m.add_function(wrap_pyfunction!(check_sparsifier, m)?)?;
    m.add_function(wrap_pyfunction!(check_pinching, m)?)?;
    m.add_function(wrap_pyfunction!(check_block_pinching, m)?)?;
    m.add_function(wrap_pyfunction!(check_holder_vectors, m)?)?;
    m.add_function(wrap_pyfunction!(check_rotfeld, m)?)?;
    m.add_function(wrap_pyfunction!(make_spectral_approx, m)?)?;
    m.add_function(wrap_pyfunction!(check_spectral_to_schatten, m)?)?;
    m.add_function(wrap_pyfunction!(attack_topk, m)?)?;
    m.add_function(wrap_pyfunction!(attack_uniform, m)?)?;
    m.add_function(wrap_pyfunction!(attack_weighted, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_attack, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(read_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(write_matrix, m)?)?;
    m.add("EPS0", forge::EPS0)?;
    Ok(())
}
