//! Python bindings: feasibility, construction, verification, the search
//! oracle and the JSON encoding.

use std::time::Duration;

use ::hyperfactor as core;
use core::format;
use core::oracle::Unknown;
use core::{CheckMode, Error, OracleOutcome, Params, SearchBudget};
use num_bigint::BigUint;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Invariant(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// Outcome of the divisibility and degree-sum conditions.
#[pyclass(frozen, name = "FeasibilityReport", module = "hyperfactor")]
struct PyFeasibilityReport(core::FeasibilityReport);

#[pymethods]
impl PyFeasibilityReport {
    #[getter]
    fn ok(&self) -> bool {
        self.0.ok
    }

    /// `(name, holds, detail)` per condition.
    #[getter]
    fn conditions(&self) -> Vec<(String, bool, String)> {
        self.0
            .conditions
            .iter()
            .map(|c| (c.name.clone(), c.holds, c.detail.clone()))
            .collect()
    }

    /// Names of the conditions that fail.
    fn violations(&self) -> Vec<String> {
        self.0.violations().map(|c| c.name.clone()).collect()
    }

    /// Per factor, whether it is guaranteed connected.
    #[getter]
    fn connected(&self) -> Vec<bool> {
        self.0.connected.clone()
    }

    fn __bool__(&self) -> bool {
        self.0.ok
    }

    fn __repr__(&self) -> String {
        let p = &self.0.params;
        format!(
            "FeasibilityReport(n={}, h={}, lam={}, r={:?}, ok={})",
            p.n, p.h, p.lambda, p.r, self.0.ok
        )
    }
}

#[pyclass(frozen, name = "VerificationReport", module = "hyperfactor")]
struct PyVerificationReport(core::VerificationReport);

#[pymethods]
impl PyVerificationReport {
    /// `"final"` or `"stage N"`.
    #[getter]
    fn stage(&self) -> String {
        self.0.stage.to_string()
    }

    #[getter]
    fn overall(&self) -> bool {
        self.0.overall
    }

    /// `(name, passed, witness)` per check.
    #[getter]
    fn checks(&self) -> Vec<(String, bool, Option<String>)> {
        self.0
            .checks
            .iter()
            .map(|c| (c.name.clone(), c.passed, c.witness.clone()))
            .collect()
    }

    fn failed(&self) -> Vec<String> {
        self.0.failed().map(str::to_string).collect()
    }

    fn __bool__(&self) -> bool {
        self.0.overall
    }

    fn __repr__(&self) -> String {
        format!(
            "VerificationReport({}, overall={}, failed={:?})",
            self.0.stage,
            self.0.overall,
            self.failed()
        )
    }
}

/// A factorization of `λK_n^h`: one edge list per factor.
#[pyclass(name = "Factorization", module = "hyperfactor")]
struct PyFactorization(core::Factorization);

#[pymethods]
impl PyFactorization {
    #[new]
    fn new(n: usize, h: usize, lam: usize, r: Vec<usize>, factors: Vec<Vec<Vec<u32>>>) -> Self {
        PyFactorization(core::Factorization {
            n,
            h,
            lambda: lam,
            r,
            factors,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n
    }

    #[getter]
    fn h(&self) -> usize {
        self.0.h
    }

    #[getter]
    fn lam(&self) -> usize {
        self.0.lambda
    }

    #[getter]
    fn r(&self) -> Vec<usize> {
        self.0.r.clone()
    }

    #[getter]
    fn factors(&self) -> Vec<Vec<Vec<u32>>> {
        self.0.factors.clone()
    }

    fn edge_count(&self) -> usize {
        self.0.edge_count()
    }

    fn verify(&self) -> PyVerificationReport {
        PyVerificationReport(core::verify_factorization(&self.0))
    }

    fn to_json(&self) -> String {
        format::to_json(&self.0)
    }

    fn to_text(&self) -> String {
        format::to_text(&self.0)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        format::from_json(text).map(PyFactorization).map_err(|e| {
            PyValueError::new_err(format!("line {}, column {}: {e}", e.line(), e.column()))
        })
    }

    fn __len__(&self) -> usize {
        self.0.factors.len()
    }

    fn __eq__(&self, other: &Self) -> bool {
        let (mut a, mut b) = (self.0.clone(), other.0.clone());
        a.canonicalize();
        b.canonicalize();
        a == b
    }

    fn __repr__(&self) -> String {
        format!(
            "Factorization(n={}, h={}, lam={}, r={:?}, edges={})",
            self.0.n,
            self.0.h,
            self.0.lambda,
            self.0.r,
            self.0.edge_count()
        )
    }
}

#[pyfunction]
fn check_feasibility(
    n: usize,
    h: usize,
    lam: usize,
    r: Vec<usize>,
) -> PyResult<PyFeasibilityReport> {
    core::check_feasibility(&Params::new(n, h, lam, r))
        .map(PyFeasibilityReport)
        .map_err(to_py)
}

/// Builds a factorization. `check` is `"full"`, `"final"`, `"off"`, or
/// `None` for the size-based default.
#[pyfunction]
#[pyo3(signature = (n, h, lam, r, seed = 0, check = None))]
fn construct(
    py: Python<'_>,
    n: usize,
    h: usize,
    lam: usize,
    r: Vec<usize>,
    seed: u64,
    check: Option<&str>,
) -> PyResult<PyFactorization> {
    let params = Params::new(n, h, lam, r);
    let mode = match check {
        None => CheckMode::default_for(&params),
        Some("full") => CheckMode::Full,
        Some("final") => CheckMode::Final,
        Some("off") => CheckMode::Off,
        Some(other) => {
            return Err(PyValueError::new_err(format!(
                "unknown check mode {other:?}"
            )))
        }
    };
    py.detach(|| core::construct_checked(&params, seed, mode))
        .map(|c| PyFactorization(c.factorization))
        .map_err(to_py)
}

#[pyfunction]
fn verify(f: &PyFactorization) -> PyVerificationReport {
    f.verify()
}

/// Exhaustive search. Returns a factorization, or `None` when none exists;
/// raises if the instance is over the size guard or the time runs out.
#[pyfunction]
#[pyo3(signature = (n, h, lam, r, require_connected = true, time_limit = 120.0))]
fn brute_force_factorize(
    py: Python<'_>,
    n: usize,
    h: usize,
    lam: usize,
    r: Vec<usize>,
    require_connected: bool,
    time_limit: f64,
) -> PyResult<Option<PyFactorization>> {
    let params = Params::new(n, h, lam, r);
    let budget = SearchBudget {
        time_limit: Duration::try_from_secs_f64(time_limit)
            .map_err(|e| PyValueError::new_err(e.to_string()))?,
        ..SearchBudget::default()
    };
    let outcome = py
        .detach(|| core::brute_force_factorize(&params, require_connected, budget))
        .map_err(to_py)?;
    match outcome {
        OracleOutcome::Found(f) => Ok(Some(PyFactorization(f))),
        OracleOutcome::None => Ok(None),
        OracleOutcome::Unknown(Unknown::TooLarge) => {
            Err(PyValueError::new_err("instance too large for oracle"))
        }
        OracleOutcome::Unknown(Unknown::BudgetExhausted) => {
            Err(PyRuntimeError::new_err("search budget exhausted"))
        }
    }
}

/// `C(n, k)`, zero for `k < 0` or `k > n`.
#[pyfunction]
fn binom(n: u64, k: i64) -> BigUint {
    core::binom(n, k)
}

#[pymodule]
#[pyo3(name = "hyperfactor")]
fn hyperfactor_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFactorization>()?;
    m.add_class::<PyFeasibilityReport>()?;
    m.add_class::<PyVerificationReport>()?;
    m.add_function(wrap_pyfunction!(check_feasibility, m)?)?;
    m.add_function(wrap_pyfunction!(construct, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_factorize, m)?)?;
    m.add_function(wrap_pyfunction!(binom, m)?)?;
    Ok(())
}
