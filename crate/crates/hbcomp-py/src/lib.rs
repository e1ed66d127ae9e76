//! Python surface of the toolkit: rational functions, the mate
//! construction, space decomposition, and the full analysis pipeline.
//!
//! Coefficients cross the boundary as ascending lists of Python numbers
//! (int, float or complex); reports come back as plain dicts sharing the
//! CLI's JSON wire format.

use hbcomp::hbspace;
use hbcomp::mate::{mate_from_a as core_mate_from_a, pythagorean_mate, MateData};
use hbcomp::polyrat::{CPoly, RatFunc, C64};
use hbcomp::report::{self, Options, ProblemSpec};
use hbcomp::scan::{self, HsOutcome};
use hbcomp::symbol::profile;
use hbcomp::tol::Tol;
use hbcomp::weight::build_u;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use std::collections::BTreeMap;

/// Validation failures become `ValueError`, internal numerical failures
/// `RuntimeError` — the same split the CLI encodes in its exit codes.
fn to_py_err(e: hbcomp::Error) -> PyErr {
    use hbcomp::Error;
    match e {
        Error::InvalidInput { .. }
        | Error::IsInner
        | Error::NotASelfMap { .. }
        | Error::NotInHardy { .. }
        | Error::NotOuter { .. }
        | Error::NormExceeded { .. }
        | Error::NotInHb { .. }
        | Error::WrongSpace { .. } => PyValueError::new_err(e.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

/// Rational function in ascending-coefficient form.
#[pyclass(frozen, skip_from_py_object, name = "RatFunc", module = "hbcomp_py")]
#[derive(Clone)]
struct PyRatFunc {
    inner: RatFunc,
}

#[pymethods]
impl PyRatFunc {
    /// `RatFunc(num, den=[1])` with ascending coefficient lists.
    #[new]
    #[pyo3(signature = (num, den = None))]
    fn new(num: Vec<C64>, den: Option<Vec<C64>>) -> PyResult<Self> {
        let den = den.unwrap_or_else(|| vec![C64::new(1.0, 0.0)]);
        let inner =
            RatFunc::new(CPoly::from_coeffs(&num), CPoly::from_coeffs(&den)).map_err(to_py_err)?;
        Ok(PyRatFunc { inner })
    }

    /// Ascending numerator coefficients (after reduction/normalization).
    fn num(&self) -> Vec<C64> {
        self.inner.num().coeffs().to_vec()
    }

    /// Ascending denominator coefficients (after reduction/normalization).
    fn den(&self) -> Vec<C64> {
        self.inner.den().coeffs().to_vec()
    }

    /// Evaluate at a point of the complex plane.
    fn __call__(&self, z: C64) -> C64 {
        self.inner.eval(z)
    }

    fn __repr__(&self) -> String {
        format!("RatFunc({})", self.inner)
    }
}

/// The pair (b, a) with |a|² + |b|² = 1 on the circle and the
/// boundary-zero data of a.
#[pyclass(frozen, name = "Mate", module = "hbcomp_py")]
struct PyMate {
    inner: MateData,
}

#[pymethods]
impl PyMate {
    #[getter]
    fn b(&self) -> PyRatFunc {
        PyRatFunc {
            inner: self.inner.b.clone(),
        }
    }

    #[getter]
    fn a(&self) -> PyRatFunc {
        PyRatFunc {
            inner: self.inner.a.clone(),
        }
    }

    /// Unit-circle zeros of a as (location, multiplicity) pairs.
    #[getter]
    fn boundary_zeros(&self) -> Vec<(C64, usize)> {
        self.inner.zeros()
    }

    /// Total boundary multiplicity N (0 exactly when ‖b‖∞ < 1).
    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn norm_below_one(&self) -> bool {
        self.inner.norm_below_one
    }

    fn __repr__(&self) -> String {
        format!("Mate(b={}, a={})", self.inner.b, self.inner.a)
    }
}

/// Mate of b: the outer a with |a|² + |b|² = 1 on the circle, a(0) > 0.
#[pyfunction]
fn mate(b: &PyRatFunc) -> PyResult<PyMate> {
    let inner = pythagorean_mate(&b.inner, &Tol::default()).map_err(to_py_err)?;
    Ok(PyMate { inner })
}

/// The reverse construction: the outer b with b(0) > 0 recovered from a.
#[pyfunction]
fn mate_from_a(a: &PyRatFunc) -> PyResult<PyMate> {
    let inner = core_mate_from_a(&a.inner, &Tol::default()).map_err(to_py_err)?;
    Ok(PyMate { inner })
}

/// Split f into the polynomial part and the reduced quotient for the space
/// of b: returns (p_f coefficients, f_tilde, squared norm).
#[pyfunction]
fn decompose(f: &PyRatFunc, b: &PyRatFunc) -> PyResult<(Vec<C64>, PyRatFunc, f64)> {
    let tol = Tol::default();
    let m = pythagorean_mate(&b.inner, &tol).map_err(to_py_err)?;
    let d = hbspace::decompose(&f.inner, &m, &tol).map_err(to_py_err)?;
    Ok((
        d.p_f.coeffs().to_vec(),
        PyRatFunc { inner: d.f_tilde },
        d.norm_sq,
    ))
}

fn mate_from_either(
    b: Option<&PyRatFunc>,
    a: Option<&PyRatFunc>,
    tol: &Tol,
) -> PyResult<MateData> {
    match (b, a) {
        (Some(b), None) => pythagorean_mate(&b.inner, tol).map_err(to_py_err),
        (None, Some(a)) => core_mate_from_a(&a.inner, tol).map_err(to_py_err),
        _ => Err(PyValueError::new_err(
            "give exactly one of b= or a=, not both",
        )),
    }
}

/// ∫ |u|²/(1−|φ|²) dm — the squared Hilbert–Schmidt mass — or None when
/// the integral diverges.
#[pyfunction]
#[pyo3(signature = (phi, b = None, a = None))]
fn hs_integral(
    phi: &PyRatFunc,
    b: Option<&PyRatFunc>,
    a: Option<&PyRatFunc>,
) -> PyResult<Option<f64>> {
    let tol = Tol::default();
    let m = mate_from_either(b, a, &tol)?;
    let pr = profile(&phi.inner, &m, &tol).map_err(to_py_err)?;
    let pack = build_u(&pr, &m, &tol).map_err(to_py_err)?;
    match scan::hs_integral(&pack, &pr, &tol).map_err(to_py_err)? {
        HsOutcome::Finite(v) => Ok(Some(v)),
        HsOutcome::DivergentAt(_) => Ok(None),
    }
}

fn spec_from(
    phi: &PyRatFunc,
    b: Option<&PyRatFunc>,
    a: Option<&PyRatFunc>,
    trunc: Option<usize>,
    grid_depth: Option<u32>,
    tol: Option<BTreeMap<String, f64>>,
) -> PyResult<ProblemSpec> {
    let spec = match (b, a) {
        (Some(b), None) => ProblemSpec::from_b(b.inner.clone(), phi.inner.clone()),
        (None, Some(a)) => ProblemSpec::from_a(a.inner.clone(), phi.inner.clone()),
        _ => {
            return Err(PyValueError::new_err(
                "give exactly one of b= or a=, not both",
            ))
        }
    };
    let mut options = Options {
        truncation: trunc,
        ..Options::default()
    };
    if let Some(q) = grid_depth {
        options.grid.q_max = q;
    }
    if let Some(overrides) = tol {
        options.tol_overrides = overrides;
    }
    Ok(spec.with_options(options))
}

/// Run the full pipeline and return the report as nested dicts/lists
/// (the CLI's JSON wire format, parsed).
#[pyfunction]
#[pyo3(signature = (phi, b = None, a = None, trunc = None, grid_depth = None, tol = None))]
fn analyze(
    py: Python<'_>,
    phi: &PyRatFunc,
    b: Option<&PyRatFunc>,
    a: Option<&PyRatFunc>,
    trunc: Option<usize>,
    grid_depth: Option<u32>,
    tol: Option<BTreeMap<String, f64>>,
) -> PyResult<Py<PyAny>> {
    let spec = spec_from(phi, b, a, trunc, grid_depth, tol)?;
    let report = report::run(&spec, &Tol::default()).map_err(to_py_err)?;
    let wire = serde_json::to_string(&report)
        .map_err(|e| PyRuntimeError::new_err(format!("report serialization failed: {e}")))?;
    let parsed = py.import("json")?.call_method1("loads", (wire,))?;
    Ok(parsed.unbind())
}

/// JSON in, JSON out: the exact wire format of `hbcomp analyze`.
#[pyfunction]
fn run_json(spec: &str) -> PyResult<String> {
    let spec: ProblemSpec = serde_json::from_str(spec)
        .map_err(|e| PyValueError::new_err(format!("invalid problem JSON: {e}")))?;
    let report = report::run(&spec, &Tol::default()).map_err(to_py_err)?;
    serde_json::to_string(&report)
        .map_err(|e| PyRuntimeError::new_err(format!("report serialization failed: {e}")))
}

#[pymodule]
fn hbcomp_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRatFunc>()?;
    m.add_class::<PyMate>()?;
    m.add_function(wrap_pyfunction!(mate, m)?)?;
    m.add_function(wrap_pyfunction!(mate_from_a, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(hs_integral, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(run_json, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
