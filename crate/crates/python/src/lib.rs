//! Python bindings. Exact values come back as `fractions.Fraction` and are
//! accepted as `Fraction`, `int` or `"p/q"` strings; floats are refused.

use arcsine_fock::scalar::to_f64;
use arcsine_fock::selfcheck::{self, Options};
use arcsine_fock::spectral::{default_dimension, SymTridiagonal};
use arcsine_fock::{self as core, Engine, Error, ExactScalar, NumberState, ScaleRule};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyFloat, PyList};

fn to_py_err(e: Error) -> PyErr {
    if e.is_cap() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn exact(obj: &Bound<'_, PyAny>) -> PyResult<ExactScalar> {
    if obj.is_instance_of::<PyFloat>() {
        return Err(PyValueError::new_err(
            "floats are not exact; pass a Fraction, an int or a 'p/q' string",
        ));
    }
    let text: String = obj.str()?.extract()?;
    core::parse_exact(&text).map_err(to_py_err)
}

fn fraction<'py>(py: Python<'py>, x: &ExactScalar) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((x.numer().clone(), x.denom().clone()))
}

fn scale_rule(obj: Option<&Bound<'_, PyAny>>) -> PyResult<ScaleRule> {
    match obj {
        None => Ok(ScaleRule::Canonical),
        Some(o) if o.extract::<String>().is_ok_and(|s| s == "canonical") => {
            Ok(ScaleRule::Canonical)
        }
        Some(o) => Ok(ScaleRule::Fixed(exact(o)?)),
    }
}

/// Squared ladder coefficients: `JacobiSequence("standard")`,
/// `JacobiSequence("q=1/2")` or the JSON object form.
#[pyclass(name = "JacobiSequence", frozen, from_py_object)]
#[derive(Clone)]
struct PyJacobi {
    inner: core::JacobiSequence,
}

#[pymethods]
impl PyJacobi {
    #[new]
    #[pyo3(signature = (spec = "standard"))]
    fn new(spec: &str) -> PyResult<Self> {
        let inner = core::JacobiSequence::parse(spec).map_err(to_py_err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn standard() -> Self {
        Self {
            inner: core::JacobiSequence::standard(),
        }
    }

    #[staticmethod]
    fn q_deformed(q: &Bound<'_, PyAny>) -> PyResult<Self> {
        let inner = core::JacobiSequence::q_deformed(exact(q)?).map_err(to_py_err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn explicit(omega: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        let w = omega.iter().map(exact).collect::<PyResult<Vec<_>>>()?;
        let inner = core::JacobiSequence::explicit(w).map_err(to_py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn is_standard(&self) -> bool {
        self.inner.is_standard()
    }

    /// `omega(n)` for `n >= 1`.
    fn weight<'py>(&self, py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.inner.weight(n).map_err(to_py_err)?)
    }

    fn canonical_scale<'py>(&self, py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyAny>> {
        let s = self
            .inner
            .canonical_scale(NumberState::new(n))
            .map_err(to_py_err)?;
        fraction(py, &s)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("JacobiSequence('{}')", self.inner.to_json())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

#[pyfunction]
fn q_integer<'py>(py: Python<'py>, n: usize, q: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &core::q_integer(n, &exact(q)?).map_err(to_py_err)?)
}

/// `phi_N((X / sqrt(s))^order)`; `scale` defaults to the canonical rule.
#[pyfunction]
#[pyo3(signature = (seq, n, order, scale = None, engine = "tridiagonal"))]
fn moment<'py>(
    py: Python<'py>,
    seq: &PyJacobi,
    n: usize,
    order: usize,
    scale: Option<&Bound<'py, PyAny>>,
    engine: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let engine: Engine = engine.parse().map_err(to_py_err)?;
    let state = NumberState::new(n);
    let s = scale_rule(scale)?
        .resolve(&seq.inner, state)
        .map_err(to_py_err)?;
    let v = core::scaled_moment(engine, &seq.inner, state, order, &s).map_err(to_py_err)?;
    fraction(py, &v)
}

/// Scaled moments of orders `0..=max_order`.
#[pyfunction]
#[pyo3(signature = (seq, n, max_order, scale = None))]
fn moments<'py>(
    py: Python<'py>,
    seq: &PyJacobi,
    n: usize,
    max_order: usize,
    scale: Option<&Bound<'py, PyAny>>,
) -> PyResult<Vec<Bound<'py, PyAny>>> {
    let state = NumberState::new(n);
    let s = scale_rule(scale)?
        .resolve(&seq.inner, state)
        .map_err(to_py_err)?;
    let m = core::MomentSequence::compute(&seq.inner, state, &s, max_order).map_err(to_py_err)?;
    m.values.iter().map(|v| fraction(py, v)).collect()
}

/// `(lower, upper)` bounds on the standard scaled moment with `s = N`.
#[pyfunction]
fn moment_envelope<'py>(
    py: Python<'py>,
    n: usize,
    order: usize,
) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyAny>)> {
    let e = core::moment_envelope(n, order).map_err(to_py_err)?;
    Ok((fraction(py, &e.lower)?, fraction(py, &e.upper)?))
}

/// Rows as dicts with keys `N, order, scale, scaled_moment, target,
/// abs_diff, envelope` (a `(lower, upper)` tuple or `None`).
#[pyfunction]
#[pyo3(signature = (seq, states, orders, scale = None))]
fn convergence_table<'py>(
    py: Python<'py>,
    seq: &PyJacobi,
    states: Vec<usize>,
    orders: Vec<usize>,
    scale: Option<&Bound<'py, PyAny>>,
) -> PyResult<Bound<'py, PyList>> {
    let rows = core::convergence_table(&seq.inner, &states, &orders, &scale_rule(scale)?)
        .map_err(to_py_err)?;
    let out = PyList::empty(py);
    for r in rows {
        let d = PyDict::new(py);
        d.set_item("N", r.state)?;
        d.set_item("order", r.order)?;
        d.set_item("scale", fraction(py, &r.scale)?)?;
        d.set_item("scaled_moment", fraction(py, &r.scaled_moment)?)?;
        d.set_item("target", fraction(py, &r.target)?)?;
        d.set_item("abs_diff", fraction(py, &r.abs_diff)?)?;
        match &r.envelope {
            Some(e) => d.set_item(
                "envelope",
                (fraction(py, &e.lower)?, fraction(py, &e.upper)?),
            )?,
            None => d.set_item("envelope", py.None())?,
        }
        out.append(d)?;
    }
    Ok(out)
}

#[pyfunction]
fn arcsine_moment(py: Python<'_>, order: usize) -> PyResult<Bound<'_, PyAny>> {
    fraction(py, &core::arcsine_moment(order))
}

#[pyfunction]
fn arcsine_cdf(x: f64) -> f64 {
    core::arcsine_cdf(x)
}

#[pyfunction]
fn arcsine_density(x: f64) -> f64 {
    core::arcsine_density(x)
}

#[pyfunction]
fn vacuum_gaussian_moment(py: Python<'_>, order: usize) -> PyResult<Bound<'_, PyAny>> {
    fraction(py, &core::vacuum_gaussian_moment(order))
}

/// Time-averaged `(A sin t)^order` for the squared amplitude `a2`.
#[pyfunction]
fn classical_moment<'py>(
    py: Python<'py>,
    a2: &Bound<'py, PyAny>,
    order: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let osc = core::ClassicalOscillator::new(exact(a2)?).map_err(to_py_err)?;
    fraction(py, &osc.moment(order))
}

#[pyfunction]
#[pyo3(signature = (amplitude, order, panels = 256))]
fn classical_moment_quadrature(amplitude: f64, order: usize, panels: usize) -> f64 {
    core::classical_moment_quadrature(amplitude, order, panels)
}

/// Exact Hankel positivity of `m_0, m_1, ...`.
#[pyfunction]
fn validate_moments(values: Vec<Bound<'_, PyAny>>) -> PyResult<bool> {
    let v = values.iter().map(exact).collect::<PyResult<Vec<_>>>()?;
    Ok(core::validate_moments(&v))
}

/// Spectral measure of `Phi_N` as `(location, weight)` pairs. `k` defaults
/// to `2N + 64`.
#[pyfunction]
#[pyo3(signature = (seq, n, k = None, scale = None))]
fn reconstruct(
    seq: &PyJacobi,
    n: usize,
    k: Option<usize>,
    scale: Option<&Bound<'_, PyAny>>,
) -> PyResult<Vec<(f64, f64)>> {
    let state = NumberState::new(n);
    let s = scale_rule(scale)?
        .resolve(&seq.inner, state)
        .map_err(to_py_err)?;
    let k = k.unwrap_or_else(|| default_dimension(state));
    let m = core::reconstruct_state_measure(&seq.inner, state, k, &s).map_err(to_py_err)?;
    Ok(m.atoms().to_vec())
}

#[pyfunction]
fn ks_distance_to_arcsine(atoms: Vec<(f64, f64)>) -> PyResult<f64> {
    let m = core::DiscreteMeasure::new(atoms).map_err(to_py_err)?;
    Ok(core::ks_distance_to_arcsine(&m))
}

#[pyfunction]
fn hermite_state_density(n: usize, x: f64) -> f64 {
    core::hermite_state_density(n, x)
}

/// Eigenvalues (ascending) and the matching eigenvector components at `row`.
#[pyfunction]
fn eigendecompose(
    diagonal: Vec<f64>,
    off_diagonal: Vec<f64>,
    row: usize,
) -> PyResult<(Vec<f64>, Vec<f64>)> {
    if off_diagonal.len() + 1 != diagonal.len().max(1) {
        return Err(PyValueError::new_err(
            "off_diagonal must be one shorter than diagonal",
        ));
    }
    let t = SymTridiagonal::new(diagonal, off_diagonal);
    let s = core::eigendecompose(&t, row).map_err(to_py_err)?;
    Ok((s.eigenvalues, s.components))
}

/// `(suite, passed, cases, counterexample)`.
type SuiteRow = (String, bool, usize, Option<String>);

/// Runs the oracle suite, one row per suite.
#[pyfunction]
#[pyo3(signature = (fast = true))]
fn run_selfcheck(fast: bool) -> PyResult<Vec<SuiteRow>> {
    let reports = selfcheck::run(&Options {
        fast,
        inject_fault: None,
    })
    .map_err(to_py_err)?;
    Ok(reports
        .into_iter()
        .map(|r| {
            (
                r.suite.name().to_string(),
                r.passed(),
                r.cases,
                r.counterexample,
            )
        })
        .collect())
}

/// Float view of an exact value, for plotting.
#[pyfunction]
fn as_float(x: &Bound<'_, PyAny>) -> PyResult<f64> {
    Ok(to_f64(&exact(x)?))
}

#[pymodule]
fn arcsine_fock_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyJacobi>()?;
    m.add_function(wrap_pyfunction!(q_integer, m)?)?;
    m.add_function(wrap_pyfunction!(moment, m)?)?;
    m.add_function(wrap_pyfunction!(moments, m)?)?;
    m.add_function(wrap_pyfunction!(moment_envelope, m)?)?;
    m.add_function(wrap_pyfunction!(convergence_table, m)?)?;
    m.add_function(wrap_pyfunction!(arcsine_moment, m)?)?;
    m.add_function(wrap_pyfunction!(arcsine_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(arcsine_density, m)?)?;
    m.add_function(wrap_pyfunction!(vacuum_gaussian_moment, m)?)?;
    m.add_function(wrap_pyfunction!(classical_moment, m)?)?;
    m.add_function(wrap_pyfunction!(classical_moment_quadrature, m)?)?;
    m.add_function(wrap_pyfunction!(validate_moments, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct, m)?)?;
    m.add_function(wrap_pyfunction!(ks_distance_to_arcsine, m)?)?;
    m.add_function(wrap_pyfunction!(hermite_state_density, m)?)?;
    m.add_function(wrap_pyfunction!(eigendecompose, m)?)?;
    m.add_function(wrap_pyfunction!(run_selfcheck, m)?)?;
    m.add_function(wrap_pyfunction!(as_float, m)?)?;
    Ok(())
}
