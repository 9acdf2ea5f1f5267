//! Python bindings. Exact values cross the boundary as `p/q` strings, and
//! structured reports as the same dictionaries the CLI prints as JSON.

use num_bigint::BigInt;
use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use oresme_core::algebra::rational::{format_rational, parse_rational};
use oresme_core::identities::{self, Profile, Sweep};
use oresme_core::{analytic, bench, dsl, seq, LaurentPoly, Rational};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rational(s: &str) -> PyResult<Rational> {
    parse_rational(s).map_err(|e| value_error(format!("`{s}`: {e}")))
}

/// Converts a serializable report into plain Python objects.
fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(value_error)?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn sweep_of(ranges: Option<Vec<String>>) -> PyResult<Sweep> {
    let mut sweep = Sweep::default();
    for r in ranges.unwrap_or_default() {
        sweep = sweep.with_range(identities::parse_range(&r).map_err(value_error)?);
    }
    Ok(sweep)
}

/// Laurent polynomial in `x` with rational coefficients.
#[pyclass(name = "LaurentPoly", module = "oresme", frozen)]
struct PyLaurentPoly {
    inner: LaurentPoly,
}

#[pymethods]
impl PyLaurentPoly {
    /// Builds from `(exponent, "p/q")` pairs.
    #[new]
    #[pyo3(signature = (terms = Vec::new()))]
    fn new(terms: Vec<(i64, String)>) -> PyResult<Self> {
        let mut parsed = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            parsed.push((e, rational(&c)?));
        }
        Ok(Self {
            inner: LaurentPoly::from_terms(parsed),
        })
    }

    /// `(exponent, "p/q")` pairs, highest exponent first.
    fn terms(&self) -> Vec<(i64, String)> {
        self.inner.terms().map(|(e, c)| (e, format_rational(c))).collect()
    }

    fn derivative(&self) -> Self {
        Self {
            inner: self.inner.derivative(),
        }
    }

    /// Exact value at the rational `x`, as `p/q`.
    fn eval(&self, x: &str) -> PyResult<String> {
        let v = self.inner.eval_exact(&rational(x)?).map_err(value_error)?;
        Ok(format_rational(&v))
    }

    fn eval_float(&self, x: f64) -> PyResult<f64> {
        self.inner.eval_f64(x).map_err(value_error)
    }

    /// Single-fraction rendering such as `(x^2 - 1)/x^3`.
    fn to_fraction(&self) -> String {
        self.inner.to_fraction_string()
    }

    fn __add__(&self, other: &Self) -> Self {
        Self {
            inner: &self.inner + &other.inner,
        }
    }

    fn __sub__(&self, other: &Self) -> Self {
        Self {
            inner: &self.inner - &other.inner,
        }
    }

    fn __mul__(&self, other: &Self) -> Self {
        Self {
            inner: &self.inner * &other.inner,
        }
    }

    fn __neg__(&self) -> Self {
        Self {
            inner: -&self.inner,
        }
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("LaurentPoly({})", self.inner)
    }
}

/// `O_n(x)` for any integer `n`.
#[pyfunction]
fn oresme_poly(n: i64) -> PyLaurentPoly {
    PyLaurentPoly {
        inner: seq::oresme_at(n),
    }
}

/// `O_n'(x)` for any integer `n`.
#[pyfunction]
fn oresme_derivative(n: i64) -> PyLaurentPoly {
    PyLaurentPoly {
        inner: seq::oresme_derivative_poly(n),
    }
}

/// `O_n(k)` exactly, as `p/q`.
#[pyfunction]
fn oresme_eval(n: i64, k: &str) -> PyResult<String> {
    let v = seq::oresme_eval(n, &rational(k)?).map_err(value_error)?;
    Ok(format_rational(&v))
}

/// `O_n(x)` by one strategy: `recurrence`, `matrix`, `closed` or `binet`.
/// Returns `p/q` for exact strategies and a float for `binet`.
#[pyfunction]
fn evaluate(py: Python<'_>, strategy: &str, n: i64, x: &str) -> PyResult<Py<PyAny>> {
    let s: bench::Strategy = strategy.parse().map_err(value_error)?;
    match bench::evaluate(s, n, &rational(x)?).map_err(value_error)? {
        bench::StrategyValue::Exact(r) => Ok(format_rational(&r).into_pyobject(py)?.into_any().unbind()),
        bench::StrategyValue::Float(v) => Ok(v.into_pyobject(py)?.into_any().unbind()),
    }
}

#[pyfunction]
fn fibonacci(n: u64) -> BigInt {
    seq::fibonacci(n)
}

/// `(index, fraction)` rows for `lo ≤ n ≤ hi`.
#[pyfunction]
#[pyo3(signature = (lo, hi, derivative = false))]
fn table(lo: i64, hi: i64, derivative: bool) -> Vec<(i64, String)> {
    seq::SequenceTable::build(lo, hi, seq::Provenance::Recurrence, derivative)
        .entries
        .iter()
        .map(|e| (e.index, e.poly.to_fraction_string()))
        .collect()
}

#[pyfunction]
fn catalog_ids() -> Vec<&'static str> {
    identities::catalog().iter().map(|e| e.id).collect()
}

fn profile(name: &str) -> PyResult<Profile> {
    match name {
        "quick" => Ok(Profile::Quick),
        "full" => Ok(Profile::Full),
        _ => Err(value_error(format!("unknown profile `{name}` (quick, full)"))),
    }
}

/// Checks one catalog identity; `ranges` like `["n=1..40"]` override the profile sweep.
#[pyfunction]
#[pyo3(signature = (id, ranges = None, profile = "quick"))]
fn check_identity(py: Python<'_>, id: &str, ranges: Option<Vec<String>>, profile: &str) -> PyResult<Py<PyAny>> {
    let entry = identities::lookup(id).map_err(|e| PyKeyError::new_err(e.to_string()))?;
    let mut sweep = entry.default_sweep(self::profile(profile)?);
    for r in sweep_of(ranges)?.ranges {
        sweep = sweep.with_range(r);
    }
    let report = identities::check_identity(id, &sweep).map_err(value_error)?;
    to_py(py, &report)
}

#[pyfunction]
#[pyo3(signature = (profile = "quick"))]
fn run_catalog(py: Python<'_>, profile: &str) -> PyResult<Py<PyAny>> {
    to_py(py, &identities::run_catalog(self::profile(profile)?))
}

#[pyfunction]
fn lambda_roots(x: f64) -> PyResult<(f64, f64)> {
    let r = analytic::lambda_roots(x).map_err(value_error)?;
    Ok((r.lambda1, r.lambda2))
}

#[pyfunction]
fn binet(n: i64, x: f64) -> PyResult<f64> {
    analytic::binet_float(n, x).map_err(value_error)
}

#[pyfunction]
fn ratio_limit_probe(py: Python<'_>, x: f64, steps: u64) -> PyResult<Py<PyAny>> {
    to_py(py, &analytic::ratio_limit_probe(x, steps).map_err(value_error)?)
}

#[pyfunction]
#[pyo3(signature = (n, tol = 1e-8))]
fn product_reconstruct(py: Python<'_>, n: u64, tol: f64) -> PyResult<Py<PyAny>> {
    if n < 1 {
        return Err(value_error("n must be at least 1"));
    }
    to_py(py, &analytic::product_reconstruct(n, tol))
}

/// Parses one DSL identity and returns its canonical rendering.
/// Syntax errors raise `ValueError` with `line:column: message`.
#[pyfunction]
fn dsl_parse(source: &str) -> PyResult<String> {
    dsl::parse(source)
        .map(|ast| ast.to_string())
        .map_err(|e| value_error(format!("{}:{}: {}", e.line, e.column, e.message)))
}

/// Parses and checks one DSL identity over its declared ranges.
#[pyfunction]
#[pyo3(signature = (source, name = "dsl"))]
fn dsl_check(py: Python<'_>, source: &str, name: &str) -> PyResult<Py<PyAny>> {
    let ast = dsl::parse(source).map_err(|e| value_error(format!("{}:{}: {}", e.line, e.column, e.message)))?;
    let report =
        dsl::check_ast_with(name, &ast, &Sweep::default(), dsl::expectation_for(name)).map_err(value_error)?;
    to_py(py, &report)
}

/// The corpus file bundled with the library.
#[pyfunction]
fn shipped_corpus() -> &'static str {
    dsl::SHIPPED_CORPUS
}

#[pymodule]
fn oresme(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLaurentPoly>()?;
    m.add_function(wrap_pyfunction!(oresme_poly, m)?)?;
    m.add_function(wrap_pyfunction!(oresme_derivative, m)?)?;
    m.add_function(wrap_pyfunction!(oresme_eval, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(fibonacci, m)?)?;
    m.add_function(wrap_pyfunction!(table, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_ids, m)?)?;
    m.add_function(wrap_pyfunction!(check_identity, m)?)?;
    m.add_function(wrap_pyfunction!(run_catalog, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_roots, m)?)?;
    m.add_function(wrap_pyfunction!(binet, m)?)?;
    m.add_function(wrap_pyfunction!(ratio_limit_probe, m)?)?;
    m.add_function(wrap_pyfunction!(product_reconstruct, m)?)?;
    m.add_function(wrap_pyfunction!(dsl_parse, m)?)?;
    m.add_function(wrap_pyfunction!(dsl_check, m)?)?;
    m.add_function(wrap_pyfunction!(shipped_corpus, m)?)?;
    Ok(())
}
