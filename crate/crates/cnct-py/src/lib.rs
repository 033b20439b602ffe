//! Python bindings: special-function evaluators, the distribution family,
//! and the identity-verification harness. Scalar results come back as
//! `float`; high-precision values are returned as decimal strings.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use cnct::bailey;
use cnct::distributions::LerchDistribution as CoreDistribution;
use cnct::error::Error;
use cnct::lerch;
use cnct::numerics::PrecisionContext;
use cnct::real::{BigReal, Real};

fn pyerr(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn ctx(acc: u32) -> PyResult<PrecisionContext> {
    PrecisionContext::new(acc).map_err(pyerr)
}

/// Lerch transcendent Phi(z, s, v).
#[pyfunction]
#[pyo3(signature = (z, s, v, acc = 13))]
fn lerch_phi(z: f64, s: f64, v: f64, acc: u32) -> PyResult<f64> {
    let p = lerch::LerchParams::new(z, s, v).map_err(pyerr)?;
    lerch::lerch_phi(&p, &ctx(acc)?).map_err(pyerr)
}

/// Lerch transcendent at arbitrary precision; returns a decimal string.
#[pyfunction]
#[pyo3(signature = (z, s, v, digits = 30))]
fn lerch_phi_str(z: &str, s: &str, v: &str, digits: u32) -> PyResult<String> {
    let working = digits + 10;
    let c = PrecisionContext::with_options(digits, working, (3 * digits).max(100), 1.0, 0)
        .map_err(pyerr)?;
    let parse = |t: &str| BigReal::from_decimal(t, working).map_err(pyerr);
    let p = lerch::LerchParams::new(parse(z)?, parse(s)?, parse(v)?).map_err(pyerr)?;
    Ok(lerch::lerch_phi(&p, &c).map_err(pyerr)?.to_decimal(digits as usize))
}

/// Riemann zeta function for s > 1.
#[pyfunction]
#[pyo3(signature = (s, acc = 13))]
fn riemann_zeta(s: f64, acc: u32) -> PyResult<f64> {
    lerch::riemann_zeta(s, &ctx(acc)?).map_err(pyerr)
}

/// Hurwitz zeta function for s > 1.
#[pyfunction]
#[pyo3(signature = (s, v, acc = 13))]
fn hurwitz_zeta(s: f64, v: f64, acc: u32) -> PyResult<f64> {
    lerch::hurwitz_zeta(s, v, &ctx(acc)?).map_err(pyerr)
}

/// Jonquiere's function (polylogarithm) for |z| < 1.
#[pyfunction]
#[pyo3(signature = (z, s, acc = 13))]
fn jonquiere(z: f64, s: f64, acc: u32) -> PyResult<f64> {
    lerch::jonquiere(z, s, &ctx(acc)?).map_err(pyerr)
}

/// log10 of the naive term count needed for the identity sum at `digits`.
#[pyfunction]
fn naive_term_count(digits: u32) -> f64 {
    bailey::naive_term_count(digits)
}

/// Verify the digamma-series identity; returns a dict of the report fields.
#[pyfunction]
fn verify_identity(py: Python<'_>, digits: u32) -> PyResult<Py<PyDict>> {
    let report = bailey::verify(digits).map_err(pyerr)?;
    let sig = digits as usize + 2;
    let d = PyDict::new(py);
    d.set_item("digits_requested", report.digits_requested)?;
    d.set_item("lhs", report.lhs.to_decimal(sig))?;
    d.set_item("rhs", report.rhs.to_decimal(sig))?;
    d.set_item("matching_digits", report.matching_digits)?;
    d.set_item("order_used", report.order_used)?;
    d.set_item("terms_evaluated", report.terms_evaluated)?;
    d.set_item("digits_per_order", report.digits_per_order)?;
    d.set_item("elapsed_seconds", report.elapsed_seconds)?;
    Ok(d.into())
}

/// A member of the Lerch family of discrete distributions.
#[pyclass(name = "LerchDistribution")]
struct PyLerchDistribution {
    inner: CoreDistribution<f64>,
}

#[pymethods]
impl PyLerchDistribution {
    /// Construct by family name: zipf(s), zipf_mandelbrot(s, v), good(z, s),
    /// lerch(z, s, v).
    #[new]
    #[pyo3(signature = (family, s, z = None, v = None, acc = 13))]
    fn new(family: &str, s: f64, z: Option<f64>, v: Option<f64>, acc: u32) -> PyResult<Self> {
        let c = ctx(acc)?;
        let need = |o: Option<f64>, name: &str| {
            o.ok_or_else(|| PyValueError::new_err(format!("family `{family}` requires `{name}`")))
        };
        let inner = match family {
            "zipf" => CoreDistribution::zipf(s, &c),
            "zipf-mandelbrot" => CoreDistribution::zipf_mandelbrot(s, need(v, "v")?, &c),
            "good" => CoreDistribution::good(need(z, "z")?, s, &c),
            "lerch" => CoreDistribution::lerch(need(z, "z")?, s, need(v, "v")?, &c),
            other => {
                return Err(PyValueError::new_err(format!(
                    "unknown family `{other}`; expected zipf, zipf-mandelbrot, good, or lerch"
                )))
            }
        }
        .map_err(pyerr)?;
        Ok(PyLerchDistribution { inner })
    }

    /// Restrict support to [a, b]; b=None keeps the support unbounded.
    #[pyo3(signature = (a, b = None))]
    fn truncated(&self, a: u64, b: Option<u64>) -> PyResult<Self> {
        Ok(PyLerchDistribution {
            inner: self.inner.truncated(a, b).map_err(pyerr)?,
        })
    }

    fn pmf(&self, n: u64) -> PyResult<f64> {
        self.inner.pmf(n).map_err(pyerr)
    }

    fn cdf(&self, n: u64) -> PyResult<f64> {
        self.inner.cdf(n).map_err(pyerr)
    }

    fn survival(&self, n: u64) -> PyResult<f64> {
        self.inner.survival(n).map_err(pyerr)
    }

    fn hazard(&self, n: u64) -> PyResult<f64> {
        self.inner.hazard(n).map_err(pyerr)
    }

    fn pgf(&self, y: f64) -> PyResult<f64> {
        self.inner.pgf(&y).map_err(pyerr)
    }

    fn mean(&self) -> PyResult<f64> {
        self.inner.mean().map_err(pyerr)
    }

    fn variance(&self) -> PyResult<f64> {
        self.inner.variance().map_err(pyerr)
    }

    /// First support point.
    #[getter]
    fn support_start(&self) -> u64 {
        self.inner.lo()
    }

    fn __repr__(&self) -> String {
        format!("LerchDistribution(family='{}')", self.inner.family().name())
    }
}

#[pymodule]
fn cnct_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(lerch_phi, m)?)?;
    m.add_function(wrap_pyfunction!(lerch_phi_str, m)?)?;
    m.add_function(wrap_pyfunction!(riemann_zeta, m)?)?;
    m.add_function(wrap_pyfunction!(hurwitz_zeta, m)?)?;
    m.add_function(wrap_pyfunction!(jonquiere, m)?)?;
    m.add_function(wrap_pyfunction!(naive_term_count, m)?)?;
    m.add_function(wrap_pyfunction!(verify_identity, m)?)?;
    m.add_class::<PyLerchDistribution>()?;
    Ok(())
}
