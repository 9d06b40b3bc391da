//! Python bindings: piecewise-power functions, maximal operators, weight
//! constants, weighted Lorentz norms, closed-form bounds, and sweeps.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use weightlab::error::Error;
use weightlab::funcspace::{Interval, PiecewisePower};
use weightlab::lab;
use weightlab::lorentz::{self, LorentzParams};
use weightlab::maximal;
use weightlab::theory;
use weightlab::weights::{self, SearchConfig};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn interval(domain: Option<(f64, f64)>) -> PyResult<Interval> {
    let (lo, hi) = domain.unwrap_or((-1e4, 1e4));
    Interval::new(lo, hi).map_err(err)
}

/// A function that is `c * |x|^a` between consecutive breakpoints.
#[pyclass(name = "PiecewisePower", from_py_object)]
#[derive(Clone)]
struct PyPiecewisePower {
    inner: PiecewisePower,
}

#[pymethods]
impl PyPiecewisePower {
    /// Builds from `(lo, hi, c, a)` tuples; gaps are filled with zeros.
    #[new]
    fn new(pieces: Vec<(f64, f64, f64, f64)>) -> PyResult<Self> {
        let text: String = pieces
            .iter()
            .map(|(lo, hi, c, a)| format!("{lo} {hi} {c} {a}\n"))
            .collect();
        Ok(PyPiecewisePower { inner: PiecewisePower::from_descriptor(&text).map_err(err)? })
    }

    #[staticmethod]
    fn constant(c: f64) -> Self {
        PyPiecewisePower { inner: PiecewisePower::constant(c) }
    }

    #[staticmethod]
    fn pure_power(c: f64, a: f64) -> Self {
        PyPiecewisePower { inner: PiecewisePower::pure_power(c, a) }
    }

    #[staticmethod]
    fn indicator(lo: f64, hi: f64) -> PyResult<Self> {
        Ok(PyPiecewisePower { inner: PiecewisePower::indicator(lo, hi).map_err(err)? })
    }

    #[staticmethod]
    fn from_descriptor(text: &str) -> PyResult<Self> {
        Ok(PyPiecewisePower { inner: PiecewisePower::from_descriptor(text).map_err(err)? })
    }

    fn to_descriptor(&self) -> String {
        self.inner.to_descriptor()
    }

    fn __call__(&self, x: f64) -> f64 {
        self.inner.eval(x)
    }

    fn eval(&self, x: f64) -> f64 {
        self.inner.eval(x)
    }

    fn sup_value(&self) -> f64 {
        self.inner.sup_value()
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.inner.breakpoints().to_vec()
    }

    fn integrate(&self, lo: f64, hi: f64) -> PyResult<f64> {
        self.inner.integrate_extended(lo, hi).map_err(err)
    }

    fn product(&self, other: &PyPiecewisePower) -> Self {
        PyPiecewisePower { inner: self.inner.product(&other.inner) }
    }

    fn power(&self, r: f64) -> PyResult<Self> {
        Ok(PyPiecewisePower { inner: self.inner.power(r).map_err(err)? })
    }

    fn scale_arg(&self, lam: f64) -> Self {
        PyPiecewisePower { inner: self.inner.scale_arg(lam) }
    }

    fn scale_value(&self, c: f64) -> Self {
        PyPiecewisePower { inner: self.inner.scale_value(c) }
    }

    fn superlevel(&self, s: f64) -> Vec<(f64, f64)> {
        self.inner.superlevel(s)
    }

    fn __repr__(&self) -> String {
        format!("PiecewisePower({} pieces)", self.inner.pieces().len())
    }
}

/// Uncentered Hardy-Littlewood maximal function at a point.
#[pyfunction]
#[pyo3(signature = (f, x, domain=None))]
fn maximal_at(f: &PyPiecewisePower, x: f64, domain: Option<(f64, f64)>) -> PyResult<f64> {
    match domain {
        None => maximal::maximal_at(&f.inner, x).map_err(err),
        Some(_) => maximal::maximal_at_in(&f.inner, x, &interval(domain)?).map_err(err),
    }
}

/// Centered maximal function at a point.
#[pyfunction]
#[pyo3(signature = (f, x, domain=None))]
fn maximal_centered_at(
    f: &PyPiecewisePower,
    x: f64,
    domain: Option<(f64, f64)>,
) -> PyResult<f64> {
    match domain {
        None => maximal::maximal_centered_at(&f.inner, x).map_err(err),
        Some(_) => maximal::maximal_centered_at_in(&f.inner, x, &interval(domain)?).map_err(err),
    }
}

/// Dual operator `T f = M(f v) / w` at a point.
#[pyfunction]
fn dual_t_at(
    f: &PyPiecewisePower,
    v: &PyPiecewisePower,
    w: &PyPiecewisePower,
    x: f64,
) -> PyResult<f64> {
    maximal::dual_t_at(&f.inner, &v.inner, &w.inner, x).map_err(err)
}

/// Muckenhoupt A_p constant estimate; returns `(value, argmax_lo, argmax_hi)`.
#[pyfunction]
#[pyo3(signature = (w, p, domain=None, levels=48))]
fn ap_constant(
    w: &PyPiecewisePower,
    p: f64,
    domain: Option<(f64, f64)>,
    levels: u32,
) -> PyResult<(f64, f64, f64)> {
    let cfg = SearchConfig::new(interval(domain)?).with_levels(levels);
    let est = weights::ap_constant(&w.inner, p, &cfg).map_err(err)?;
    Ok((est.value, est.argmax.0, est.argmax.1))
}

/// Fujii-Wilson A_infty constant estimate; returns `(value, argmax_lo, argmax_hi)`.
#[pyfunction]
#[pyo3(signature = (w, domain=None, levels=48))]
fn ainfty_fujii_wilson(
    w: &PyPiecewisePower,
    domain: Option<(f64, f64)>,
    levels: u32,
) -> PyResult<(f64, f64, f64)> {
    let cfg = SearchConfig::new(interval(domain)?).with_levels(levels);
    let est = weights::ainfty_fujii_wilson(&w.inner, &cfg).map_err(err)?;
    Ok((est.value, est.argmax.0, est.argmax.1))
}

/// Weighted Lorentz quasi-norm; `q=inf` gives the weak norm.
#[pyfunction]
fn lorentz_norm(f: &PyPiecewisePower, w: &PyPiecewisePower, p: f64, q: f64) -> PyResult<f64> {
    if q.is_infinite() {
        lorentz::weak_norm(&f.inner, &w.inner, p).map_err(err)
    } else {
        let params = LorentzParams::new(p, q).map_err(err)?;
        lorentz::lorentz_norm(&f.inner, &w.inner, &params).map_err(err)
    }
}

/// Weighted distribution function `w({|f| > s})`.
#[pyfunction]
fn distribution(f: &PyPiecewisePower, w: &PyPiecewisePower, s: f64) -> PyResult<f64> {
    lorentz::distribution(&f.inner, &w.inner, s).map_err(err)
}

#[pyfunction]
fn buckley_bound(p: f64, apc: f64) -> PyResult<f64> {
    theory::buckley_bound(p, apc).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (p, q, apc=1.0, ainfty_sigma=1.0, cn=1.0))]
fn mixed_bound_lorentz(p: f64, q: f64, apc: f64, ainfty_sigma: f64, cn: f64) -> PyResult<f64> {
    let inputs = theory::BoundInputs::new(p, q)
        .map_err(err)?
        .with_apc(apc)
        .with_ainfty_sigma(ainfty_sigma)
        .with_cn(cn);
    theory::mixed_bound_lorentz(&inputs).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (p, q, a1_vw=1.0, a1_w=1.0))]
fn dual_bound(p: f64, q: f64, a1_vw: f64, a1_w: f64) -> PyResult<f64> {
    let inputs = theory::BoundInputs::new(p, q).map_err(err)?.with_a1(a1_vw, a1_w);
    theory::dual_bound(&inputs).map_err(err)
}

/// OLS power-law fit on `(delta, value)` pairs; returns
/// `(slope, intercept, r_squared)`.
#[pyfunction]
fn fit_exponent(points: Vec<(f64, f64)>) -> PyResult<(f64, f64, f64)> {
    lab::fit_exponent(&points).map_err(err)
}

/// Runs a delta-sweep from a JSON config string; returns the JSON report.
#[pyfunction]
fn run_sweep(config_json: &str) -> PyResult<String> {
    let cfg: lab::SweepConfig =
        serde_json::from_str(config_json).map_err(|e| PyValueError::new_err(e.to_string()))?;
    cfg.validate().map_err(err)?;
    let report = lab::run_sweep(&cfg).map_err(err)?;
    serde_json::to_string_pretty(&report).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymodule]
fn weightlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPiecewisePower>()?;
    m.add_function(wrap_pyfunction!(maximal_at, m)?)?;
    m.add_function(wrap_pyfunction!(maximal_centered_at, m)?)?;
    m.add_function(wrap_pyfunction!(dual_t_at, m)?)?;
    m.add_function(wrap_pyfunction!(ap_constant, m)?)?;
    m.add_function(wrap_pyfunction!(ainfty_fujii_wilson, m)?)?;
    m.add_function(wrap_pyfunction!(lorentz_norm, m)?)?;
    m.add_function(wrap_pyfunction!(distribution, m)?)?;
    m.add_function(wrap_pyfunction!(buckley_bound, m)?)?;
    m.add_function(wrap_pyfunction!(mixed_bound_lorentz, m)?)?;
    m.add_function(wrap_pyfunction!(dual_bound, m)?)?;
    m.add_function(wrap_pyfunction!(fit_exponent, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    Ok(())
}
