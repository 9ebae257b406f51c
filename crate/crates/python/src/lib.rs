//! Python bindings for the `jacobi_barrier` pricer.

use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use ::jacobi_barrier as jb;

fn to_py(e: jb::Error) -> PyErr {
    if e.is_validation() {
        PyValueError::new_err(e.to_string())
    } else {
        PyArithmeticError::new_err(e.to_string())
    }
}

/// Discretely monitored double barrier knock-out call.
#[pyclass(module = "jacobi_barrier", from_py_object)]
#[derive(Clone, Copy)]
pub struct OptionContract {
    inner: jb::OptionContract,
}

#[pymethods]
impl OptionContract {
    #[new]
    #[pyo3(signature = (spot, strike, lower, upper, rate, vol, expiry, dates))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        spot: f64,
        strike: f64,
        lower: f64,
        upper: f64,
        rate: f64,
        vol: f64,
        expiry: f64,
        dates: usize,
    ) -> PyResult<Self> {
        let inner = jb::OptionContract { spot, strike, lower, upper, rate, vol, expiry, dates };
        inner.validate().map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn spot(&self) -> f64 {
        self.inner.spot
    }
    #[getter]
    fn strike(&self) -> f64 {
        self.inner.strike
    }
    #[getter]
    fn lower(&self) -> f64 {
        self.inner.lower
    }
    #[getter]
    fn upper(&self) -> f64 {
        self.inner.upper
    }
    #[getter]
    fn rate(&self) -> f64 {
        self.inner.rate
    }
    #[getter]
    fn vol(&self) -> f64 {
        self.inner.vol
    }
    #[getter]
    fn expiry(&self) -> f64 {
        self.inner.expiry
    }
    #[getter]
    fn dates(&self) -> usize {
        self.inner.dates
    }

    /// Copy with a different spot.
    fn with_spot(&self, spot: f64) -> PyResult<Self> {
        let inner = self.inner.with_spot(spot);
        inner.validate().map_err(to_py)?;
        Ok(Self { inner })
    }

    fn __repr__(&self) -> String {
        let c = &self.inner;
        format!(
            "OptionContract(spot={}, strike={}, lower={}, upper={}, rate={}, vol={}, expiry={}, dates={})",
            c.spot, c.strike, c.lower, c.upper, c.rate, c.vol, c.expiry, c.dates
        )
    }
}

#[pyclass(module = "jacobi_barrier", frozen)]
pub struct PriceResult {
    #[pyo3(get)]
    price: f64,
    #[pyo3(get)]
    spot: f64,
    #[pyo3(get)]
    nodes: usize,
    #[pyo3(get)]
    dates: usize,
    #[pyo3(get)]
    upper: f64,
    #[pyo3(get)]
    z0: f64,
    #[pyo3(get)]
    theta: f64,
    timings: jb::PhaseTimings,
}

impl From<jb::PriceResult> for PriceResult {
    fn from(r: jb::PriceResult) -> Self {
        Self {
            price: r.price,
            spot: r.spot,
            nodes: r.nodes,
            dates: r.dates,
            upper: r.upper,
            z0: r.z0,
            theta: r.theta,
            timings: r.timings,
        }
    }
}

#[pymethods]
impl PriceResult {
    /// Seconds spent per phase.
    #[getter]
    fn timings<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        d.set_item("build_matrix", self.timings.build_matrix)?;
        d.set_item("build_vector", self.timings.build_vector)?;
        d.set_item("propagate", self.timings.propagate)?;
        d.set_item("evaluate", self.timings.evaluate)?;
        Ok(d)
    }

    fn __float__(&self) -> f64 {
        self.price
    }

    fn __repr__(&self) -> String {
        format!("PriceResult(price={}, spot={}, nodes={}, dates={})", self.price, self.spot, self.nodes, self.dates)
    }
}

/// Matrix method settings: interpolation points and Jacobi parameters.
#[pyclass(module = "jacobi_barrier", frozen)]
pub struct MatrixPricer {
    inner: jb::MatrixPricer,
}

#[pymethods]
impl MatrixPricer {
    #[new]
    #[pyo3(signature = (nodes=25, a=-0.5, b=-0.5))]
    fn new(nodes: usize, a: f64, b: f64) -> PyResult<Self> {
        if nodes == 0 {
            return Err(PyValueError::new_err("nodes must be at least 1"));
        }
        let jacobi = jb::JacobiParams::new(a, b).map_err(to_py)?;
        Ok(Self { inner: jb::MatrixPricer::new(nodes, jacobi) })
    }

    #[getter]
    fn nodes(&self) -> usize {
        self.inner.nodes
    }
    #[getter]
    fn a(&self) -> f64 {
        self.inner.jacobi.a
    }
    #[getter]
    fn b(&self) -> f64 {
        self.inner.jacobi.b
    }

    fn price(&self, py: Python<'_>, contract: OptionContract) -> PyResult<PriceResult> {
        let p = self.inner;
        py.detach(|| p.price(&contract.inner)).map(Into::into).map_err(to_py)
    }

    /// Prices at several spots sharing one matrix build.
    fn price_curve(&self, py: Python<'_>, contract: OptionContract, spots: Vec<f64>) -> PyResult<Vec<PriceResult>> {
        let p = self.inner;
        let curve = py.detach(|| p.price_curve(&contract.inner, &spots)).map_err(to_py)?;
        Ok(curve.into_iter().map(Into::into).collect())
    }

    /// Max abs error over `spots` against the same method at `reference_nodes`.
    #[pyo3(signature = (contract, spots, reference_nodes=100))]
    fn max_error(
        &self,
        py: Python<'_>,
        contract: OptionContract,
        spots: Vec<f64>,
        reference_nodes: usize,
    ) -> PyResult<f64> {
        let p = self.inner;
        let reference = jb::Reference::Pricer(jb::MatrixPricer { nodes: reference_nodes, ..p });
        py.detach(|| jb::max_error_study(&contract.inner, &p, &spots, &reference))
            .map(|s| s.max_abs_error)
            .map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("MatrixPricer(nodes={}, a={}, b={})", self.inner.nodes, self.inner.jacobi.a, self.inner.jacobi.b)
    }
}

#[pyclass(module = "jacobi_barrier", frozen)]
pub struct McEstimate {
    #[pyo3(get)]
    price: f64,
    #[pyo3(get)]
    stderr: f64,
    #[pyo3(get)]
    paths: usize,
}

#[pymethods]
impl McEstimate {
    fn __repr__(&self) -> String {
        format!("McEstimate(price={}, stderr={}, paths={})", self.price, self.stderr, self.paths)
    }
}

/// Matrix-method price with `nodes` interpolation points.
#[pyfunction]
#[pyo3(signature = (contract, nodes=25, a=-0.5, b=-0.5))]
fn price(py: Python<'_>, contract: OptionContract, nodes: usize, a: f64, b: f64) -> PyResult<f64> {
    MatrixPricer::new(nodes, a, b)?.price(py, contract).map(|r| r.price)
}

#[pyfunction]
#[pyo3(signature = (contract, paths=1_000_000, seed=20_240_917, antithetic=true))]
fn mc_price(
    py: Python<'_>,
    contract: OptionContract,
    paths: usize,
    seed: u64,
    antithetic: bool,
) -> PyResult<McEstimate> {
    let cfg = jb::McConfig { paths, seed, antithetic };
    let e = py.detach(|| jb::mc_price(&contract.inner, &cfg)).map_err(to_py)?;
    Ok(McEstimate { price: e.price, stderr: e.stderr, paths: e.paths })
}

#[pyfunction]
fn bs_vanilla_call(spot: f64, strike: f64, rate: f64, vol: f64, expiry: f64) -> f64 {
    jb::bs_vanilla_call(spot, strike, rate, vol, expiry)
}

/// Down-and-out call priced with a remote upper barrier at `multiple * max(E, S0)`.
#[pyfunction]
#[pyo3(signature = (spot, strike, lower, rate, vol, expiry, dates, nodes=50, multiple=2.5))]
#[allow(clippy::too_many_arguments)]
fn single_barrier_price(
    py: Python<'_>,
    spot: f64,
    strike: f64,
    lower: f64,
    rate: f64,
    vol: f64,
    expiry: f64,
    dates: usize,
    nodes: usize,
    multiple: f64,
) -> PyResult<f64> {
    let d = jb::DownAndOut { spot, strike, lower, rate, vol, expiry, dates };
    let pricer = MatrixPricer::new(nodes, -0.5, -0.5)?.inner;
    py.detach(|| jb::oracles::single_barrier_price_with(&d, multiple, &pricer)).map(|r| r.price).map_err(to_py)
}

#[pyfunction]
fn continuity_correction(lower: f64, vol: f64, dt: f64) -> PyResult<f64> {
    jb::continuity_correction(lower, vol, dt).map_err(to_py)
}

/// Continuously monitored down-and-out price from the shifted discrete barrier.
#[pyfunction]
#[pyo3(signature = (spot, strike, lower, rate, vol, expiry, dates, nodes=25))]
#[allow(clippy::too_many_arguments)]
fn continuous_down_out_price(
    py: Python<'_>,
    spot: f64,
    strike: f64,
    lower: f64,
    rate: f64,
    vol: f64,
    expiry: f64,
    dates: usize,
    nodes: usize,
) -> PyResult<f64> {
    let d = jb::DownAndOut { spot, strike, lower, rate, vol, expiry, dates };
    let pricer = MatrixPricer::new(nodes, -0.5, -0.5)?.inner;
    py.detach(|| jb::continuous_down_out_price(&d, &pricer)).map(|r| r.price).map_err(to_py)
}

#[pyfunction]
fn spot_grid(contract: OptionContract, count: usize) -> Vec<f64> {
    jb::spot_grid(&contract.inner, count)
}

/// Recompute a published case set; returns `{"title", "rows", "summary"}`.
#[pyfunction]
fn run_table<'py>(py: Python<'py>, id: u32) -> PyResult<Bound<'py, PyDict>> {
    let t = py.detach(|| jb::tables::run_table(id)).map_err(|e| match e {
        jb::Error::CaseData(m) => PyValueError::new_err(m),
        e => to_py(e),
    })?;
    let rows = t
        .rows
        .iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("case", &r.case)?;
            d.set_item("computed", r.computed)?;
            d.set_item("target", r.target)?;
            d.set_item("abs_diff", r.abs_diff)?;
            d.set_item("pass", r.pass)?;
            d.set_item("expected_fail", r.expected_fail)?;
            d.set_item("note", r.note.as_deref())?;
            Ok(d)
        })
        .collect::<PyResult<Vec<_>>>()?;
    let s = &t.summary;
    let summary = PyDict::new(py);
    summary.set_item("cases", s.cases)?;
    summary.set_item("passed", s.passed)?;
    summary.set_item("failed", s.failed)?;
    summary.set_item("expected_failures", s.expected_failures)?;
    summary.set_item("max_abs_diff", s.max_abs_diff)?;
    summary.set_item("tolerance", s.tolerance)?;
    summary.set_item("all_pass", s.all_pass)?;
    let out = PyDict::new(py);
    out.set_item("id", t.id)?;
    out.set_item("title", t.title)?;
    out.set_item("rows", rows)?;
    out.set_item("summary", summary)?;
    Ok(out)
}

#[pymodule]
fn jacobi_barrier(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<OptionContract>()?;
    m.add_class::<MatrixPricer>()?;
    m.add_class::<PriceResult>()?;
    m.add_class::<McEstimate>()?;
    m.add_function(wrap_pyfunction!(price, m)?)?;
    m.add_function(wrap_pyfunction!(mc_price, m)?)?;
    m.add_function(wrap_pyfunction!(bs_vanilla_call, m)?)?;
    m.add_function(wrap_pyfunction!(single_barrier_price, m)?)?;
    m.add_function(wrap_pyfunction!(continuity_correction, m)?)?;
    m.add_function(wrap_pyfunction!(continuous_down_out_price, m)?)?;
    m.add_function(wrap_pyfunction!(spot_grid, m)?)?;
    m.add_function(wrap_pyfunction!(run_table, m)?)?;
    m.add("UPPER_BARRIER_MULTIPLE", jb::oracles::UPPER_BARRIER_MULTIPLE)?;
    Ok(())
}
