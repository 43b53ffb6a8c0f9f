//! Python bindings: the walk simulator, the closed-form layer, and the
//! verification battery, exposed as the `bipartite_walk_py` module.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use bipartite_walk as core;

fn to_py_err(err: core::Error) -> PyErr {
    PyValueError::new_err(err.to_string())
}

fn parse_layout(layout: &str) -> PyResult<core::Layout> {
    layout
        .parse::<core::Layout>()
        .map_err(PyValueError::new_err)
}

/// Graph sizes and marked-vertex placement.
#[pyclass(name = "WalkParams", frozen)]
struct PyWalkParams {
    inner: core::WalkParams,
}

#[pymethods]
impl PyWalkParams {
    /// WalkParams(m, n, layout="opposite", sender=1, receiver=None)
    #[new]
    #[pyo3(signature = (m, n, layout = "opposite", sender = 1, receiver = None))]
    fn new(
        m: usize,
        n: usize,
        layout: &str,
        sender: usize,
        receiver: Option<usize>,
    ) -> PyResult<Self> {
        let layout = parse_layout(layout)?;
        let receiver = receiver.unwrap_or(match layout {
            core::Layout::SamePart => 2,
            core::Layout::OppositePart => 1,
        });
        let inner = core::WalkParams::new(m, n, layout, sender, receiver).map_err(to_py_err)?;
        Ok(PyWalkParams { inner })
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn layout(&self) -> String {
        self.inner.layout.to_string()
    }

    #[getter]
    fn sender(&self) -> usize {
        self.inner.sender
    }

    #[getter]
    fn receiver(&self) -> usize {
        self.inner.receiver
    }

    fn __repr__(&self) -> String {
        format!(
            "WalkParams(m={}, n={}, layout='{}', sender={}, receiver={})",
            self.inner.m, self.inner.n, self.inner.layout, self.inner.sender, self.inner.receiver
        )
    }
}

/// Amplitude vector over the walk's state space.
#[pyclass(name = "WalkState")]
struct PyWalkState {
    inner: core::WalkState,
}

#[pymethods]
impl PyWalkState {
    /// The sender's uniform coin superposition.
    #[staticmethod]
    fn initial(params: &PyWalkParams) -> PyResult<Self> {
        Ok(PyWalkState {
            inner: core::WalkState::initial(params.inner).map_err(to_py_err)?,
        })
    }

    /// The receiver's uniform coin superposition.
    #[staticmethod]
    fn target(params: &PyWalkParams) -> PyResult<Self> {
        Ok(PyWalkState {
            inner: core::WalkState::target(params.inner).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn step(&self) -> usize {
        self.inner.step()
    }

    fn norm_sqr(&self) -> f64 {
        self.inner.norm_sqr()
    }

    /// Full amplitude vector in the linearized layout (part-1 block first).
    fn amplitudes(&self) -> Vec<Complex64> {
        self.inner.amplitudes().to_vec()
    }

    /// Amplitude of the part-1 basis state (1-based vertex and coin labels).
    fn amplitude_part1(&self, i: usize, alpha: usize) -> Complex64 {
        self.inner.amplitude_part1(i, alpha)
    }

    /// Amplitude of the part-2 basis state (1-based vertex and coin labels).
    fn amplitude_part2(&self, alpha: usize, i: usize) -> Complex64 {
        self.inner.amplitude_part2(alpha, i)
    }

    /// Transfer fidelity |<target|self>|^2.
    fn fidelity(&self, target: &PyWalkState) -> f64 {
        self.inner.fidelity(&target.inner)
    }

    fn __repr__(&self) -> String {
        let p = self.inner.params();
        format!(
            "WalkState(m={}, n={}, step={})",
            p.m,
            p.n,
            self.inner.step()
        )
    }
}

/// One-step evolution operator.
#[pyclass(name = "StepOperator", frozen)]
struct PyStepOperator {
    inner: core::StepOperator,
}

#[pymethods]
impl PyStepOperator {
    #[new]
    fn new(params: &PyWalkParams) -> Self {
        PyStepOperator {
            inner: core::StepOperator::new(params.inner),
        }
    }

    /// Apply one step (coins, then shift) and return the new state.
    fn apply(&self, state: &PyWalkState) -> PyResult<PyWalkState> {
        Ok(PyWalkState {
            inner: self.inner.apply(&state.inner).map_err(to_py_err)?,
        })
    }
}

/// Run `steps` walk steps from the initial state.
#[pyfunction]
fn evolve(params: &PyWalkParams, steps: usize) -> PyResult<PyWalkState> {
    Ok(PyWalkState {
        inner: core::evolve(params.inner, steps).map_err(to_py_err)?,
    })
}

/// Grover diffusion of a coefficient vector.
#[pyfunction]
fn apply_grover(coeffs: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
    if coeffs.is_empty() {
        return Err(PyValueError::new_err(
            "Grover diffusion needs at least one coefficient",
        ));
    }
    Ok(core::apply_grover(&coeffs))
}

/// Rotation phase of the opposite-part two-step dynamics.
#[pyfunction]
fn rotation_phase(m: usize, n: usize) -> PyResult<f64> {
    if m < 1 || n < 1 {
        return Err(PyValueError::new_err("part sizes must be positive"));
    }
    Ok(core::rotation_phase(m, n))
}

/// Closed-form opposite-part fidelity at an odd step count.
#[pyfunction]
fn fidelity_closed_form(m: usize, n: usize, steps: usize) -> PyResult<f64> {
    core::fidelity_closed_form(m, n, steps).map_err(to_py_err)
}

/// Fidelity envelope for opposite-part transfer; 1 exactly when m = n.
#[pyfunction]
fn fmax_opposite(m: usize, n: usize) -> PyResult<f64> {
    if m < 1 || n < 1 {
        return Err(PyValueError::new_err("part sizes must be positive"));
    }
    Ok(core::fmax_opposite(m, n))
}

fn report_to_dict<'py>(
    py: Python<'py>,
    report: &core::TransferReport,
) -> PyResult<Bound<'py, PyDict>> {
    let dict = PyDict::new(py);
    dict.set_item("m", report.params.m)?;
    dict.set_item("n", report.params.n)?;
    dict.set_item("layout", report.params.layout.to_string())?;
    if let Some(omega) = report.omega {
        dict.set_item("omega", omega)?;
    }
    dict.set_item("T_opt", report.t_opt)?;
    dict.set_item("F_max_analytic", report.f_max_analytic)?;
    dict.set_item("F_at_T", report.f_at_t)?;
    if let Some(step) = report.peak_step {
        dict.set_item("peak_step", step)?;
    }
    if let Some(f) = report.peak_fidelity {
        dict.set_item("peak_fidelity", f)?;
    }
    if let Some(curve) = &report.curve {
        dict.set_item("curve", curve.clone())?;
    }
    Ok(dict)
}

/// Transfer report without a simulated scan: optimal step count, envelope,
/// and the closed-form value attained there.
#[pyfunction]
fn transfer_time<'py>(py: Python<'py>, params: &PyWalkParams) -> PyResult<Bound<'py, PyDict>> {
    let report = core::transfer_time(&params.inner).map_err(to_py_err)?;
    report_to_dict(py, &report)
}

/// Transfer report augmented with a full-simulation peak scan.
#[pyfunction]
#[pyo3(signature = (params, scan_steps = None))]
fn transfer_report<'py>(
    py: Python<'py>,
    params: &PyWalkParams,
    scan_steps: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let report = core::transfer_report(&params.inner, scan_steps).map_err(to_py_err)?;
    report_to_dict(py, &report)
}

/// Fidelity curve as a list of (step, fidelity) pairs.
/// `source` is one of "full", "reduced", "closed".
#[pyfunction]
#[pyo3(signature = (params, max_steps, source = "full"))]
fn curve(params: &PyWalkParams, max_steps: usize, source: &str) -> PyResult<Vec<(usize, f64)>> {
    if max_steps == 0 {
        return Err(PyValueError::new_err("max_steps must be at least 1"));
    }
    let source = source
        .parse::<core::CurveSource>()
        .map_err(PyValueError::new_err)?;
    let curves = core::curve(&params.inner, max_steps, &[source]).map_err(to_py_err)?;
    Ok(curves
        .into_iter()
        .next()
        .map(|c| c.points)
        .unwrap_or_default())
}

/// Fidelity envelope over a size grid, as a nested list indexed [m][n].
#[pyfunction]
fn sweep_fmax(m_values: Vec<usize>, n_values: Vec<usize>) -> PyResult<Vec<Vec<f64>>> {
    if m_values.is_empty() || n_values.is_empty() {
        return Err(PyValueError::new_err("sweep ranges must be nonempty"));
    }
    if m_values.iter().chain(n_values.iter()).any(|&v| v < 2) {
        return Err(PyValueError::new_err("sweep sizes must be at least 2"));
    }
    let grid = core::sweep_fmax(&m_values, &n_values);
    Ok((0..m_values.len())
        .map(|i| (0..n_values.len()).map(|j| grid.value(i, j)).collect())
        .collect())
}

/// Run the cross-validation battery; returns a dict with `all_passed` and a
/// `checks` list of per-property dicts.
#[pyfunction]
#[pyo3(signature = (max_product = 36, steps = 50))]
fn verify<'py>(py: Python<'py>, max_product: usize, steps: usize) -> PyResult<Bound<'py, PyDict>> {
    let limits = core::VerifyLimits {
        max_product,
        oracle_steps: steps,
        ..core::VerifyLimits::default()
    };
    let report = core::verify(&limits);
    let dict = PyDict::new(py);
    dict.set_item("all_passed", report.all_passed())?;
    let checks = PyList::empty(py);
    for check in &report.checks {
        let entry = PyDict::new(py);
        entry.set_item("name", check.name)?;
        entry.set_item("passed", check.passed)?;
        entry.set_item("cases", check.cases)?;
        entry.set_item("worst_residual", check.worst_residual)?;
        entry.set_item("tolerance", check.tolerance)?;
        checks.append(entry)?;
    }
    dict.set_item("checks", checks)?;
    Ok(dict)
}

#[pymodule]
fn bipartite_walk_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWalkParams>()?;
    m.add_class::<PyWalkState>()?;
    m.add_class::<PyStepOperator>()?;
    m.add_function(wrap_pyfunction!(evolve, m)?)?;
    m.add_function(wrap_pyfunction!(apply_grover, m)?)?;
    m.add_function(wrap_pyfunction!(rotation_phase, m)?)?;
    m.add_function(wrap_pyfunction!(fidelity_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(fmax_opposite, m)?)?;
    m.add_function(wrap_pyfunction!(transfer_time, m)?)?;
    m.add_function(wrap_pyfunction!(transfer_report, m)?)?;
    m.add_function(wrap_pyfunction!(curve, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_fmax, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
