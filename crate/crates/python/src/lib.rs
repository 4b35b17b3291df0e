//! Python bindings for `time_arrows`.
//!
//! Structured reports (tables, representation checks, cross identifications)
//! are returned as plain dicts decoded from the same JSON the CLI emits.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use time_arrows::resonance::{all_canonical_states, canonical_state};
use time_arrows::scenario::{self, TimeGrid};
use time_arrows::symmetry::{build_representation_with, CReading};
use time_arrows::transform;
use time_arrows::{semigroup, ArrowConvention, ArrowKind, BranchId, Kind, Regime, SpinJ};

fn err(e: time_arrows::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn label(v: serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s,
        other => other.to_string(),
    }
}

fn json_to_py<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

fn to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    json_to_py(py, &text)
}

fn parse_arrow(s: &str) -> PyResult<ArrowConvention> {
    match s {
        "prep" | "preparation_registration" => Ok(ArrowConvention::PREPARATION_REGISTRATION),
        "exc" | "excitation_deexcitation" => Ok(ArrowConvention::EXCITATION_DEEXCITATION),
        _ => Err(PyValueError::new_err(format!("unknown arrow {s:?}, expected prep or exc"))),
    }
}

fn parse_kind(s: &str) -> PyResult<Kind> {
    match s {
        "grow" | "growing" => Ok(Kind::Growing),
        "decay" | "decaying" => Ok(Kind::Decaying),
        _ => Err(PyValueError::new_err(format!("unknown kind {s:?}, expected grow or decay"))),
    }
}

fn parse_reading(s: &str) -> PyResult<CReading> {
    match s {
        "anti_diagonal" | "anti-diagonal" => Ok(CReading::AntiDiagonal),
        "diagonal" => Ok(CReading::Diagonal),
        _ => Err(PyValueError::new_err(format!("unknown C reading {s:?}"))),
    }
}

#[pyclass(name = "ResonancePole", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyPole(time_arrows::ResonancePole);

#[pymethods]
impl PyPole {
    #[new]
    fn new(energy: f64, width: f64) -> PyResult<Self> {
        time_arrows::make_pole(energy, width).map(Self).map_err(err)
    }

    #[getter]
    fn energy(&self) -> f64 {
        self.0.energy()
    }

    #[getter]
    fn width(&self) -> f64 {
        self.0.width()
    }

    #[getter]
    fn lifetime(&self) -> f64 {
        self.0.lifetime()
    }

    /// `E_R - iΓ/2`
    #[getter]
    fn z(&self) -> Complex64 {
        self.0.z()
    }

    fn __repr__(&self) -> String {
        format!("ResonancePole(energy={}, width={})", self.0.energy(), self.0.width())
    }
}

#[pyclass(name = "GamowState", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyState(time_arrows::GamowState);

#[pymethods]
impl PyState {
    #[new]
    #[pyo3(signature = (arrow, kind, regime, pole))]
    fn new(arrow: &str, kind: &str, regime: i64, pole: PyPole) -> PyResult<Self> {
        let regime = Regime::new(regime).map_err(err)?;
        Ok(Self(canonical_state(parse_arrow(arrow)?, parse_kind(kind)?, regime, pole.0)))
    }

    #[getter]
    fn arrow(&self) -> String {
        label(serde_json::to_value(self.0.arrow().kind()).unwrap())
    }

    #[getter]
    fn kind(&self) -> String {
        label(serde_json::to_value(self.0.kind()).unwrap())
    }

    #[getter]
    fn ket(&self) -> String {
        label(serde_json::to_value(self.0.ket()).unwrap())
    }

    #[getter]
    fn half_plane(&self) -> String {
        label(serde_json::to_value(self.0.half_plane()).unwrap())
    }

    #[getter]
    fn regime(&self) -> usize {
        self.0.regime().index()
    }

    #[getter]
    fn role(&self) -> String {
        label(serde_json::to_value(self.0.role()).unwrap())
    }

    #[getter]
    fn amplitude(&self) -> Complex64 {
        self.0.amplitude()
    }

    #[getter]
    fn pole(&self) -> PyPole {
        PyPole(self.0.pole())
    }

    #[getter]
    fn bracket(&self) -> String {
        self.0.bracket()
    }

    /// Branch label such as `"4b"`.
    #[getter]
    fn branch(&self) -> String {
        time_arrows::branch_for(&self.0).id().label().to_string()
    }

    /// `(half, orientation)`, e.g. `("t>=0", "0 -> +inf")`.
    #[getter]
    fn domain(&self) -> (String, String) {
        let d = self.0.domain();
        (d.half().as_str().to_string(), d.orientation().as_str().to_string())
    }

    fn with_amplitude(&self, amplitude: Complex64) -> Self {
        Self(self.0.with_amplitude(amplitude))
    }

    fn evolve(&self, t: f64) -> PyResult<Complex64> {
        time_arrows::evolve(&self.0, t).map(|f| f.value).map_err(err)
    }

    fn survival(&self, t: f64) -> PyResult<f64> {
        time_arrows::survival_probability(&self.0, t).map_err(err)
    }

    fn relative_intensity(&self, t: f64) -> PyResult<f64> {
        semigroup::relative_intensity(&self.0, t).map_err(err)
    }

    fn apply_r(&self) -> Self {
        Self(time_arrows::apply_r(&self.0))
    }

    /// `R` applied twice through a doubled representation: `(state, factor)`.
    fn apply_r_twice(&self, rep: &PyRepresentation) -> PyResult<(Self, i64)> {
        let tw = time_arrows::apply_r_twice(&self.0, &rep.0).map_err(err)?;
        Ok((Self(tw.state), tw.factor))
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("GamowState({})", self.0.bracket())
    }
}

#[pyclass(name = "Representation", frozen)]
struct PyRepresentation(time_arrows::RepresentationTriple);

#[pymethods]
impl PyRepresentation {
    #[new]
    #[pyo3(signature = (row, twice_j, c_reading = "anti_diagonal"))]
    fn new(row: i64, twice_j: u32, c_reading: &str) -> PyResult<Self> {
        build_representation_with(row, SpinJ::from_twice(twice_j), parse_reading(c_reading)?)
            .map(Self)
            .map_err(err)
    }

    #[getter]
    fn row(&self) -> u8 {
        self.0.row()
    }

    #[getter]
    fn twice_j(&self) -> u32 {
        self.0.j().twice_j()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn eps_r(&self) -> i64 {
        self.0.eps_r()
    }

    #[getter]
    fn eps_t(&self) -> i64 {
        self.0.eps_t()
    }

    #[getter]
    fn doubled(&self) -> bool {
        self.0.doubled()
    }

    fn verify_group_relations<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &time_arrows::verify_group_relations(&self.0))
    }

    fn check_conjugation_identities<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &time_arrows::check_conjugation_identities(&self.0))
    }
}

#[pyfunction]
fn canonical_states(pole: PyPole) -> Vec<PyState> {
    all_canonical_states(pole.0).into_iter().map(PyState).collect()
}

#[pyfunction]
fn derive_table<'py>(py: Python<'py>, arrow: &str) -> PyResult<Bound<'py, PyAny>> {
    json_to_py(py, &transform::derive_table(parse_arrow(arrow)?).to_canonical_json())
}

#[pyfunction]
fn derive_table_text(arrow: &str) -> PyResult<String> {
    Ok(transform::derive_table(parse_arrow(arrow)?).to_text())
}

#[pyfunction]
fn cross_identify<'py>(py: Python<'py>, branch: &str) -> PyResult<Bound<'py, PyAny>> {
    let id: BranchId = branch.parse().map_err(err)?;
    to_py(py, &transform::cross_identify(id).map_err(err)?)
}

/// Rows of `(t, survival, factor)` on an evenly spaced grid.
#[pyfunction]
#[pyo3(signature = (pole, arrow, kind, regime, t_min, t_max, steps))]
fn run_decay(
    pole: PyPole,
    arrow: &str,
    kind: &str,
    regime: i64,
    t_min: f64,
    t_max: f64,
    steps: usize,
) -> PyResult<Vec<(f64, f64, Complex64)>> {
    let grid = TimeGrid::new(t_min, t_max, steps).map_err(err)?;
    let regime = Regime::new(regime).map_err(err)?;
    let sc = scenario::Scenario::new(pole.0, parse_arrow(arrow)?, parse_kind(kind)?, regime, grid);
    let points = scenario::run_decay(&sc).map_err(err)?;
    Ok(points
        .into_iter()
        .map(|p| (p.t, p.survival, Complex64::new(p.factor_real, p.factor_imag)))
        .collect())
}

#[pyfunction]
fn lineshape(pole: PyPole, energies: Vec<f64>) -> PyResult<Vec<f64>> {
    let pts = scenario::lineshape(&pole.0, &energies).map_err(err)?;
    Ok(pts.into_iter().map(|p| p.density).collect())
}

/// `exp(-iHt) v` for a Hermitian `H` given as a list of rows.
#[pyfunction]
fn group_evolve(hamiltonian: Vec<Vec<Complex64>>, t: f64, vector: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
    let n = hamiltonian.len();
    if hamiltonian.iter().any(|row| row.len() != n) {
        return Err(PyValueError::new_err("hamiltonian must be square"));
    }
    let h = DMatrix::from_fn(n, n, |i, j| hamiltonian[i][j]);
    let v = DVector::from_vec(vector);
    let out = time_arrows::group_evolve(&h, t, &v).map_err(err)?;
    Ok(out.iter().copied().collect())
}

#[pyfunction]
fn arrow_kinds() -> Vec<String> {
    [ArrowKind::PreparationRegistration, ArrowKind::ExcitationDeexcitation]
        .into_iter()
        .map(|k| label(serde_json::to_value(k).unwrap()))
        .collect()
}

#[pymodule]
fn time_arrows_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPole>()?;
    m.add_class::<PyState>()?;
    m.add_class::<PyRepresentation>()?;
    m.add_function(wrap_pyfunction!(canonical_states, m)?)?;
    m.add_function(wrap_pyfunction!(derive_table, m)?)?;
    m.add_function(wrap_pyfunction!(derive_table_text, m)?)?;
    m.add_function(wrap_pyfunction!(cross_identify, m)?)?;
    m.add_function(wrap_pyfunction!(run_decay, m)?)?;
    m.add_function(wrap_pyfunction!(lineshape, m)?)?;
    m.add_function(wrap_pyfunction!(group_evolve, m)?)?;
    m.add_function(wrap_pyfunction!(arrow_kinds, m)?)?;
    Ok(())
}
