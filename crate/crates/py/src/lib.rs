//! Python bindings. Parameters travel as `dict[str, float]` holding `a`
//! and any auxiliary constants; grids as `"min:max:n"` strings.

use std::collections::BTreeMap;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use sips_core::algebra as alg;
use sips_core::oracle;
use sips_core::susy;
use sips_core::unireps::{self, Direction, RepLabel};
use sips_core::{Grid, ParameterPoint, SampledFunction, SipsError, SuperpotentialModel};

fn to_py(e: SipsError) -> PyErr {
    match e {
        SipsError::IterationCap { .. } | SipsError::NonConvergence { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn point(params: BTreeMap<String, f64>) -> PyResult<ParameterPoint> {
    let mut aux = params;
    let a = aux.remove("a").ok_or_else(|| PyValueError::new_err("params need an `a` entry"))?;
    Ok(ParameterPoint { a, aux })
}

fn grid(spec: Option<&str>) -> PyResult<Grid> {
    match spec {
        Some(s) => s.parse().map_err(to_py),
        None => Ok(Grid::reference()),
    }
}

fn columns(f: SampledFunction) -> (Vec<f64>, Vec<f64>) {
    let x = f.grid().points().collect();
    (x, f.into_values())
}

/// A catalog superpotential.
#[pyclass(name = "Model", frozen)]
struct PyModel {
    inner: SuperpotentialModel,
}

#[pymethods]
impl PyModel {
    #[new]
    fn new(id: &str) -> PyResult<Self> {
        Ok(Self { inner: SuperpotentialModel::by_id(id).map_err(to_py)? })
    }

    #[getter]
    fn id(&self) -> &'static str {
        self.inner.id()
    }

    #[getter]
    fn delta(&self) -> f64 {
        self.inner.delta()
    }

    #[getter]
    fn param_names(&self) -> Vec<&'static str> {
        self.inner.param_names().to_vec()
    }

    fn __repr__(&self) -> String {
        format!("Model('{}')", self.inner.id())
    }

    fn w(&self, x: f64, params: BTreeMap<String, f64>) -> PyResult<f64> {
        self.inner.evaluate_w(x, &point(params)?).map_err(to_py)
    }

    fn v_minus(&self, x: f64, params: BTreeMap<String, f64>) -> PyResult<f64> {
        self.inner.potential_minus(x, &point(params)?).map_err(to_py)
    }

    fn v_plus(&self, x: f64, params: BTreeMap<String, f64>) -> PyResult<f64> {
        self.inner.potential_plus(x, &point(params)?).map_err(to_py)
    }

    fn remainder(&self, params: BTreeMap<String, f64>) -> PyResult<f64> {
        let p = point(params)?;
        self.inner.validate(&p).map_err(to_py)?;
        Ok(self.inner.remainder(&p))
    }

    fn max_bound_states(&self, params: BTreeMap<String, f64>) -> PyResult<usize> {
        self.inner.max_bound_states(&point(params)?).map_err(to_py)
    }

    fn energy(&self, params: BTreeMap<String, f64>, n: usize) -> PyResult<f64> {
        self.inner.closed_form_energy(&point(params)?, n).map_err(to_py)
    }

    /// Energies from the shape-invariance recursion.
    #[pyo3(signature = (params, levels = 6))]
    fn spectrum(&self, params: BTreeMap<String, f64>, levels: usize) -> PyResult<Vec<f64>> {
        Ok(susy::spectrum_by_shape_invariance(&self.inner, &point(params)?, levels).map_err(to_py)?.energies)
    }

    /// Max residual of the shape-invariance identity per rung `k < k_max`.
    #[pyo3(signature = (params, k_max = 3, grid = None))]
    fn shape_invariance_residuals(
        &self,
        params: BTreeMap<String, f64>,
        k_max: usize,
        grid: Option<&str>,
    ) -> PyResult<Vec<f64>> {
        let g = self::grid(grid)?;
        Ok(susy::verify_shape_invariance(&self.inner, &point(params)?, &g, k_max).map_err(to_py)?.residuals)
    }

    /// `(x, psi)` for level `n` built with the raising chain.
    #[pyo3(signature = (params, n = 0, grid = None))]
    fn wavefunction(&self, params: BTreeMap<String, f64>, n: usize, grid: Option<&str>) -> PyResult<(Vec<f64>, Vec<f64>)> {
        let g = self::grid(grid)?;
        Ok(columns(susy::excited_state_by_ladder(&self.inner, &point(params)?, n, &g).map_err(to_py)?))
    }

    /// Lowest `k` eigenvalues of the discretized `H-`.
    #[pyo3(signature = (params, k, grid = None, tol = 1e-10))]
    fn oracle_spectrum(&self, params: BTreeMap<String, f64>, k: usize, grid: Option<&str>, tol: f64) -> PyResult<Vec<f64>> {
        let g = self::grid(grid)?;
        oracle::oracle_spectrum(&self.inner, &point(params)?, &g, k, tol).map_err(to_py)
    }

    /// Discrete residual `||(H- - E_n) psi_n|| / ||psi_n||` of the ladder state.
    #[pyo3(signature = (params, n, grid = None))]
    fn ladder_residual(&self, params: BTreeMap<String, f64>, n: usize, grid: Option<&str>) -> PyResult<f64> {
        let g = self::grid(grid)?;
        let p = point(params)?;
        let psi = susy::excited_state_by_ladder(&self.inner, &p, n, &g).map_err(to_py)?;
        let op = oracle::hamiltonian_minus(&self.inner, &p, &g).map_err(to_py)?;
        let e = self.inner.closed_form_energy(&p, n).map_err(to_py)?;
        oracle::residual_norm(&op, &psi, e).map_err(to_py)
    }
}

#[pyfunction]
fn list_models() -> Vec<&'static str> {
    sips_core::ModelKind::ALL.iter().map(|k| k.id()).collect()
}

#[pyfunction]
#[pyo3(signature = (f, threshold = susy::DEFAULT_NODE_THRESHOLD))]
fn node_count(f: Vec<f64>, threshold: f64) -> PyResult<usize> {
    let n = f.len();
    let g = Grid::new(0.0, 1.0, n.max(2)).map_err(to_py)?;
    let sampled = SampledFunction::new(g, f).map_err(to_py)?;
    Ok(susy::node_count(&sampled, threshold))
}

/// Casimir route: `E_n = m² - m - j(j+1)`, `j = n - m`.
#[pyfunction]
#[pyo3(signature = (model, m, aux = BTreeMap::new(), n_max = 6))]
fn algebra_spectrum(model: &str, m: f64, aux: BTreeMap<String, f64>, n_max: usize) -> PyResult<Vec<f64>> {
    let model = SuperpotentialModel::by_id(model).map_err(to_py)?;
    Ok(alg::algebra_spectrum(&model, m, &aux, n_max).map_err(to_py)?.energies)
}

#[pyfunction]
fn energy_from_algebra(m: f64, j: f64) -> f64 {
    alg::energy_from_algebra(m, j)
}

#[pyfunction]
fn is_so21(model: &str) -> PyResult<bool> {
    Ok(alg::is_so21(&SuperpotentialModel::by_id(model).map_err(to_py)?).is_so21)
}

/// `(class, note)`; `class` is `None` when no unirep matches.
#[pyfunction]
fn classify(j: f64, m0: f64) -> (Option<String>, String) {
    let c = unireps::classify(j, m0);
    (c.rep.map(|r| r.class.to_string()), c.note)
}

fn direction(s: &str) -> PyResult<Direction> {
    match s {
        "raise" | "+" => Ok(Direction::Raise),
        "lower" | "-" => Ok(Direction::Lower),
        _ => Err(PyValueError::new_err(format!("direction must be 'raise' or 'lower', got {s:?}"))),
    }
}

#[pyfunction]
fn ladder_coefficient(j: f64, m: f64, direction: &str) -> PyResult<f64> {
    unireps::ladder_coefficient(j, m, self::direction(direction)?).map_err(to_py)
}

#[pyfunction]
fn region_of(j: f64, m: f64) -> &'static str {
    unireps::region_of(j, m).as_str()
}

/// `[(m, raise, lower), ...]` for the first `count` weights.
#[pyfunction]
#[pyo3(signature = (class_, j = None, m0 = None, beta = None, count = 5))]
fn enumerate_multiplet(
    class_: &str,
    j: Option<f64>,
    m0: Option<f64>,
    beta: Option<f64>,
    count: usize,
) -> PyResult<Vec<(f64, f64, f64)>> {
    let need = |v: Option<f64>, name: &str| v.ok_or_else(|| PyValueError::new_err(format!("{class_} needs {name}")));
    let rep = match class_ {
        "D_plus" => RepLabel::d_plus(need(j, "j")?),
        "D_minus" => RepLabel::d_minus(need(j, "j")?),
        "D_s" => RepLabel::supplementary(need(j, "j")?, need(m0, "m0")?),
        "D_p" => RepLabel::principal(need(beta, "beta")?, need(m0, "m0")?),
        other => return Err(PyValueError::new_err(format!("unknown class {other:?}"))),
    }
    .map_err(to_py)?;
    let multiplet = unireps::enumerate_multiplet(&rep, count).map_err(to_py)?;
    let coefficients = multiplet.coefficients().map_err(to_py)?;
    Ok(multiplet.m_values.iter().zip(coefficients).map(|(&m, (up, down))| (m, up, down)).collect())
}

#[pymodule]
fn sips(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModel>()?;
    m.add_function(wrap_pyfunction!(list_models, m)?)?;
    m.add_function(wrap_pyfunction!(node_count, m)?)?;
    m.add_function(wrap_pyfunction!(algebra_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(energy_from_algebra, m)?)?;
    m.add_function(wrap_pyfunction!(is_so21, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(ladder_coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(region_of, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_multiplet, m)?)?;
    Ok(())
}
