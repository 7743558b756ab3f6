//! Python bindings for the `mixed_moore` library.

use num_bigint::BigUint;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use serde::Serialize;

use mixed_moore::certify::Mode;
use mixed_moore::search::{SearchError, SearchSpec};
use mixed_moore::{bounds, canon, certify, constructions, dot, format, graph};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Any serializable value, handed to Python through `json.loads`.
fn to_py<'py>(py: Python<'py>, v: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(value_err)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn mode(s: &str) -> PyResult<Mode> {
    s.parse().map_err(value_err)
}

#[pyclass(name = "MixedGraph", module = "mixed_moore_py", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyMixedGraph {
    inner: graph::MixedGraph,
}

impl From<graph::MixedGraph> for PyMixedGraph {
    fn from(inner: graph::MixedGraph) -> Self {
        PyMixedGraph { inner }
    }
}

#[pymethods]
impl PyMixedGraph {
    #[new]
    #[pyo3(signature = (n, edges=Vec::new(), arcs=Vec::new()))]
    fn new(n: usize, edges: Vec<(usize, usize)>, arcs: Vec<(usize, usize)>) -> PyResult<Self> {
        graph::MixedGraph::new(n, edges, arcs).map(Into::into).map_err(value_err)
    }

    /// Parses the v1 text format.
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        format::parse_graph(text).map(Into::into).map_err(value_err)
    }

    fn to_text(&self) -> String {
        format::to_text(&self.inner)
    }

    fn to_dot(&self) -> String {
        dot::to_dot(&self.inner)
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().to_vec()
    }

    #[getter]
    fn arcs(&self) -> Vec<(usize, usize)> {
        self.inner.arcs().to_vec()
    }

    fn undirected_neighbors(&self, u: usize) -> PyResult<Vec<usize>> {
        self.inner.check_vertex(u).map_err(value_err)?;
        Ok(self.inner.undirected_neighbors(u).to_vec())
    }

    fn out_neighbors(&self, u: usize) -> PyResult<Vec<usize>> {
        self.inner.check_vertex(u).map_err(value_err)?;
        Ok(self.inner.out_neighbors(u).to_vec())
    }

    fn in_neighbors(&self, u: usize) -> PyResult<Vec<usize>> {
        self.inner.check_vertex(u).map_err(value_err)?;
        Ok(self.inner.in_neighbors(u).to_vec())
    }

    /// Vertex `u` becomes `perm[u]`.
    fn relabel(&self, perm: Vec<usize>) -> PyResult<Self> {
        self.inner.relabel(&perm).map(Into::into).map_err(value_err)
    }

    fn reversed(&self) -> Self {
        self.inner.reversed().into()
    }

    fn degrees<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.degrees())
    }

    fn __len__(&self) -> usize {
        self.inner.order()
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.inner.hash(&mut h);
        h.finish()
    }

    fn __repr__(&self) -> String {
        format!(
            "MixedGraph(n={}, edges={}, arcs={})",
            self.inner.order(),
            self.inner.edges().len(),
            self.inner.arcs().len()
        )
    }
}

#[pyfunction]
fn moore_bound(r: u64, z: u64, k: u64) -> BigUint {
    bounds::moore_bound(r, z, k).bound
}

/// Bound plus per-level (edge-ended, arc-ended) counts of the Moore tree.
#[pyfunction]
fn moore_bound_levels<'py>(py: Python<'py>, r: u64, z: u64, k: u64) -> PyResult<Bound<'py, PyDict>> {
    let m = bounds::moore_bound(r, z, k);
    let d = PyDict::new(py);
    d.set_item("bound", m.bound)?;
    d.set_item("edge_ended", m.levels.edge_ended)?;
    d.set_item("arc_ended", m.levels.arc_ended)?;
    Ok(d)
}

#[pyfunction]
fn order_11k<'py>(py: Python<'py>, k: u64) -> PyResult<Bound<'py, PyDict>> {
    let v = bounds::order_11k(k);
    let d = PyDict::new(py);
    d.set_item("k", v.k)?;
    d.set_item("order", v.order)?;
    d.set_item("parity_feasible", v.parity_feasible)?;
    Ok(d)
}

/// The four candidate eigenvalue sums come back as exact fraction strings.
#[pyfunction]
fn spectral_infeasibility_defect1<'py>(py: Python<'py>, z: u64) -> PyResult<Bound<'py, PyDict>> {
    let v = bounds::spectral_infeasibility_defect1(z);
    let d = PyDict::new(py);
    d.set_item("z", v.z)?;
    d.set_item("order", v.order)?;
    d.set_item("discriminant_root", v.discriminant_root)?;
    d.set_item("square_identity_holds", v.square_identity_holds)?;
    d.set_item("sums", v.sums.iter().map(ToString::to_string).collect::<Vec<_>>())?;
    d.set_item("infeasible", v.infeasible)?;
    Ok(d)
}

/// Full certificate as a dict; `mode` is "defect" or "excess".
#[pyfunction]
fn check_graph<'py>(
    py: Python<'py>,
    g: &PyMixedGraph,
    r: usize,
    z: usize,
    k: usize,
    mode: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let report = certify::check_graph(&g.inner, r, z, k, self::mode(mode)?).map_err(value_err)?;
    to_py(py, &report)
}

#[pyfunction]
fn repeats(g: &PyMixedGraph, k: usize) -> PyResult<Vec<usize>> {
    certify::repeats(&g.inner, k).map_err(value_err)
}

#[pyfunction]
fn outliers(g: &PyMixedGraph, k: usize) -> PyResult<Vec<usize>> {
    certify::outliers(&g.inner, k).map_err(value_err)
}

#[pyfunction]
fn structure_audit<'py>(
    py: Python<'py>,
    g: &PyMixedGraph,
    r: usize,
    z: usize,
    k: usize,
    mode: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let checks = certify::structure_audit(&g.inner, r, z, k, self::mode(mode)?).map_err(value_err)?;
    to_py(py, &checks)
}

/// Hex string of the canonical form.
#[pyfunction]
fn canonical_form(g: &PyMixedGraph) -> String {
    canon::canonical_form(&g.inner).to_hex()
}

#[pyfunction]
fn are_isomorphic(g: &PyMixedGraph, h: &PyMixedGraph) -> bool {
    canon::are_isomorphic(&g.inner, &h.inner)
}

#[pyfunction]
fn almost_moore_10() -> PyMixedGraph {
    constructions::almost_moore_10().into()
}

#[pyfunction]
fn excess_one_12() -> PyMixedGraph {
    constructions::excess_one_12().into()
}

#[pyfunction]
fn kautz_collapse(z: usize) -> PyMixedGraph {
    constructions::kautz_collapse(z).into()
}

#[pyfunction]
fn dihedral_cayley(m: usize, arc_gens: Vec<String>, edge_gens: Vec<String>) -> PyResult<PyMixedGraph> {
    constructions::dihedral_cayley(m, &arc_gens, &edge_gens).map(Into::into).map_err(value_err)
}

/// One graph per isomorphism class. Releases the interpreter lock while running.
#[pyfunction]
#[pyo3(signature = (r, z, k, mode, slack, *, assume_total_regular=false, enumerate_all=true, workers=None, node_budget=None))]
#[allow(clippy::too_many_arguments)]
fn search_extremal(
    py: Python<'_>,
    r: usize,
    z: usize,
    k: usize,
    mode: &str,
    slack: usize,
    assume_total_regular: bool,
    enumerate_all: bool,
    workers: Option<usize>,
    node_budget: Option<u64>,
) -> PyResult<Vec<PyMixedGraph>> {
    let mut spec = SearchSpec::new(r, z, k, self::mode(mode)?, slack);
    spec.assume_total_regular = assume_total_regular;
    spec.enumerate_all = enumerate_all;
    spec.workers = workers;
    if let Some(b) = node_budget {
        spec.node_budget = b;
    }
    let result = py.detach(|| mixed_moore::search_extremal(&spec));
    match result {
        Ok(res) => Ok(res.graphs.into_iter().map(Into::into).collect()),
        Err(e @ SearchError::BudgetExceeded { .. }) => Err(PyRuntimeError::new_err(e.to_string())),
        Err(e) => Err(value_err(e)),
    }
}

#[pymodule]
fn mixed_moore_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMixedGraph>()?;
    m.add_function(wrap_pyfunction!(moore_bound, m)?)?;
    m.add_function(wrap_pyfunction!(moore_bound_levels, m)?)?;
    m.add_function(wrap_pyfunction!(order_11k, m)?)?;
    m.add_function(wrap_pyfunction!(spectral_infeasibility_defect1, m)?)?;
    m.add_function(wrap_pyfunction!(check_graph, m)?)?;
    m.add_function(wrap_pyfunction!(repeats, m)?)?;
    m.add_function(wrap_pyfunction!(outliers, m)?)?;
    m.add_function(wrap_pyfunction!(structure_audit, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_form, m)?)?;
    m.add_function(wrap_pyfunction!(are_isomorphic, m)?)?;
    m.add_function(wrap_pyfunction!(almost_moore_10, m)?)?;
    m.add_function(wrap_pyfunction!(excess_one_12, m)?)?;
    m.add_function(wrap_pyfunction!(kautz_collapse, m)?)?;
    m.add_function(wrap_pyfunction!(dihedral_cayley, m)?)?;
    m.add_function(wrap_pyfunction!(search_extremal, m)?)?;
    Ok(())
}
