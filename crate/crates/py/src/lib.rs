//! Python bindings for the pebbling toolkit.
//!
//! Exposes the graph and distribution types plus the main operations:
//! exact reachability, cooperation statistics, the auxiliary-graph
//! transformation audit, the closed-form bounds, LP emission, the exact
//! solver, and the verification suites. Exact rationals cross the boundary
//! as `(numerator, denominator)` tuples; infinite M values become `None`.

use std::sync::Arc;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use pebbling::aux::AuxGraph;
use pebbling::bounds;
use pebbling::decompose::{self, MValue, UnitDistribution};
use pebbling::engine::{PebbleDistribution, PebblingMove};
use pebbling::graph::GraphSpec;
use pebbling::solver::{self, SolveOptions};
use pebbling::verify::{self, SweepConfig};

fn to_py_err(e: pebbling::Error) -> PyErr {
    match e {
        pebbling::Error::Io(_) | pebbling::Error::StepLimitExceeded { .. } => {
            PyRuntimeError::new_err(e.to_string())
        }
        other => PyValueError::new_err(other.to_string()),
    }
}

fn rational_pair(r: bounds::Rational) -> (i64, i64) {
    (*r.numer(), *r.denom())
}

fn m_value_opt(m: MValue) -> Option<u32> {
    match m {
        MValue::Finite(k) => Some(k),
        MValue::Infinite => None,
    }
}

/// An immutable graph with precomputed distances.
#[pyclass(name = "Graph", frozen)]
struct PyGraph {
    inner: Arc<pebbling::Graph>,
    spec: Option<GraphSpec>,
}

#[pymethods]
impl PyGraph {
    /// Build from a spec string: path:n, cycle:n, grid:m,n, torus:m,n.
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        let spec: GraphSpec = spec.parse().map_err(to_py_err)?;
        let inner = Arc::new(spec.build().map_err(to_py_err)?);
        Ok(PyGraph {
            inner,
            spec: Some(spec),
        })
    }

    /// Build from an explicit edge list on vertices 0..n-1.
    #[staticmethod]
    fn from_edges(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        let inner = Arc::new(pebbling::Graph::from_edges(n, &edges).map_err(to_py_err)?);
        Ok(PyGraph { inner, spec: None })
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    #[getter]
    fn diameter(&self) -> u32 {
        self.inner.diameter()
    }

    #[getter]
    fn max_degree(&self) -> usize {
        self.inner.max_degree()
    }

    #[getter]
    fn connected(&self) -> bool {
        self.inner.is_connected()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().to_vec()
    }

    fn neighbors(&self, v: usize) -> PyResult<Vec<usize>> {
        self.inner.check_vertex(v).map_err(to_py_err)?;
        Ok(self.inner.neighbors(v).to_vec())
    }

    fn distance(&self, u: usize, v: usize) -> PyResult<Option<u32>> {
        self.inner.check_vertex(u).map_err(to_py_err)?;
        self.inner.check_vertex(v).map_err(to_py_err)?;
        let d = self.inner.distance(u, v);
        Ok((d != pebbling::graph::UNREACHABLE).then_some(d))
    }

    /// Vertices at distance exactly k from v.
    fn neighborhood(&self, v: usize, k: u32) -> PyResult<Vec<usize>> {
        self.inner.neighborhood(v, k).map_err(to_py_err)
    }

    /// ef(v) as an exact (numerator, denominator) pair.
    fn effect(&self, v: usize) -> PyResult<(i64, i64)> {
        Ok(rational_pair(
            bounds::effect(&self.inner, v).map_err(to_py_err)?,
        ))
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(n={}, m={})",
            self.inner.vertex_count(),
            self.inner.edge_count()
        )
    }
}

/// A pebble distribution over a fixed graph. Immutable; moves return new
/// distributions.
#[pyclass(name = "Distribution", frozen)]
struct PyDistribution {
    inner: PebbleDistribution,
}

#[pymethods]
impl PyDistribution {
    /// Build from `(vertex, count)` pairs.
    #[new]
    fn new(graph: &PyGraph, pairs: Vec<(usize, u32)>) -> PyResult<Self> {
        let inner =
            PebbleDistribution::from_pairs(Arc::clone(&graph.inner), &pairs).map_err(to_py_err)?;
        Ok(PyDistribution { inner })
    }

    #[getter]
    fn size(&self) -> u32 {
        self.inner.size()
    }

    fn counts(&self) -> Vec<u32> {
        self.inner.counts().to_vec()
    }

    fn count(&self, v: usize) -> PyResult<u32> {
        self.inner.graph().check_vertex(v).map_err(to_py_err)?;
        Ok(self.inner.count(v))
    }

    /// Apply one pebbling move, returning the new distribution.
    fn apply_move(&self, from: usize, to: usize) -> PyResult<Self> {
        let inner = self
            .inner
            .apply_move(PebblingMove::new(from, to))
            .map_err(to_py_err)?;
        Ok(PyDistribution { inner })
    }

    /// Exact reach(P, v).
    fn reach(&self, v: usize) -> PyResult<u32> {
        self.inner.reach(v).map_err(to_py_err)
    }

    /// Max total pebbles simultaneously placeable on the target set.
    fn reach_set(&self, targets: Vec<usize>) -> PyResult<u32> {
        self.inner.reach_set(&targets).map_err(to_py_err)
    }

    /// Full per-vertex report as a dict: reach, excess, coverage,
    /// total_excess, solvable.
    fn analyze<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, pyo3::types::PyDict>> {
        let report = self.inner.analyze();
        let dict = pyo3::types::PyDict::new(py);
        dict.set_item("reach", report.reach)?;
        dict.set_item("excess", report.excess)?;
        dict.set_item("coverage", report.coverage)?;
        dict.set_item("total_excess", report.total_excess)?;
        dict.set_item("solvable", report.solvable)?;
        Ok(dict)
    }

    /// Units as (vertex, count) pairs, size ascending.
    fn decompose(&self) -> Vec<(usize, u32)> {
        decompose::decompose(&self.inner)
            .into_iter()
            .map(|u| (u.vertex, u.count))
            .collect()
    }

    /// Sum of each unit's total excess in isolation.
    fn unit_excess(&self) -> PyResult<u64> {
        decompose::unit_excess(&self.inner).map_err(to_py_err)
    }

    fn __repr__(&self) -> String {
        format!("Distribution({})", self.inner)
    }
}

/// Cooperation statistics for a disjoint (P, U) pair.
#[pyclass(name = "CooperationReport", frozen)]
struct PyCooperationReport {
    #[pyo3(get)]
    coop: usize,
    #[pyo3(get)]
    dc: usize,
    #[pyo3(get)]
    ce: i64,
    #[pyo3(get)]
    per_vertex_ce: Vec<i64>,
    /// M(v) per vertex; None means not 2-reachable.
    #[pyo3(get)]
    m_values: Vec<Option<u32>>,
    #[pyo3(get)]
    coop_vertices: Vec<usize>,
    #[pyo3(get)]
    dc_vertices: Vec<usize>,
}

#[pymethods]
impl PyCooperationReport {
    fn __repr__(&self) -> String {
        format!(
            "CooperationReport(coop={}, dc={}, ce={})",
            self.coop, self.dc, self.ce
        )
    }
}

/// Cooperation statistics between a distribution and a unit at
/// `unit_vertex` with `unit_count` pebbles.
#[pyfunction]
fn cooperation(
    p: &PyDistribution,
    unit_vertex: usize,
    unit_count: u32,
) -> PyResult<PyCooperationReport> {
    let graph = Arc::clone(p.inner.graph());
    let ud = UnitDistribution::new(unit_vertex, unit_count)
        .to_distribution(graph)
        .map_err(to_py_err)?;
    let report = decompose::cooperation(&p.inner, &ud).map_err(to_py_err)?;
    Ok(PyCooperationReport {
        coop: report.coop,
        dc: report.dc,
        ce: report.ce,
        per_vertex_ce: report.per_vertex_ce,
        m_values: report.m_values.into_iter().map(m_value_opt).collect(),
        coop_vertices: report.coop_vertices,
        dc_vertices: report.dc_vertices,
    })
}

/// M(v) for the pair (P, unit); None when v is not 2-reachable.
#[pyfunction]
fn m_value(
    p: &PyDistribution,
    unit_vertex: usize,
    unit_count: u32,
    v: usize,
) -> PyResult<Option<u32>> {
    let unit = UnitDistribution::new(unit_vertex, unit_count);
    Ok(m_value_opt(
        decompose::m_value(&p.inner, &unit, v).map_err(to_py_err)?,
    ))
}

/// Maximal coopexcess-connected blocks for the pair (P, unit).
#[pyfunction]
fn c_blocks(p: &PyDistribution, unit_vertex: usize, unit_count: u32) -> PyResult<Vec<Vec<usize>>> {
    let unit = UnitDistribution::new(unit_vertex, unit_count);
    decompose::find_c_blocks(&p.inner, &unit).map_err(to_py_err)
}

/// Both decomposition identities evaluated over the sorted units of P;
/// returns a dict with each side and the balance flags.
#[pyfunction]
fn decomposition_identities<'py>(
    py: Python<'py>,
    p: &PyDistribution,
) -> PyResult<Bound<'py, pyo3::types::PyDict>> {
    let id = decompose::decomposition_identities(&p.inner).map_err(to_py_err)?;
    let dict = pyo3::types::PyDict::new(py);
    dict.set_item("te_total", id.te_total)?;
    dict.set_item("te_unit_sum", id.te_unit_sum)?;
    dict.set_item("te_ce_sum", id.te_ce_sum)?;
    dict.set_item("cov_total", id.cov_total)?;
    dict.set_item("cov_unit_sum", id.cov_unit_sum)?;
    dict.set_item("cov_coop_dc_sum", id.cov_coop_dc_sum)?;
    dict.set_item("holds", id.holds())?;
    Ok(dict)
}

/// Build A_0 for (P, unit), run the transformations to fixpoint, and return
/// the audit: initial/final coordinate sums, step count, and per-block
/// inequality results.
#[pyfunction]
#[pyo3(signature = (p, unit_vertex, unit_count, step_limit = 10_000))]
fn transform_audit<'py>(
    py: Python<'py>,
    p: &PyDistribution,
    unit_vertex: usize,
    unit_count: u32,
    step_limit: usize,
) -> PyResult<Bound<'py, pyo3::types::PyDict>> {
    let graph = Arc::clone(p.inner.graph());
    let unit = UnitDistribution::new(unit_vertex, unit_count);
    let a0 = AuxGraph::build_a0(&graph, &p.inner, &unit).map_err(to_py_err)?;
    let run = a0.run_to_fixpoint(step_limit).map_err(to_py_err)?;
    let dict = pyo3::types::PyDict::new(py);
    dict.set_item("initial_sums", run.initial_sums)?;
    dict.set_item("final_sums", run.final_sums)?;
    dict.set_item("steps", run.steps.len())?;
    dict.set_item("saturated_after", run.result.saturated_vertices().len())?;
    let blocks: Vec<(Vec<usize>, u64, u64, u64, bool, bool)> = run
        .result
        .audit_blocks()
        .into_iter()
        .map(|a| {
            (
                a.block,
                a.sum_c1,
                a.sum_c2,
                a.sum_c3,
                a.inequality_holds,
                a.count_bound_holds,
            )
        })
        .collect();
    dict.set_item("blocks", blocks)?;
    dict.set_item("properties_hold", run.result.check_properties().all_hold())?;
    Ok(dict)
}

/// |V|/ef(v) for a vertex-transitive graph, as an exact pair.
#[pyfunction]
fn fractional_bound(graph: &PyGraph) -> PyResult<(i64, i64)> {
    Ok(rational_pair(
        bounds::fractional_bound(&graph.inner).map_err(to_py_err)?,
    ))
}

/// The unit-decomposition bound for a solvable distribution, exact pair.
#[pyfunction]
fn structural_bound(p: &PyDistribution) -> PyResult<(i64, i64)> {
    let graph = Arc::clone(p.inner.graph());
    Ok(rational_pair(
        bounds::structural_bound(&graph, &p.inner).map_err(to_py_err)?,
    ))
}

/// ⌈2mn/13⌉ for m, n >= 5.
#[pyfunction]
fn grid_bound(m: usize, n: usize) -> PyResult<u64> {
    bounds::grid_bound(m, n).map_err(to_py_err)
}

/// ⌈2n/3⌉, the exact optimal pebbling number of P_n and C_n.
#[pyfunction]
fn path_cycle_bound(n: usize) -> u64 {
    bounds::path_cycle_bound(n)
}

/// Torus unit caps/floors: returns ((cov_num, cov_den), (exc_num, exc_den)).
#[pyfunction]
fn unit_estimates(m: usize, n: usize, size: u32) -> PyResult<((i64, i64), (i64, i64))> {
    let est = bounds::unit_estimates(m, n, size).map_err(to_py_err)?;
    Ok((rational_pair(est.cov_cap), rational_pair(est.exc_floor)))
}

/// Write the optimal-pebbling integer program for the graph in LP format.
/// Returns (variables, constraints).
#[pyfunction]
#[pyo3(signature = (graph, path, relax = false))]
fn emit_ilp(graph: &PyGraph, path: &str, relax: bool) -> PyResult<(usize, usize)> {
    let mut file = std::fs::File::create(path).map_err(|e| to_py_err(e.into()))?;
    let summary = bounds::emit_ilp(&graph.inner, &mut file, relax).map_err(to_py_err)?;
    Ok((summary.variables(), summary.constraints))
}

/// Exact optimal pebbling number with a witness.
#[pyclass(name = "SolveResult", frozen)]
struct PySolveResult {
    #[pyo3(get)]
    pi_opt: u32,
    #[pyo3(get)]
    witness: Vec<(usize, u32)>,
    #[pyo3(get)]
    lower_bound_used: u32,
    #[pyo3(get)]
    distributions_tested: u64,
    #[pyo3(get)]
    states_expanded: u64,
}

#[pymethods]
impl PySolveResult {
    fn __repr__(&self) -> String {
        format!(
            "SolveResult(pi_opt={}, witness={:?})",
            self.pi_opt, self.witness
        )
    }
}

/// Solve for the exact optimal pebbling number. `symmetry` uses the
/// automorphisms known for generated families when the graph came from a
/// spec string.
#[pyfunction]
#[pyo3(signature = (graph, symmetry = true, budget_nodes = None, max_size = None))]
fn solve(
    graph: &PyGraph,
    symmetry: bool,
    budget_nodes: Option<u64>,
    max_size: Option<u32>,
) -> PyResult<PySolveResult> {
    let automorphisms = match (&graph.spec, symmetry) {
        (Some(spec), true) => spec.automorphisms(),
        _ => Vec::new(),
    };
    let mut lower_hint = None;
    if let Some(GraphSpec::Torus(m, n)) | Some(GraphSpec::Grid(m, n)) = graph.spec {
        if m >= 5 && n >= 5 {
            lower_hint = Some(bounds::grid_bound(m, n).map_err(to_py_err)? as u32);
        }
    }
    let options = SolveOptions {
        automorphisms,
        lower_hint,
        max_nodes: budget_nodes,
        max_size,
    };
    let result = solver::solve(&graph.inner, &options).map_err(to_py_err)?;
    Ok(PySolveResult {
        pi_opt: result.pi_opt,
        witness: result
            .witness
            .occupied()
            .map(|v| (v, result.witness.count(v)))
            .collect(),
        lower_bound_used: result.lower_bound_used,
        distributions_tested: result.stats.distributions_tested,
        states_expanded: result.stats.states_expanded,
    })
}

/// Whether every vertex is reachable under the distribution.
#[pyfunction]
fn is_solvable(p: &PyDistribution) -> bool {
    solver::is_solvable(p.inner.graph(), &p.inner)
}

/// One (name, passed, checked, violations, messages) row per suite.
type SuiteRow = (String, bool, u64, u64, Vec<String>);

/// Run one verification suite ("all" runs every suite). Returns a list of
/// (name, passed, checked, violations, messages) tuples.
#[pyfunction]
#[pyo3(signature = (suite, max_n = 6, max_pebbles = 4, torus_max = 7, torus_unit_max = 12, solve_max_n = 10, random_graphs = 0, seed = 0x5eed_cafe))]
#[allow(clippy::too_many_arguments)]
fn verify_suite(
    suite: &str,
    max_n: usize,
    max_pebbles: u32,
    torus_max: usize,
    torus_unit_max: u32,
    solve_max_n: usize,
    random_graphs: usize,
    seed: u64,
) -> PyResult<Vec<SuiteRow>> {
    let cfg = SweepConfig {
        max_n,
        max_pebbles,
        torus_max,
        torus_unit_max,
        solve_max_n,
        random_graphs,
        seed,
        ..Default::default()
    };
    let outcomes = verify::run_suite(suite, &cfg).map_err(to_py_err)?;
    Ok(outcomes
        .into_iter()
        .map(|o| {
            (
                o.name.clone(),
                o.passed(),
                o.checked,
                o.violations,
                o.messages,
            )
        })
        .collect())
}

#[pymodule]
fn pebbling_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyGraph>()?;
    m.add_class::<PyDistribution>()?;
    m.add_class::<PyCooperationReport>()?;
    m.add_class::<PySolveResult>()?;
    m.add_function(wrap_pyfunction!(cooperation, m)?)?;
    m.add_function(wrap_pyfunction!(m_value, m)?)?;
    m.add_function(wrap_pyfunction!(c_blocks, m)?)?;
    m.add_function(wrap_pyfunction!(decomposition_identities, m)?)?;
    m.add_function(wrap_pyfunction!(transform_audit, m)?)?;
    m.add_function(wrap_pyfunction!(fractional_bound, m)?)?;
    m.add_function(wrap_pyfunction!(structural_bound, m)?)?;
    m.add_function(wrap_pyfunction!(grid_bound, m)?)?;
    m.add_function(wrap_pyfunction!(path_cycle_bound, m)?)?;
    m.add_function(wrap_pyfunction!(unit_estimates, m)?)?;
    m.add_function(wrap_pyfunction!(emit_ilp, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(is_solvable, m)?)?;
    m.add_function(wrap_pyfunction!(verify_suite, m)?)?;
    Ok(())
}
