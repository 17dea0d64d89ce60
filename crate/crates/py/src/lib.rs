//! Python bindings: graphs, decompositions, thresholds, exact moments, and
//! the second-moment landscape, exposed as the `stardec_py` module.
//!
//! Exact rationals cross the boundary as `"numerator/denominator"` strings
//! and high-precision reals as 50-significant-digit decimal strings, so no
//! precision is lost to float conversion.

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use stardec::decompose::{self, SolveMode, SolveOptions, SolveOutcome, StarDecomposition};
use stardec::highprec as hp;
use stardec::laplace;
use stardec::moments;
use stardec::pairing::{self, Multigraph};
use stardec::thresholds::{self, Params};

fn err(e: stardec::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// An undirected multigraph with stable edge ids (input order).
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct Graph {
    inner: Multigraph,
}

#[pymethods]
impl Graph {
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(Graph {
            inner: Multigraph::new(n, edges).map_err(err)?,
        })
    }

    /// Parses the `n m` / edge-list text format.
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(Graph {
            inner: Multigraph::from_text(text).map_err(err)?,
        })
    }

    /// Samples a d-regular multigraph from the configuration model; with
    /// `simple`, rejection-samples until no loops or parallel edges remain.
    #[staticmethod]
    #[pyo3(signature = (n, d, seed, simple = false, max_tries = 5_000_000))]
    fn sample(n: usize, d: usize, seed: u64, simple: bool, max_tries: u64) -> PyResult<Self> {
        let inner = if simple {
            pairing::sample_simple_graph(n, d, seed, max_tries).map_err(err)?
        } else {
            pairing::sample_pairing(n, d, seed).map_err(err)?.multigraph()
        };
        Ok(Graph { inner })
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().to_vec()
    }

    fn degrees(&self) -> Vec<usize> {
        self.inner.degrees()
    }

    fn is_simple(&self) -> bool {
        self.inner.is_simple()
    }

    /// Counts of cycles of length 1..=m (loops, parallel pairs, triangles, ...).
    fn count_cycles(&self, m: usize) -> Vec<u64> {
        pairing::count_cycles(&self.inner, m)
    }

    /// Exact maximum independent set size (branch and bound, capped at 60
    /// vertices).
    fn independence_number(&self) -> PyResult<usize> {
        decompose::independence_number(&self.inner).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, m={})", self.inner.n(), self.inner.m())
    }
}

/// A k-star decomposition: a list of (center, edge ids) stars covering
/// every edge exactly once.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct Decomposition {
    inner: StarDecomposition,
}

#[pymethods]
impl Decomposition {
    #[getter]
    fn stars(&self) -> Vec<(usize, Vec<usize>)> {
        self.inner.stars.clone()
    }

    /// One star per line: `center: e_1 e_2 ... e_k`.
    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(Decomposition {
            inner: StarDecomposition::from_text(text).map_err(err)?,
        })
    }

    fn __len__(&self) -> usize {
        self.inner.stars.len()
    }

    fn __repr__(&self) -> String {
        format!("Decomposition(stars={})", self.inner.stars.len())
    }
}

/// Largest k whose decomposition-count second moment stays bounded: the
/// method's existence threshold for degree d.
#[pyfunction]
fn ksscm(d: i64) -> PyResult<i64> {
    thresholds::compute_ksscm(d).map_err(err)
}

/// Largest k with expected decomposition count growing to infinity.
#[pyfunction]
fn kplus(d: i64) -> PyResult<i64> {
    thresholds::compute_kplus(d).map_err(err)
}

/// Variance condition (2k-d)^2 < 4k-d-2.
#[pyfunction]
fn check_p2(d: i64, k: i64) -> PyResult<bool> {
    Ok(thresholds::check_p2(&Params::new(d, k).map_err(err)?))
}

/// Unique-root condition for the certificate series on its window.
#[pyfunction]
fn check_p1(d: i64, k: i64) -> PyResult<bool> {
    thresholds::check_p1(&Params::new(d, k).map_err(err)?).map_err(err)
}

/// Growth base of the expected decomposition count: 50-digit decimal plus
/// the exact sign of c - 1.
#[pyfunction]
fn c_value(d: i64, k: i64) -> PyResult<(String, bool)> {
    let c = thresholds::c_value(&Params::new(d, k).map_err(err)?).map_err(err)?;
    Ok((c.decimal, c.gt_one))
}

/// Number of perfect matchings of 2a points: (2a-1)!!.
#[pyfunction]
fn m_pairings(a: u64) -> BigInt {
    pairing::m_pairings(a)
}

/// Exact expected number of k-star decompositions of the random d-regular
/// pairing multigraph on n cells, as a rational string.
#[pyfunction]
fn exact_ey(n: i64, d: i64, k: i64) -> PyResult<String> {
    Ok(moments::exact_ey(n, d, k).map_err(err)?.to_string())
}

/// Exact second moment of the decomposition count, as a rational string.
#[pyfunction]
#[pyo3(signature = (n, d, k, cap = None))]
fn exact_ey2(n: i64, d: i64, k: i64, cap: Option<u64>) -> PyResult<String> {
    Ok(moments::exact_ey2(n, d, k, cap).map_err(err)?.to_string())
}

/// Exact expected number of independent s-sets, as a rational string.
#[pyfunction]
fn exact_ez(n: i64, d: i64, s: i64) -> PyResult<String> {
    Ok(moments::exact_ez(n, d, s).map_err(err)?.to_string())
}

/// Limit of E Y^2 / (E Y)^2: sqrt((d-1)/(4k-d-2-(2k-d)^2)), 50 digits.
#[pyfunction]
fn variance_ratio_limit(d: i64, k: i64) -> PyResult<String> {
    Ok(hp::to_sig_string(
        &moments::variance_ratio_limit(d, k).map_err(err)?,
        50,
    ))
}

/// Landscape value at the interior stationary point, 50 digits.
#[pyfunction]
fn phi_bstar(d: i64, k: i64) -> PyResult<String> {
    Ok(hp::to_sig_string(
        &laplace::phi_bstar_closed(d, k).map_err(err)?,
        50,
    ))
}

/// Exact determinant of the negated Hessian at the stationary point, as a
/// rational string.
#[pyfunction]
fn det_neg_hessian(d: i64, k: i64) -> PyResult<String> {
    Ok(laplace::det_negh_closed(d, k).map_err(err)?.to_string())
}

/// Decides or constructs a k-star decomposition. Returns (status,
/// decomposition) where status is "found", "proven-none", or "unknown".
#[pyfunction]
#[pyo3(signature = (graph, k, mode = "auto", seed = 0, node_cap = 5_000_000))]
fn solve(
    graph: &Graph,
    k: usize,
    mode: &str,
    seed: u64,
    node_cap: u64,
) -> PyResult<(String, Option<Decomposition>)> {
    let mode = match mode {
        "exact" => SolveMode::Exact,
        "heuristic" => SolveMode::Heuristic,
        "auto" => SolveMode::Auto,
        other => {
            return Err(PyValueError::new_err(format!(
                "mode must be exact, heuristic, or auto, got {other:?}"
            )))
        }
    };
    let opts = SolveOptions {
        mode,
        time_limit: None,
        seed,
        node_cap,
    };
    match decompose::solve(&graph.inner, k, &opts).map_err(err)? {
        SolveOutcome::Found(s) => Ok(("found".into(), Some(Decomposition { inner: s }))),
        SolveOutcome::ProvenNone => Ok(("proven-none".into(), None)),
        SolveOutcome::Unknown { .. } => Ok(("unknown".into(), None)),
    }
}

/// True iff the decomposition partitions the graph's edges into k-stars.
#[pyfunction]
fn verify(graph: &Graph, decomposition: &Decomposition, k: usize) -> bool {
    decompose::verify(&graph.inner, &decomposition.inner, k)
}

/// Eulerian-circuit decomposition for connected graphs with k | deg(v)/2
/// everywhere.
#[pyfunction]
fn eulerian_stars(graph: &Graph, k: usize) -> PyResult<Decomposition> {
    Ok(Decomposition {
        inner: decompose::eulerian_stars(&graph.inner, k).map_err(err)?,
    })
}

/// Spanning-tree 2-star decomposition for connected graphs with an even
/// number of edges.
#[pyfunction]
fn two_star_decompose(graph: &Graph) -> PyResult<Decomposition> {
    Ok(Decomposition {
        inner: decompose::two_star_decompose(&graph.inner).map_err(err)?,
    })
}

/// Heads of an orientation realizing the given in-degree targets, or None.
#[pyfunction]
fn orientation_feasible(graph: &Graph, targets: Vec<usize>) -> PyResult<Option<Vec<usize>>> {
    Ok(decompose::orientation_feasible(&graph.inner, &targets)
        .map_err(err)?
        .map(|o| o.heads))
}

/// Wilson 95% score interval for successes out of total.
#[pyfunction]
fn wilson_interval(successes: u64, total: u64) -> (f64, f64) {
    stardec::experiments::wilson_interval(successes, total)
}

#[pymodule]
fn stardec_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Graph>()?;
    m.add_class::<Decomposition>()?;
    m.add_function(wrap_pyfunction!(ksscm, m)?)?;
    m.add_function(wrap_pyfunction!(kplus, m)?)?;
    m.add_function(wrap_pyfunction!(check_p2, m)?)?;
    m.add_function(wrap_pyfunction!(check_p1, m)?)?;
    m.add_function(wrap_pyfunction!(c_value, m)?)?;
    m.add_function(wrap_pyfunction!(m_pairings, m)?)?;
    m.add_function(wrap_pyfunction!(exact_ey, m)?)?;
    m.add_function(wrap_pyfunction!(exact_ey2, m)?)?;
    m.add_function(wrap_pyfunction!(exact_ez, m)?)?;
    m.add_function(wrap_pyfunction!(variance_ratio_limit, m)?)?;
    m.add_function(wrap_pyfunction!(phi_bstar, m)?)?;
    m.add_function(wrap_pyfunction!(det_neg_hessian, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(eulerian_stars, m)?)?;
    m.add_function(wrap_pyfunction!(two_star_decompose, m)?)?;
    m.add_function(wrap_pyfunction!(orientation_feasible, m)?)?;
    m.add_function(wrap_pyfunction!(wilson_interval, m)?)?;
    Ok(())
}
