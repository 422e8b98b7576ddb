//! Python bindings for `pgfr`.
//!
//! Vertex labels follow the Rust crate: 1-based on paths, 0-based on cycles
//! and matrix graphs.

use num_bigint::BigInt;
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use pgfr::classify::{self, PathRules};
use pgfr::cospectrality::{strong_fractional_cospectrality, CospectralityOutcome, Group};
use pgfr::dynamics::{self, SearchParams};
use pgfr::spectra::{self, SpectralDecomposition};
use pgfr::walks;
use pgfr::{decide_pair, Family, Graph as CoreGraph, GraphSpec};

fn err(e: pgfr::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rules(name: &str) -> PyResult<PathRules> {
    name.parse().map_err(err)
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Path => "path",
        Family::Cycle => "cycle",
        Family::General => "general",
    }
}

/// Eigenvalue labels of the eigenspaces that satisfy `pick`.
fn labels(spec: &SpectralDecomposition, grouping: &[Group], pick: fn(Group) -> bool) -> Vec<i64> {
    (0..spec.len()).filter(|&k| pick(grouping[k])).map(|k| spec.label(k)).collect()
}

#[pyclass(frozen, get_all, module = "pgfr_py")]
struct Eigenvalue {
    label: i64,
    value: f64,
    multiplicity: usize,
    /// `2*cos(2*pi*a/N)` when known in closed form.
    exact: Option<String>,
}

#[pymethods]
impl Eigenvalue {
    fn __repr__(&self) -> String {
        format!("Eigenvalue(label={}, value={}, multiplicity={})", self.label, self.value, self.multiplicity)
    }
}

#[pyclass(frozen, get_all, module = "pgfr_py")]
struct Cospectrality {
    /// `strong`, `fractional` or `none`.
    status: String,
    c: Option<f64>,
    pi1: Vec<i64>,
    pi2: Vec<i64>,
    zero: Vec<i64>,
}

#[pyclass(frozen, get_all, module = "pgfr_py")]
struct Verdict {
    status: String,
    is_pgfr: bool,
    proj_gcd: Option<BigInt>,
    /// `(eigenvalue label, coefficient)` pairs of the relation that rules
    /// revival out.
    witness: Option<Vec<(i64, BigInt)>>,
}

#[pymethods]
impl Verdict {
    fn __repr__(&self) -> String {
        format!("Verdict(status={:?}, proj_gcd={:?})", self.status, self.proj_gcd.as_ref().map(|q| q.to_string()))
    }
}

#[pyclass(frozen, get_all, module = "pgfr_py")]
struct Revival {
    t_best: f64,
    leakage: f64,
    coarse_leakage: f64,
    transfer: f64,
    stay: f64,
    block: Vec<Vec<Complex64>>,
}

#[pyclass(frozen, module = "pgfr_py")]
struct Graph {
    inner: CoreGraph,
    spec: SpectralDecomposition,
}

impl Graph {
    fn wrap(inner: CoreGraph) -> Self {
        let spec = spectra::spectrum(&inner);
        Graph { inner, spec }
    }

    fn pair(&self, u: i64, v: i64) -> PyResult<(usize, usize)> {
        let a = self.inner.index_of(u).map_err(err)?;
        let b = self.inner.index_of(v).map_err(err)?;
        if a == b {
            return Err(PyValueError::new_err("u and v must differ"));
        }
        Ok((a, b))
    }
}

#[pymethods]
impl Graph {
    #[staticmethod]
    fn path(n: usize) -> PyResult<Self> {
        CoreGraph::path(n).map(Graph::wrap).map_err(err)
    }

    #[staticmethod]
    fn cycle(n: usize) -> PyResult<Self> {
        CoreGraph::cycle(n).map(Graph::wrap).map_err(err)
    }

    #[staticmethod]
    fn from_matrix(rows: Vec<Vec<f64>>) -> PyResult<Self> {
        CoreGraph::from_weights(&rows).map(Graph::wrap).map_err(err)
    }

    /// `path:N`, `cycle:N` or `file:PATH`.
    #[staticmethod]
    fn parse(spec: &str) -> PyResult<Self> {
        let spec: GraphSpec = spec.parse().map_err(err)?;
        spec.build().map(Graph::wrap).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn family(&self) -> &'static str {
        family_name(self.inner.family())
    }

    fn adjacency(&self) -> Vec<Vec<f64>> {
        self.inner.rows()
    }

    fn spectrum(&self) -> Vec<Eigenvalue> {
        self.spec
            .eigenspaces()
            .iter()
            .enumerate()
            .map(|(k, e)| Eigenvalue {
                label: self.spec.label(k),
                value: e.numeric(),
                multiplicity: e.multiplicity,
                exact: e.value.exact().map(|c| c.to_string()),
            })
            .collect()
    }

    /// `[(A^k(u,u), A^k(v,v), A^k(u,v)) for k in 0..=kmax]`.
    fn walk_counts(&self, u: i64, v: i64, kmax: usize) -> PyResult<Vec<(BigInt, BigInt, BigInt)>> {
        let (a, b) = self.pair(u, v)?;
        walks::pair_series(&self.inner, a, b, kmax).map_err(err)
    }

    /// The walk constant `c` as a string fraction, or `None`.
    fn walk_constant(&self, u: i64, v: i64) -> PyResult<Option<String>> {
        let (a, b) = self.pair(u, v)?;
        Ok(walks::walk_cospectrality(&self.inner, a, b).map_err(err)?.map(|c| c.to_string()))
    }

    fn cospectral(&self, u: i64, v: i64) -> PyResult<Cospectrality> {
        let (a, b) = self.pair(u, v)?;
        let outcome = strong_fractional_cospectrality(&self.spec, a, b);
        let (pi1, pi2, zero, c) = match &outcome {
            CospectralityOutcome::NotCospectral(_) => (vec![], vec![], vec![], None),
            o => {
                let cert = o.certificate().unwrap();
                let g = &cert.grouping;
                (
                    labels(&self.spec, g, Group::in_pi1),
                    labels(&self.spec, g, Group::in_pi2),
                    labels(&self.spec, g, |x| x == Group::Zero),
                    Some(cert.c),
                )
            }
        };
        Ok(Cospectrality { status: outcome.status().to_string(), c, pi1, pi2, zero })
    }

    /// Exact revival decision; needs a path or cycle spectrum.
    fn decide(&self, u: i64, v: i64) -> PyResult<Verdict> {
        let (a, b) = self.pair(u, v)?;
        let verdict = decide_pair(&self.spec, a, b).map_err(err)?;
        Ok(Verdict {
            status: verdict.status.to_string(),
            is_pgfr: verdict.status.is_pgfr(),
            proj_gcd: verdict.proj_gcd.clone(),
            witness: verdict.witness.map(|w| w.into_iter().map(|t| (t.label, t.coefficient)).collect()),
        })
    }

    /// `U(t) = exp(itA)` as nested lists of complex numbers.
    fn evolve(&self, t: f64) -> Vec<Vec<Complex64>> {
        let n = self.inner.n();
        dynamics::evolve(&self.spec, t).chunks(n).map(<[Complex64]>::to_vec).collect()
    }

    fn leakage(&self, u: i64, v: i64, t: f64) -> PyResult<f64> {
        let (a, b) = self.pair(u, v)?;
        Ok(dynamics::leakage(&self.spec, a, b, t))
    }

    /// Best near-revival time on `(0, t_max]`, or `None` when no grid time
    /// reaches the transfer floor `theta`.
    #[pyo3(signature = (u, v, t_max = 1e3, grid_step = 0.01, theta = 0.05))]
    fn search_revival(&self, u: i64, v: i64, t_max: f64, grid_step: f64, theta: f64) -> PyResult<Option<Revival>> {
        let (a, b) = self.pair(u, v)?;
        if !(t_max > 0.0 && grid_step > 0.0 && (0.0..1.0).contains(&theta)) {
            return Err(PyValueError::new_err("need t_max > 0, grid_step > 0 and 0 <= theta < 1"));
        }
        let params = SearchParams { t_max, grid_step, transfer_floor: theta, ..SearchParams::default() };
        Ok(dynamics::search_revival(&self.spec, a, b, &params).report().map(|r| Revival {
            t_best: r.t_best,
            leakage: r.leakage,
            coarse_leakage: r.coarse_leakage,
            transfer: r.transfer,
            stay: r.stay,
            block: r.block.iter().map(|row| row.to_vec()).collect(),
        }))
    }

    fn __repr__(&self) -> String {
        format!("Graph(family={:?}, n={})", self.family(), self.inner.n())
    }
}

/// Closed-form verdict for a path pair: `(pgfr, rule_id)`.
#[pyfunction]
#[pyo3(signature = (n, u, v, rules = "published"))]
fn classify_path(n: usize, u: usize, v: usize, rules: &str) -> PyResult<(bool, String)> {
    let r = classify::classify_path(n, u, v, self::rules(rules)?).map_err(err)?;
    Ok((r.pgfr, r.rule_id.to_string()))
}

/// Closed-form verdict for a cycle pair: `(pgfr, rule_id)`.
#[pyfunction]
fn classify_cycle(n: usize, a: usize, b: usize) -> PyResult<(bool, String)> {
    let r = classify::classify_cycle(n, a, b).map_err(err)?;
    Ok((r.pgfr, r.rule_id.to_string()))
}

/// Disagreements between the closed form and the exact decision, as
/// `(n, u, v, closed_form, exact_status)`.
#[pyfunction]
#[pyo3(signature = (family, n_max, rules = "published"))]
fn crosscheck(py: Python<'_>, family: &str, n_max: usize, rules: &str) -> PyResult<Vec<(usize, usize, usize, bool, String)>> {
    let family = match family {
        "path" => Family::Path,
        "cycle" => Family::Cycle,
        other => return Err(PyValueError::new_err(format!("unknown family {other:?}"))),
    };
    let rules = self::rules(rules)?;
    let report = py.detach(|| classify::crosscheck(family, n_max, rules)).map_err(err)?;
    Ok(report
        .mismatches
        .into_iter()
        .map(|m| (m.n, m.pair.0, m.pair.1, m.closed_form, m.exact.to_string()))
        .collect())
}

#[pymodule]
fn pgfr_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Graph>()?;
    m.add_class::<Eigenvalue>()?;
    m.add_class::<Cospectrality>()?;
    m.add_class::<Verdict>()?;
    m.add_class::<Revival>()?;
    m.add_function(wrap_pyfunction!(classify_path, m)?)?;
    m.add_function(wrap_pyfunction!(classify_cycle, m)?)?;
    m.add_function(wrap_pyfunction!(crosscheck, m)?)?;
    Ok(())
}
