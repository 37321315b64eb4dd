use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use serde_json::Value;

use taut_core::cayley::build_ball;
use taut_core::complexes::{is_acyclic, normally_generates, reduced_homology, FlagComplex, OmegaSet};
use taut_core::davis::{semiker_experiment, Instance};
use taut_core::normal_forms::{raag_normal_form_on_graph, tits_reduce};
use taut_core::oracle::{BbOracle, PresentationOracle};
use taut_core::presentation::{build_p, build_raag, build_racg};
use taut_core::schedule::{choose_c, kernel_length_lower_bound, predicted_intervals, qi_obstruction, Constants};
use taut_core::spectrum::{cayley_spectrum, graph_spectrum, k_related as k_related_core, KRelation, LengthSet};
use taut_core::word_engine::{verify_claim as verify_claim_core, Budget, Claim, WordEngine};
use taut_core::{GroupPresentation, SimpleGraph, Word};

create_exception!(taut, TautError, PyException);

fn err(e: impl std::fmt::Display) -> PyErr {
    TautError::new_err(e.to_string())
}

fn budget(spec: Option<&str>) -> PyResult<Budget> {
    spec.map(|s| s.parse::<Budget>().map_err(err)).transpose().map(Option::unwrap_or_default)
}

fn to_py(py: Python<'_>, v: &Value) -> PyResult<Py<PyAny>> {
    Ok(py.import("json")?.call_method1("loads", (v.to_string(),))?.unbind())
}

/// A finite flag complex, given by its 1-skeleton.
#[pyclass(module = "taut", frozen)]
struct Complex {
    inner: FlagComplex,
}

#[pymethods]
impl Complex {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Complex { inner: FlagComplex::from_json(text).map_err(err)? })
    }

    /// Complex on vertices `0..n` with the given edges.
    #[staticmethod]
    fn numbered(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        let graph = SimpleGraph::numbered(n, &edges).map_err(err)?;
        Ok(Complex { inner: taut_core::complexes::flag_completion(&graph) })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn vertices(&self) -> Vec<String> {
        self.inner.graph().names().to_vec()
    }

    #[getter]
    fn dimension(&self) -> Option<usize> {
        self.inner.dimension()
    }

    /// Number of simplices in each dimension.
    fn census(&self) -> Vec<usize> {
        self.inner.census()
    }

    /// Reduced homology in one degree as `(rank, torsion)`.
    fn homology(&self, degree: usize) -> PyResult<(usize, Vec<BigInt>)> {
        let h = reduced_homology(&self.inner, degree).map_err(err)?;
        Ok((h.rank, h.torsion))
    }

    fn is_acyclic(&self) -> bool {
        is_acyclic(&self.inner)
    }

    /// Whether the loops normally generate the fundamental group: "proved",
    /// "refuted" or "unknown".
    #[pyo3(signature = (loops=None, budget=None))]
    fn normally_generates(&self, loops: Option<Vec<Vec<String>>>, budget: Option<&str>) -> PyResult<String> {
        let omega = self.omega(loops)?;
        let claim = normally_generates(&self.inner, &omega, &self::budget(budget)?).map_err(err)?;
        Ok(status_name(&claim))
    }

    fn __repr__(&self) -> String {
        format!("Complex(vertices={}, dimension={:?})", self.inner.vertex_count(), self.inner.dimension())
    }
}

impl Complex {
    fn omega(&self, loops: Option<Vec<Vec<String>>>) -> PyResult<OmegaSet> {
        let doc = serde_json::json!({ "loops": loops.unwrap_or_default() });
        OmegaSet::from_json(&self.inner, &doc.to_string()).map_err(err)
    }
}

fn status_name(claim: &Claim) -> String {
    serde_json::to_value(claim.verdict.status).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default()
}

/// A finite group presentation.
#[pyclass(module = "taut", frozen)]
struct Presentation {
    inner: GroupPresentation,
}

#[pymethods]
impl Presentation {
    #[new]
    fn new(generators: Vec<String>, relators: Vec<Vec<(String, i8)>>) -> PyResult<Self> {
        let free = GroupPresentation::free(generators.clone());
        let relators =
            relators.iter().map(|r| free.word_from_symbols(r)).collect::<Result<Vec<_>, _>>().map_err(err)?;
        Ok(Presentation { inner: GroupPresentation::new(generators, relators).map_err(err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Presentation { inner: GroupPresentation::from_json(text).map_err(err)? })
    }

    /// P(L, Omega, S) for a complex, loops given as vertex cycles, and S.
    #[staticmethod]
    #[pyo3(signature = (complex, loops=None, s=vec![0]))]
    fn p(complex: &Complex, loops: Option<Vec<Vec<String>>>, s: Vec<i64>) -> PyResult<Self> {
        let omega = complex.omega(loops)?;
        let s: BTreeSet<i64> = s.into_iter().collect();
        Ok(Presentation { inner: build_p(&complex.inner, &omega, &s).map_err(err)? })
    }

    #[staticmethod]
    fn raag(complex: &Complex) -> Self {
        Presentation { inner: build_raag(&complex.inner) }
    }

    #[staticmethod]
    fn racg(complex: &Complex) -> Self {
        Presentation { inner: build_racg(complex.inner.graph()) }
    }

    /// The semidirect product presentation of a Davis instance.
    #[staticmethod]
    #[pyo3(signature = (instance_json, budget=None))]
    fn j(instance_json: &str, budget: Option<&str>) -> PyResult<Self> {
        let inst = Instance::from_json(instance_json, &self::budget(budget)?).map_err(err)?;
        Ok(Presentation { inner: inst.j_presentation().map_err(err)? })
    }

    #[getter]
    fn generators(&self) -> Vec<String> {
        self.inner.generators().to_vec()
    }

    #[getter]
    fn relators(&self) -> Vec<Vec<(String, i8)>> {
        self.inner.relators().iter().map(|r| self.inner.word_to_symbols(r)).collect()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn to_gap(&self) -> String {
        self.inner.to_gap()
    }

    /// Claim that a word is trivial, as a dict with its certificate.
    #[pyo3(signature = (word, budget=None))]
    fn is_trivial(&self, py: Python<'_>, word: Vec<(String, i8)>, budget: Option<&str>) -> PyResult<Py<PyAny>> {
        let w = self.inner.word_from_symbols(&word).map_err(err)?;
        let engine = WordEngine::new(self.inner.clone(), self::budget(budget)?);
        let claim = engine.claim(&w).map_err(err)?;
        to_py(py, &serde_json::to_value(&claim).map_err(err)?)
    }

    /// Cayley ball about the identity as a dict.
    #[pyo3(signature = (radius, budget=None))]
    fn ball(&self, py: Python<'_>, radius: usize, budget: Option<&str>) -> PyResult<Py<PyAny>> {
        let oracle = PresentationOracle::new(self.inner.clone(), self::budget(budget)?);
        let ball = build_ball(&oracle, radius).map_err(err)?;
        to_py(py, &ball.to_json())
    }

    fn __repr__(&self) -> String {
        format!("Presentation({} generators, {} relators)", self.inner.generator_count(), self.inner.relators().len())
    }
}

/// Statuses of loop lengths up to a horizon.
#[pyclass(module = "taut", frozen)]
struct Spectrum {
    inner: taut_core::spectrum::Spectrum,
}

#[pymethods]
impl Spectrum {
    #[getter]
    fn horizon(&self) -> usize {
        self.inner.horizon
    }

    fn taut_lengths(&self) -> Vec<usize> {
        self.inner.taut_lengths()
    }

    fn unknown_lengths(&self) -> Vec<usize> {
        self.inner.unknown_lengths()
    }

    /// "taut", "not_taut" or "unknown"; None outside `3..=horizon`.
    fn status(&self, length: usize) -> Option<String> {
        let s = self.inner.status(length)?;
        serde_json::to_value(s).ok()?.as_str().map(str::to_owned)
    }

    /// Replays every certificate; raises on the first failure.
    fn verify(&self) -> PyResult<()> {
        self.inner.verify().map_err(err)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(err)
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }

    fn chart(&self) -> String {
        self.inner.chart()
    }

    fn __repr__(&self) -> String {
        format!("Spectrum(horizon={}, taut={:?})", self.inner.horizon, self.inner.taut_lengths())
    }
}

#[pyfunction]
#[pyo3(signature = (complex, horizon, budget=None))]
fn graph_spectrum_of(complex: &Complex, horizon: usize, budget: Option<&str>) -> PyResult<Spectrum> {
    let inner = graph_spectrum(complex.inner.graph(), horizon, &self::budget(budget)?).map_err(err)?;
    Ok(Spectrum { inner })
}

#[pyfunction]
#[pyo3(signature = (presentation, horizon, budget=None))]
fn group_spectrum(presentation: &Presentation, horizon: usize, budget: Option<&str>) -> PyResult<Spectrum> {
    let b = self::budget(budget)?;
    let oracle = PresentationOracle::new(presentation.inner.clone(), b);
    Ok(Spectrum { inner: cayley_spectrum(&oracle, horizon, &b).map_err(err)? })
}

/// Spectrum of the Bestvina-Brady group of a simply connected complex.
#[pyfunction]
#[pyo3(signature = (complex, horizon, budget=None))]
fn bb_spectrum(complex: &Complex, horizon: usize, budget: Option<&str>) -> PyResult<Spectrum> {
    let b = self::budget(budget)?;
    let oracle = BbOracle::new(complex.inner.clone(), &b).map_err(err)?;
    Ok(Spectrum { inner: cayley_spectrum(&oracle, horizon, &b).map_err(err)? })
}

/// Returns `(True, None)`, `(False, witness)` or `(None, first_unknown)`.
#[pyfunction]
#[pyo3(signature = (first, second, k, horizon_first=None, horizon_second=None))]
fn k_related(
    first: Vec<u64>,
    second: Vec<u64>,
    k: u64,
    horizon_first: Option<u64>,
    horizon_second: Option<u64>,
) -> PyResult<(Option<bool>, Option<BigUint>)> {
    if k == 0 {
        return Err(err("k must be positive"));
    }
    let set = |e: Vec<u64>, h: Option<u64>| match h {
        Some(h) => LengthSet::bounded(e, h),
        None => LengthSet::unbounded(e),
    };
    Ok(match k_related_core(&set(first, horizon_first), &set(second, horizon_second), k) {
        KRelation::Related => (Some(true), None),
        KRelation::NotRelated { witness, .. } => (Some(false), Some(witness)),
        KRelation::UnknownBeyondHorizon { first } => (None, Some(first)),
    })
}

#[pyfunction]
fn least_c(d: u32, beta: BigUint) -> BigUint {
    choose_c(d, &beta)
}

/// Constants and predicted intervals as a dict with decimal strings.
#[pyfunction]
#[pyo3(signature = (d, beta, n_max, c=None))]
fn schedule(py: Python<'_>, d: u32, beta: BigUint, n_max: u32, c: Option<BigUint>) -> PyResult<Py<PyAny>> {
    let c = c.unwrap_or_else(|| choose_c(d, &beta));
    let constants = Constants::new(d, beta, c).map_err(err)?;
    let s = predicted_intervals(&constants, n_max).map_err(err)?;
    to_py(py, &s.to_json())
}

/// Thresholds `C^(2^n - 1)` for n in the symmetric difference.
#[pyfunction]
fn obstruction(f: BTreeSet<u32>, f_prime: BTreeSet<u32>, c: BigUint) -> Vec<(u32, BigUint)> {
    qi_obstruction(&f, &f_prime, &c).into_iter().collect()
}

/// Lower bound on kernel word length as `(ceil, exact)`.
#[pyfunction]
fn kernel_bound(d: u32, s: BTreeSet<BigInt>, t: BTreeSet<BigInt>) -> PyResult<(BigUint, String)> {
    let b = kernel_length_lower_bound(d, &s, &t).map_err(err)?;
    Ok((b.ceil(), b.to_string()))
}

/// Tits normal form of a word in the right-angled Coxeter group of a graph.
#[pyfunction]
fn coxeter_normal_form(complex: &Complex, word: Vec<String>) -> PyResult<Vec<String>> {
    let g = complex.inner.graph();
    let w = word.iter().map(|v| g.index_of(v)).collect::<Result<Vec<_>, _>>().map_err(err)?;
    Ok(tits_reduce(g, &w).map_err(err)?.into_iter().map(|v| g.name(v).to_owned()).collect())
}

/// Normal form of a word in the right-angled Artin group of a graph.
#[pyfunction]
fn artin_normal_form(complex: &Complex, word: Vec<(String, i8)>) -> PyResult<Vec<(String, i8)>> {
    let p = build_raag(&complex.inner);
    let w: Word = p.word_from_symbols(&word).map_err(err)?;
    let nf = raag_normal_form_on_graph(complex.inner.graph(), &w).map_err(err)?;
    Ok(p.word_to_symbols(&nf))
}

/// Replays the certificate of a serialized claim; raises if it is rejected.
#[pyfunction]
fn verify_claim(claim_json: &str) -> PyResult<()> {
    let claim: Claim = serde_json::from_str(claim_json).map_err(err)?;
    verify_claim_core(&claim).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (source_json, target_json, max_len, budget=None))]
fn semiker(
    py: Python<'_>,
    source_json: &str,
    target_json: &str,
    max_len: usize,
    budget: Option<&str>,
) -> PyResult<Py<PyAny>> {
    let b = self::budget(budget)?;
    let s = Instance::from_json(source_json, &b).map_err(err)?;
    let t = Instance::from_json(target_json, &b).map_err(err)?;
    let report = semiker_experiment(&s, &t, max_len).map_err(err)?;
    to_py(py, &serde_json::to_value(&report).map_err(err)?)
}

#[pymodule]
fn taut(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("TautError", m.py().get_type::<TautError>())?;
    m.add_class::<Complex>()?;
    m.add_class::<Presentation>()?;
    m.add_class::<Spectrum>()?;
    m.add_function(wrap_pyfunction!(graph_spectrum_of, m)?)?;
    m.add_function(wrap_pyfunction!(group_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(bb_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(k_related, m)?)?;
    m.add_function(wrap_pyfunction!(least_c, m)?)?;
    m.add_function(wrap_pyfunction!(schedule, m)?)?;
    m.add_function(wrap_pyfunction!(obstruction, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_bound, m)?)?;
    m.add_function(wrap_pyfunction!(coxeter_normal_form, m)?)?;
    m.add_function(wrap_pyfunction!(artin_normal_form, m)?)?;
    m.add_function(wrap_pyfunction!(verify_claim, m)?)?;
    m.add_function(wrap_pyfunction!(semiker, m)?)?;
    Ok(())
}
