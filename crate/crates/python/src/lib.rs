//! Python bindings. Functions and certificates are wrapped as classes; reports
//! come back as plain dicts with the same fields as the CLI JSON.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyAny;
use serde::Serialize;

use senslab::certgraph::{
    build_graph, build_instance_at_max, classify_components, pigeonhole_bound,
    verify_adjacency_lemma, verify_main_theorem, verify_weight_lemma, SubgraphMode,
    MAX_EXHAUSTIVE_ORDER,
};
use senslab::constructions::{self, Construction};
use senslab::search::{self, Constraints, SweepMode};
use senslab::witness as engine;
use senslab::{measures, InputWord};

create_exception!(pysenslab, SenslabError, PyValueError);

fn err(e: senslab::Error) -> PyErr {
    SenslabError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| SenslabError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

#[pyclass(name = "BooleanFunction", module = "pysenslab", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyFunction(senslab::BooleanFunction);

#[pyclass(name = "Certificate", module = "pysenslab", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyCertificate(senslab::Certificate);

impl PyFunction {
    fn word(&self, word: &str) -> PyResult<InputWord> {
        let x: InputWord = word.parse().map_err(err)?;
        if x.n() != self.0.n() {
            return Err(err(senslab::Error::DimensionMismatch {
                expected: self.0.n(),
                found: x.n(),
            }));
        }
        Ok(x)
    }
}

#[pymethods]
impl PyFunction {
    /// Parses a hex truth table, most significant nibble first.
    #[new]
    fn new(tt_hex: &str, n: usize) -> PyResult<Self> {
        senslab::BooleanFunction::from_hex(tt_hex, n).map(Self).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn tt_hex(&self) -> String {
        self.0.to_hex()
    }

    /// Value at a 0/1 word, position 1 leftmost.
    fn __call__(&self, word: &str) -> PyResult<bool> {
        self.0.evaluate(self.word(word)?).map_err(err)
    }

    fn get(&self, index: u32) -> PyResult<bool> {
        if index >= self.0.num_inputs() {
            return Err(SenslabError::new_err(format!("index {index} out of range")));
        }
        Ok(self.0.get(index))
    }

    fn profile<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &measures::profile(&self.0).map_err(err)?)
    }

    fn input_measures<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &measures::input_measures(&self.0).map_err(err)?)
    }

    fn sensitivity(&self, word: &str) -> PyResult<u32> {
        measures::sensitivity_at(&self.0, self.word(word)?).map_err(err)
    }

    fn block_sensitivity(&self, word: &str) -> PyResult<u32> {
        measures::block_sensitivity_at(&self.0, self.word(word)?).map_err(err)
    }

    fn certificate(&self, word: &str) -> PyResult<PyCertificate> {
        measures::certificate_at(&self.0, self.word(word)?)
            .map(PyCertificate)
            .map_err(err)
    }

    fn canonical_form(&self) -> Self {
        Self(search::canonical_form(&self.0))
    }

    fn __repr__(&self) -> String {
        format!("BooleanFunction('{}', n={})", self.0.to_hex(), self.0.n())
    }
}

#[pymethods]
impl PyCertificate {
    /// Parses a `{0,1,*}` string, position 1 leftmost.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        text.parse().map(Self).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn positions(&self) -> Vec<usize> {
        self.0.positions()
    }

    fn value_at(&self, position: usize) -> Option<bool> {
        self.0.value_at(position)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Certificate('{}')", self.0)
    }
}

fn unwrap_certs(certs: &[PyCertificate]) -> Vec<senslab::Certificate> {
    certs.iter().map(|c| c.0).collect()
}

fn construction(c: Construction) -> (PyFunction, Vec<PyCertificate>) {
    (
        PyFunction(c.function),
        c.certificates.into_iter().map(PyCertificate).collect(),
    )
}

#[pyfunction]
fn g0(k: usize) -> PyResult<(PyFunction, Vec<PyCertificate>)> {
    constructions::g0(k).map(construction).map_err(err)
}

#[pyfunction]
fn or_compose_g0(m: usize, r: usize) -> PyResult<(PyFunction, Vec<PyCertificate>)> {
    constructions::or_compose_g0(m, r).map(construction).map_err(err)
}

#[pyfunction]
fn or_of_certificates(certs: Vec<PyCertificate>) -> PyResult<PyFunction> {
    let certs = unwrap_certs(&certs);
    let n = certs
        .first()
        .map(|c| c.n())
        .ok_or_else(|| SenslabError::new_err("need at least one certificate"))?;
    constructions::or_of_certificates(n, &certs)
        .map(PyFunction)
        .map_err(err)
}

#[pyfunction]
fn main_theorem<'py>(py: Python<'py>, f: &PyFunction) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &verify_main_theorem(&f.0).map_err(err)?)
}

/// Contradiction graph of the instance at a 0-input of maximum bs, with the
/// weight, adjacency and pigeonhole checks.
#[pyfunction]
#[pyo3(signature = (f, samples = 100_000, seed = 0))]
fn graph<'py>(py: Python<'py>, f: &PyFunction, samples: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let inst = build_instance_at_max(&f.0).map_err(err)?;
    let s0 = measures::profile(&inst.function).map_err(err)?.s0.unwrap_or(0);
    let g = build_graph(&inst);
    let mode = if g.order() <= MAX_EXHAUSTIVE_ORDER {
        SubgraphMode::AllSubgraphs
    } else {
        SubgraphMode::Sampled { samples, seed }
    };
    let report = serde_json::json!({
        "instance": inst,
        "graph": g,
        "components": classify_components(&g),
        "weight_lemma": verify_weight_lemma(&g, s0, mode).map_err(err)?,
        "adjacency_lemma": verify_adjacency_lemma(&g, s0).map_err(err)?,
        "pigeonhole": pigeonhole_bound(&inst),
    });
    to_py(py, &report)
}

#[pyfunction]
fn witness<'py>(py: Python<'py>, f: &PyFunction, certs: Vec<PyCertificate>) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &engine::witness_sensitive_input(&f.0, &unwrap_certs(&certs)).map_err(err)?)
}

#[pyfunction]
fn reduce_overlaps<'py>(py: Python<'py>, f: &PyFunction, certs: Vec<PyCertificate>) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &engine::reduce_overlaps(&f.0, &unwrap_certs(&certs)).map_err(err)?)
}

#[pyfunction]
fn verify_lemma3<'py>(py: Python<'py>, f: &PyFunction, certs: Vec<PyCertificate>) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &engine::verify_lemma3(&f.0, &unwrap_certs(&certs)).map_err(err)?)
}

/// Exhaustive sweep when `samples` is None, otherwise seeded random sampling.
#[pyfunction]
#[pyo3(signature = (n, samples = None, seed = 0))]
fn sweep<'py>(py: Python<'py>, n: usize, samples: Option<u64>, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let mode = match samples {
        None => SweepMode::Exhaustive,
        Some(samples) => SweepMode::Random { samples, seed },
    };
    let report = py.detach(|| search::sweep(n, mode)).map_err(err)?;
    to_py(py, &report)
}

#[pyfunction]
#[pyo3(signature = (n, s0 = None, bs0 = None, s1 = None, c1 = None))]
fn extremal_search<'py>(
    py: Python<'py>,
    n: usize,
    s0: Option<u32>,
    bs0: Option<u32>,
    s1: Option<u32>,
    c1: Option<u32>,
) -> PyResult<Bound<'py, PyAny>> {
    let constraints = Constraints { s0, bs0, s1, c1 };
    let result = py.detach(|| search::extremal_search(n, constraints)).map_err(err)?;
    to_py(py, &result)
}

#[pyfunction]
fn conjecture<'py>(py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyAny>> {
    let report = py.detach(|| search::conjecture_report(n)).map_err(err)?;
    to_py(py, &report)
}

#[pymodule]
fn pysenslab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SenslabError", m.py().get_type::<SenslabError>())?;
    m.add_class::<PyFunction>()?;
    m.add_class::<PyCertificate>()?;
    m.add_function(wrap_pyfunction!(g0, m)?)?;
    m.add_function(wrap_pyfunction!(or_compose_g0, m)?)?;
    m.add_function(wrap_pyfunction!(or_of_certificates, m)?)?;
    m.add_function(wrap_pyfunction!(main_theorem, m)?)?;
    m.add_function(wrap_pyfunction!(graph, m)?)?;
    m.add_function(wrap_pyfunction!(witness, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_overlaps, m)?)?;
    m.add_function(wrap_pyfunction!(verify_lemma3, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(extremal_search, m)?)?;
    m.add_function(wrap_pyfunction!(conjecture, m)?)?;
    Ok(())
}
