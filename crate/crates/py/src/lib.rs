//! Python bindings for the `semham` core library.

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use semham::io::EmbeddingFile;
use semham::{ErrorKind, QuantumState, RunConfig};

fn to_py(e: semham::Error) -> PyErr {
    match e.kind() {
        ErrorKind::Io => PyOSError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// Unit-norm embedding vector. The constructor normalizes its input.
#[pyclass(name = "EmbeddingVector", frozen, from_py_object)]
#[derive(Clone)]
struct PyEmbedding(semham::EmbeddingVector);

#[pymethods]
impl PyEmbedding {
    #[new]
    #[pyo3(signature = (values, id=None, text=None))]
    fn new(values: Vec<f64>, id: Option<String>, text: Option<String>) -> PyResult<Self> {
        let mut v = semham::EmbeddingVector::normalize(&values).map_err(to_py)?;
        if let Some(id) = id {
            v = v.with_id(id);
        }
        if let Some(text) = text {
            v = v.with_text(text);
        }
        Ok(PyEmbedding(v))
    }

    #[getter]
    fn values(&self) -> Vec<f64> {
        self.0.to_vec()
    }

    #[getter]
    fn id(&self) -> Option<&str> {
        self.0.id()
    }

    #[getter]
    fn text(&self) -> Option<&str> {
        self.0.text()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn norm(&self) -> f64 {
        self.0.norm()
    }

    /// The maximally dissimilar partner `-a`.
    fn negated(&self) -> Self {
        PyEmbedding(self.0.negated())
    }

    fn __len__(&self) -> usize {
        self.0.dim()
    }

    fn __repr__(&self) -> String {
        format!("EmbeddingVector(dim={}, id={:?})", self.0.dim(), self.0.id())
    }
}

#[pyfunction]
fn cosine_similarity(a: &PyEmbedding, b: &PyEmbedding) -> PyResult<f64> {
    Ok(semham::cosine_similarity(&a.0, &b.0).map_err(to_py)?.value())
}

/// `(1 + s) / 2`
#[pyfunction]
fn transform_similarity(s: f64) -> PyResult<f64> {
    let s = semham::SimilarityScore::new(s).map_err(to_py)?;
    Ok(s.transformed().value())
}

fn perturbation_dict<'py>(py: Python<'py>, r: &semham::PerturbationResult) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("similarity", r.similarity.value())?;
    d.set_item("transformed", r.transformed().value())?;
    d.set_item("epsilon", r.epsilon)?;
    d.set_item("scale", r.profile.scale)?;
    d.set_item("delta", r.profile.delta.clone())?;
    d.set_item("active_dims", r.profile.active_dims.clone())?;
    d.set_item("perturbed", PyEmbedding(r.perturbed.clone()))?;
    Ok(d)
}

#[pyfunction]
fn smallest_perturbation<'py>(py: Python<'py>, a: &PyEmbedding) -> PyResult<Bound<'py, PyDict>> {
    perturbation_dict(py, &semham::smallest_perturbation(&a.0).map_err(to_py)?)
}

#[pyfunction]
fn general_similarity<'py>(py: Python<'py>, a: &PyEmbedding, v: Vec<f64>) -> PyResult<Bound<'py, PyDict>> {
    perturbation_dict(py, &semham::general_similarity(&a.0, &v).map_err(to_py)?)
}

/// Dense matrix rows of the reflection taking `a` to `b`.
#[pyfunction]
fn householder_transition(a: &PyEmbedding, b: &PyEmbedding) -> PyResult<Vec<Vec<f64>>> {
    Ok(semham::householder_transition(&a.0, &b.0).map_err(to_py)?.matrix().to_rows())
}

#[pyfunction]
fn run_indirect_experiment<'py>(
    py: Python<'py>,
    v1: &PyEmbedding,
    v2: &PyEmbedding,
    v3: &PyEmbedding,
) -> PyResult<Bound<'py, PyDict>> {
    let r = semham::run_indirect_experiment(&v1.0, &v2.0, &v3.0).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("direct_similarity", r.direct_similarity.value())?;
    d.set_item("indirect_similarity", r.indirect_similarity.value())?;
    d.set_item("constraint_12", r.constraint_12)?;
    d.set_item("constraint_23", r.constraint_23)?;
    d.set_item("discrepancy", r.discrepancy)?;
    d.set_item("endpoint_error", r.endpoint_error)?;
    Ok(d)
}

/// Eigenvalues and eigenvectors (as a list of vectors) of `vvᵀ/‖v‖²`.
#[pyfunction]
fn diagonalize(v: Vec<f64>) -> PyResult<(Vec<f64>, Vec<Vec<f64>>)> {
    let dec = semham::diagonalize(&semham::build_rank_one(&v).map_err(to_py)?);
    let vectors = (0..dec.dim()).map(|k| dec.eigenvector(k)).collect();
    Ok((dec.eigenvalues, vectors))
}

type Sample = (f64, f64, f64, f64, f64);

/// Rows `(t, re_c1, im_c1, static_sum, expectation)` on a uniform grid.
#[pyfunction]
#[pyo3(signature = (amplitudes, energies=None, hbar=1.0, t0=0.0, t1=20.0, steps=200))]
fn trajectory(
    amplitudes: Vec<f64>,
    energies: Option<Vec<f64>>,
    hbar: f64,
    t0: f64,
    t1: f64,
    steps: usize,
) -> PyResult<Vec<Sample>> {
    let state = match energies {
        Some(e) => QuantumState::new(amplitudes, e, hbar),
        None => QuantumState::rank_one(amplitudes, hbar),
    }
    .map_err(to_py)?;
    let samples = semham::trajectory(&state, t0, t1, steps).map_err(to_py)?;
    Ok(samples
        .iter()
        .map(|s| (s.t, s.re_c1, s.im_c1, s.static_sum, s.expectation))
        .collect())
}

#[pyfunction]
fn zero_point<'py>(py: Python<'py>, a: &PyEmbedding, candidates: Vec<Vec<f64>>) -> PyResult<Bound<'py, PyDict>> {
    let z = semham::zero_point(&a.0, &candidates).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("epsilon", z.epsilon)?;
    d.set_item("a1", z.a1)?;
    d.set_item("argmin_v", z.argmin_v)?;
    d.set_item("argmin_index", z.argmin_index)?;
    d.set_item("skipped", z.skipped)?;
    Ok(d)
}

/// Vectors from a semham-emb/1 file, renormalizing entries within the load tolerance.
#[pyfunction]
fn load_embeddings(path: std::path::PathBuf) -> PyResult<Vec<PyEmbedding>> {
    let loaded = semham::load_embeddings(&path, &RunConfig::default()).map_err(to_py)?;
    Ok(loaded.vectors.into_iter().map(PyEmbedding).collect())
}

#[pyfunction]
#[pyo3(signature = (path, vectors, model=None))]
fn save_embeddings(path: std::path::PathBuf, vectors: Vec<PyEmbedding>, model: Option<String>) -> PyResult<()> {
    let vectors: Vec<_> = vectors.into_iter().map(|v| v.0).collect();
    EmbeddingFile::new(model, &vectors)
        .and_then(|f| f.save(&path))
        .map_err(to_py)
}

#[pymodule]
#[pyo3(name = "semham")]
pub fn semham_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyEmbedding>()?;
    m.add_function(wrap_pyfunction!(cosine_similarity, m)?)?;
    m.add_function(wrap_pyfunction!(transform_similarity, m)?)?;
    m.add_function(wrap_pyfunction!(smallest_perturbation, m)?)?;
    m.add_function(wrap_pyfunction!(general_similarity, m)?)?;
    m.add_function(wrap_pyfunction!(householder_transition, m)?)?;
    m.add_function(wrap_pyfunction!(run_indirect_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(diagonalize, m)?)?;
    m.add_function(wrap_pyfunction!(trajectory, m)?)?;
    m.add_function(wrap_pyfunction!(zero_point, m)?)?;
    m.add_function(wrap_pyfunction!(load_embeddings, m)?)?;
    m.add_function(wrap_pyfunction!(save_embeddings, m)?)?;
    m.add("FORMAT_VERSION", semham::io::FORMAT_VERSION)?;
    Ok(())
}
