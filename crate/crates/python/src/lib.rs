//! Python module `cubic_fatpoints_py`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use cubic_fatpoints as core;
use cubic_fatpoints::fatpoints::{self, FatPointReport, Multiplicities};

fn to_py(e: core::Error) -> PyErr {
    if e.is_validation() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

fn class_from_list(v: &[i64]) -> PyResult<core::DivisorClass> {
    match v {
        [d, m @ ..] if m.len() == 6 => Ok(core::DivisorClass::new(*d, [m[0], m[1], m[2], m[3], m[4], m[5]])),
        _ => Err(PyValueError::new_err("a class needs 7 integers [d, m1, ..., m6]")),
    }
}

fn mults_from(v: Vec<i64>) -> PyResult<Multiplicities> {
    v.try_into().map_err(|_| PyValueError::new_err("expected 6 multiplicities"))
}

/// A class `dL - m1 E1 - ... - m6 E6`, stored as `[d, -m1, ..., -m6]`.
#[pyclass(name = "DivisorClass", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyDivisorClass(core::DivisorClass);

#[pymethods]
impl PyDivisorClass {
    #[new]
    fn new(coefficients: Vec<i64>) -> PyResult<Self> {
        class_from_list(&coefficients).map(Self)
    }

    #[getter]
    fn degree(&self) -> i64 {
        self.0.d
    }

    fn coefficients(&self) -> Vec<i64> {
        self.0.to_array().to_vec()
    }

    fn intersect(&self, other: &PyDivisorClass) -> i64 {
        self.0.intersect(&other.0)
    }

    fn self_intersection(&self) -> i64 {
        self.0.self_intersection()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("DivisorClass({:?})", self.0.to_array())
    }
}

#[pyclass(name = "ConfigurationType", frozen)]
struct PyConfigurationType(&'static core::ConfigurationType);

#[pymethods]
impl PyConfigurationType {
    #[getter]
    fn id(&self) -> u32 {
        self.0.id
    }

    #[getter]
    fn label(&self) -> &str {
        &self.0.label
    }

    #[getter]
    fn notation(&self) -> &str {
        &self.0.notation
    }

    #[getter]
    fn classes(&self) -> Vec<PyDivisorClass> {
        self.0.classes.iter().copied().map(PyDivisorClass).collect()
    }

    #[getter]
    fn graph(&self) -> &str {
        &self.0.graph.name
    }

    #[getter]
    fn torsion(&self) -> String {
        self.0.torsion.to_string()
    }

    fn __repr__(&self) -> String {
        format!("ConfigurationType({}, {:?}, {:?})", self.0.id, self.0.label, self.0.notation)
    }
}

/// Hilbert function and minimal resolution of a fat point ideal.
#[pyclass(name = "Resolution", frozen)]
struct PyResolution(FatPointReport);

#[pymethods]
impl PyResolution {
    /// `[(shift, mult), ...]` of the generators, ascending.
    #[getter]
    fn f0(&self) -> Vec<(i64, i64)> {
        self.0.resolution.f0.iter().map(|s| (s.shift, s.mult)).collect()
    }

    #[getter]
    fn f1(&self) -> Vec<(i64, i64)> {
        self.0.resolution.f1.iter().map(|s| (s.shift, s.mult)).collect()
    }

    #[getter]
    fn mults(&self) -> Multiplicities {
        self.0.mults
    }

    #[getter]
    fn degree(&self) -> i64 {
        self.0.hilbert.degree
    }

    #[getter]
    fn tail_from(&self) -> i64 {
        self.0.hilbert.tail_from
    }

    fn hilbert_ideal(&self, t: i64) -> i64 {
        self.0.hilbert.ideal_at(t)
    }

    fn hilbert_quotient(&self, t: i64) -> i64 {
        self.0.hilbert.quotient_at(t)
    }

    fn __str__(&self) -> String {
        self.0.resolution.to_string()
    }
}

#[pyfunction]
fn all_types() -> Vec<PyConfigurationType> {
    core::all_types().iter().map(PyConfigurationType).collect()
}

#[pyfunction]
fn type_by_id(id: u32) -> PyResult<PyConfigurationType> {
    core::type_by_id(id).map(PyConfigurationType).map_err(to_py)
}

#[pyfunction]
fn parse_negset(text: &str) -> PyResult<Vec<PyDivisorClass>> {
    let classes = core::parse_negset(text).map_err(|e| to_py(e.into()))?;
    Ok(classes.into_iter().map(PyDivisorClass).collect())
}

/// Type of a set of (-2)-curves given in letter notation.
#[pyfunction]
fn classify(text: &str) -> PyResult<PyConfigurationType> {
    let classes = core::parse_negset(text).map_err(|e| to_py(e.into()))?;
    core::classify(&classes).map(|c| PyConfigurationType(c.ty)).map_err(to_py)
}

/// `(h0, h1, h2)` of a class on the surface with the given (-2)-curves.
#[pyfunction]
fn cohomology(class: &PyDivisorClass, neg: &str) -> PyResult<(u64, u64, u64)> {
    let classes = core::parse_negset(neg).map_err(|e| to_py(e.into()))?;
    let curves = core::full_neg(&classes).map_err(to_py)?;
    Ok((core::h0(&class.0, &curves), core::h1(&class.0, &curves), core::h2(&class.0, &curves)))
}

/// Resolution of `I(m1 p1 + ... + m6 p6)` for points of the given type id.
#[pyfunction]
fn resolution(type_id: u32, mults: Vec<i64>) -> PyResult<PyResolution> {
    let ty = core::type_by_id(type_id).map_err(to_py)?;
    let scheme = core::FatPointScheme::for_type(ty, mults_from(mults)?).map_err(to_py)?;
    fatpoints::analyze(&scheme).map(PyResolution).map_err(to_py)
}

#[pyfunction]
fn table1() -> String {
    core::typeenum::table1()
}

/// `[(name, passed, detail), ...]` for the invariant checks.
#[pyfunction]
#[pyo3(signature = (seed = 0))]
fn verify(seed: u64) -> Vec<(String, bool, String)> {
    core::verify::run_invariant_suite(seed)
        .into_iter()
        .map(|c| (c.name.to_string(), c.passed, c.detail))
        .collect()
}

#[pymodule]
fn cubic_fatpoints_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDivisorClass>()?;
    m.add_class::<PyConfigurationType>()?;
    m.add_class::<PyResolution>()?;
    m.add_function(wrap_pyfunction!(all_types, m)?)?;
    m.add_function(wrap_pyfunction!(type_by_id, m)?)?;
    m.add_function(wrap_pyfunction!(parse_negset, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(cohomology, m)?)?;
    m.add_function(wrap_pyfunction!(resolution, m)?)?;
    m.add_function(wrap_pyfunction!(table1, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
