//! Python bindings: clause-sets, measures, games, families and reports.
//! Structured results come back as plain dicts and lists.

use std::collections::BTreeSet;

use hardness::consistency::{self, ConsistencyKind};
use hardness::families::{self, PhpVariant};
use hardness::games;
use hardness::report::{self, ProbeTarget};
use hardness::{cnf, corpus, dimacs, extensions, measures, reductions, Clause, Error, MeasureKind};
use pyo3::exceptions::{PyOverflowError, PyValueError};
use pyo3::prelude::*;

fn err(e: Error) -> PyErr {
    match e {
        Error::CapExceeded { .. } => PyOverflowError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_py<'py>(py: Python<'py>, v: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let s = serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (s,))
}

/// An immutable set of clauses over positive integer variables.
#[pyclass(name = "ClauseSet", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyClauseSet {
    inner: hardness::ClauseSet,
}

#[pymethods]
impl PyClauseSet {
    /// Builds a clause-set from lists of nonzero integers.
    #[new]
    fn new(clauses: Vec<Vec<i64>>) -> PyResult<Self> {
        let cls = clauses.iter().map(|c| Clause::from_dimacs(c)).collect::<Result<Vec<_>, _>>().map_err(err)?;
        Ok(PyClauseSet { inner: hardness::ClauseSet::from_clauses(cls) })
    }

    #[staticmethod]
    fn from_dimacs(text: &str) -> PyResult<Self> {
        Ok(PyClauseSet { inner: dimacs::parse_dimacs(text.as_bytes()).map_err(err)? })
    }

    fn to_dimacs(&self) -> String {
        String::from_utf8(dimacs::write_dimacs(&self.inner)).expect("ascii")
    }

    fn clauses(&self) -> Vec<Vec<i64>> {
        self.inner.to_dimacs_lists()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn c(&self) -> usize {
        self.inner.c()
    }

    fn is_satisfiable(&self) -> PyResult<bool> {
        cnf::is_satisfiable(&self.inner).map_err(err)
    }

    fn prime_implicates(&self) -> PyResult<Self> {
        Ok(PyClauseSet { inner: cnf::prime_implicates(&self.inner).map_err(err)? })
    }

    /// Applies a partial assignment given as (variable, value) pairs.
    fn apply(&self, assignment: Vec<(u32, bool)>) -> PyResult<Self> {
        let phi = cnf::PartialAssignment::from_pairs(assignment).map_err(err)?;
        Ok(PyClauseSet { inner: cnf::apply(&phi, &self.inner) })
    }

    fn __len__(&self) -> usize {
        self.inner.c()
    }

    fn __repr__(&self) -> String {
        format!("ClauseSet({})", self.inner)
    }
}

/// Lifted value of one measure; `relative` restricts the instantiations.
#[pyfunction]
#[pyo3(signature = (f, kind, relative=None))]
fn measure(f: &PyClauseSet, kind: &str, relative: Option<Vec<u32>>) -> PyResult<u32> {
    let kind: MeasureKind = kind.parse().map_err(err)?;
    let v: Option<BTreeSet<u32>> = relative.map(|r| r.into_iter().collect());
    measures::lift_measure(kind, &f.inner, v.as_ref()).map_err(err)
}

/// Full measure report, with a checked witness when requested.
#[pyfunction]
#[pyo3(signature = (f, kind, witness=false))]
fn measure_report<'py>(py: Python<'py>, f: &PyClauseSet, kind: &str, witness: bool) -> PyResult<Bound<'py, PyAny>> {
    let kind: MeasureKind = kind.parse().map_err(err)?;
    let r = measures::measure_report(kind, &f.inner, None, witness).map_err(err)?;
    to_py(py, &r)
}

/// All seven measures with the relations between them.
#[pyfunction]
#[pyo3(signature = (f, instance="python"))]
fn verify<'py>(py: Python<'py>, f: &PyClauseSet, instance: &str) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &report::verify_relations(&f.inner, instance).map_err(err)?)
}

#[pyfunction]
fn reduce<'py>(py: Python<'py>, f: &PyClauseSet, level: u32) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &reductions::rk(&f.inner, level).map_err(err)?)
}

/// Game value: `hd`, `whd`, or `whd_increasing` for the breadth-restricted rule.
#[pyfunction]
fn game_value(f: &PyClauseSet, game: &str) -> PyResult<u32> {
    match game {
        "hd" => games::hd_game_value(&f.inner),
        "whd" => games::whd_game_value(&f.inner),
        "whd_increasing" => games::whd_game_value_mode(&f.inner, games::WhdMode::IncreasingBreadth),
        _ => Err(Error::Invalid(format!("unknown game `{game}`"))),
    }
    .map_err(err)
}

/// A transcript of optimal play on both sides.
#[pyfunction]
fn play_optimal<'py>(py: Python<'py>, f: &PyClauseSet, game: &str) -> PyResult<Bound<'py, PyAny>> {
    let kind: games::GameKind = game.parse().map_err(err)?;
    to_py(py, &games::play_optimal(&f.inner, kind).map_err(err)?)
}

#[pyfunction]
fn exists_family(f: &PyClauseSet, kind: &str, k: u32) -> PyResult<bool> {
    let kind: ConsistencyKind = kind.parse().map_err(err)?;
    consistency::exists_family(kind, &f.inner, k).map_err(err)
}

/// Family instance: php/fphp/ophp/ofphp take (m, k); ephp, xor2 and full take (n,).
#[pyfunction]
fn generate(family: &str, params: Vec<u32>) -> PyResult<PyClauseSet> {
    let bad = || PyValueError::new_err(format!("wrong parameters for {family}"));
    let inst = if let Ok(v) = family.parse::<PhpVariant>() {
        let [m, k] = params[..] else { return Err(bad()) };
        families::php(v, m, k)
    } else {
        let [n] = params[..] else { return Err(bad()) };
        match family {
            "ephp" => families::ephp(n).map_err(err)?,
            "xor2" => families::two_xor(n).map_err(err)?,
            "full" => families::full_clause_set(n),
            _ => return Err(PyValueError::new_err(format!("unknown family `{family}`"))),
        }
    };
    Ok(PyClauseSet { inner: inst.clauses })
}

#[pyfunction]
fn eliminate_blocked(f: &PyClauseSet) -> PyClauseSet {
    PyClauseSet { inner: extensions::eliminate_blocked(&f.inner) }
}

#[pyfunction]
#[pyo3(signature = (max_clauses=corpus::DEFAULT_CLAUSE_CAP))]
fn exhaustive_corpus(max_clauses: usize) -> Vec<PyClauseSet> {
    corpus::exhaustive(max_clauses).into_iter().map(|inner| PyClauseSet { inner }).collect()
}

#[pyfunction]
#[pyo3(signature = (target, budget=200, seed=2024))]
fn probe<'py>(py: Python<'py>, target: &str, budget: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let t: ProbeTarget = target.parse().map_err(err)?;
    to_py(py, &report::probe(t, budget, seed).map_err(err)?)
}

#[pymodule]
fn hardness_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyClauseSet>()?;
    m.add_function(wrap_pyfunction!(measure, m)?)?;
    m.add_function(wrap_pyfunction!(measure_report, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(reduce, m)?)?;
    m.add_function(wrap_pyfunction!(game_value, m)?)?;
    m.add_function(wrap_pyfunction!(play_optimal, m)?)?;
    m.add_function(wrap_pyfunction!(exists_family, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(eliminate_blocked, m)?)?;
    m.add_function(wrap_pyfunction!(exhaustive_corpus, m)?)?;
    m.add_function(wrap_pyfunction!(probe, m)?)?;
    Ok(())
}
