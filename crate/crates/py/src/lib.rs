//! Python bindings: `import prefdb`.

use std::path::PathBuf;

use prefdb_core::answers::{necessary_answers, possible_answers, Answer, AnswerReport, EvalOptions, Examined};
use prefdb_core::completions::{count_completions, profile_completions, CompletionCount};
use prefdb_core::generators::{
    gen_qh_instance, gen_tautology_instance, oracle_independent_set, oracle_tautology, Graph, ThreeDnf,
};
use prefdb_core::model::{profile_from_ballots, validate_database, PreferenceDatabase, Scalar};
use prefdb_core::query::{classify_query, evaluate_cq, parse_query, ConjunctiveQuery};
use prefdb_core::scoring::{builtin_rule, RuleRegistry};
use prefdb_core::winners::{necessary_winners, possible_winners, Method};
use prefdb_core::DEFAULT_CAP;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList, PyTuple};

pyo3::create_exception!(prefdb, PrefdbError, PyException);

fn err(e: prefdb_core::Error) -> PyErr {
    PrefdbError::new_err(e.to_string())
}

fn method(name: &str) -> PyResult<Method> {
    name.parse().map_err(|e: prefdb_core::Error| PyValueError::new_err(e.to_string()))
}

fn scalar<'py>(py: Python<'py>, s: &Scalar) -> PyResult<Bound<'py, PyAny>> {
    Ok(match s {
        Scalar::Int(v) => v.into_pyobject(py)?.into_any(),
        Scalar::Str(v) => (&**v).into_pyobject(py)?.into_any(),
    })
}

fn answer<'py>(py: Python<'py>, a: &Answer) -> PyResult<Bound<'py, PyAny>> {
    match a {
        Answer::Boolean(b) => Ok(b.into_pyobject(py)?.to_owned().into_any()),
        Answer::Tuples(rows) => {
            let list = PyList::empty(py);
            for row in rows {
                let cells = row.iter().map(|c| scalar(py, c)).collect::<PyResult<Vec<_>>>()?;
                list.append(PyTuple::new(py, cells)?)?;
            }
            Ok(list.into_any())
        }
    }
}

fn report<'py>(py: Python<'py>, r: &AnswerReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("answer", answer(py, &r.answer)?)?;
    d.set_item("head", r.head.clone())?;
    d.set_item("method_used", r.method_used.to_string())?;
    match r.completions_examined {
        Examined::Count(n) => d.set_item("completions_examined", n)?,
        Examined::NotApplicable => d.set_item("completions_examined", py.None())?,
    }
    d.set_item("warnings", r.warnings.clone())?;
    Ok(d)
}

/// A preference database: ordinary relations plus elections with ballots.
#[pyclass(name = "Database", module = "prefdb", frozen)]
struct PyDatabase {
    inner: PreferenceDatabase,
}

#[pymethods]
impl PyDatabase {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyDatabase {
            inner: PreferenceDatabase::from_json_str(text).map_err(err)?,
        })
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        Ok(PyDatabase {
            inner: PreferenceDatabase::from_path(path).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_json_string()
    }

    fn elections(&self) -> Vec<String> {
        self.inner.elections().map(|(id, _)| id.to_string()).collect()
    }

    fn relations(&self) -> Vec<String> {
        self.inner.relations().map(|r| r.name.clone()).collect()
    }

    fn candidates(&self, election: &str) -> PyResult<Vec<String>> {
        let set = self.inner.candidate_set(election).map_err(err)?;
        Ok(set.iter().map(|c| c.to_string()).collect())
    }

    /// Problems found in the database, one message each.
    fn validate(&self) -> Vec<String> {
        validate_database(&self.inner).iter().map(ToString::to_string).collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Database(relations={:?}, elections={:?})",
            self.relations(),
            self.elections()
        )
    }
}

/// A conjunctive query in the rule syntax `q(x) :- R(x, y), Winner(rule, "e", x).`
#[pyclass(name = "Query", module = "prefdb", frozen)]
struct PyQuery {
    inner: ConjunctiveQuery,
}

#[pymethods]
impl PyQuery {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyQuery {
            inner: parse_query(text).map_err(err)?,
        })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn head(&self) -> Vec<String> {
        self.inner.head.clone()
    }

    #[getter]
    fn is_boolean(&self) -> bool {
        self.inner.is_boolean()
    }

    /// `"tractable-plurality"` or `"requires-brute-force"`.
    fn classify(&self) -> String {
        classify_query(&self.inner).verdict.to_string()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Query({:?})", self.inner.to_string())
    }
}

fn options(m: &str, cap: u64) -> PyResult<EvalOptions> {
    Ok(EvalOptions {
        method: method(m)?,
        cap,
        rules: RuleRegistry::new(),
    })
}

/// Necessary answers, as a dict with `answer`, `method_used`,
/// `completions_examined` and `warnings`.
#[pyfunction]
#[pyo3(signature = (db, query, method = "auto", cap = DEFAULT_CAP))]
fn necessary<'py>(py: Python<'py>, db: &PyDatabase, query: &PyQuery, method: &str, cap: u64) -> PyResult<Bound<'py, PyDict>> {
    let r = necessary_answers(&query.inner, &db.inner, &options(method, cap)?).map_err(err)?;
    report(py, &r)
}

/// Possible answers, in the same shape as `necessary`.
#[pyfunction]
#[pyo3(signature = (db, query, method = "auto", cap = DEFAULT_CAP))]
fn possible<'py>(py: Python<'py>, db: &PyDatabase, query: &PyQuery, method: &str, cap: u64) -> PyResult<Bound<'py, PyDict>> {
    let r = possible_answers(&query.inner, &db.inner, &options(method, cap)?).map_err(err)?;
    report(py, &r)
}

/// Necessary or possible winners of one election, sorted.
#[pyfunction]
#[pyo3(signature = (db, election, rule, mode = "necessary", method = "auto", cap = DEFAULT_CAP))]
fn winners(db: &PyDatabase, election: &str, rule: &str, mode: &str, method: &str, cap: u64) -> PyResult<Vec<String>> {
    let rule = builtin_rule(rule).map_err(err)?;
    let p = profile_from_ballots(&db.inner, election).map_err(err)?;
    let m = self::method(method)?;
    let out = match mode {
        "necessary" => necessary_winners(&rule, &p, m, cap),
        "possible" => possible_winners(&rule, &p, m, cap),
        other => return Err(PyValueError::new_err(format!("unknown mode `{other}`"))),
    }
    .map_err(err)?;
    Ok(out.winners.iter().map(|c| c.to_string()).collect())
}

/// Evaluates a query on a database whose preferences are all total.
#[pyfunction]
fn evaluate<'py>(py: Python<'py>, db: &PyDatabase, query: &PyQuery) -> PyResult<Bound<'py, PyAny>> {
    let rows = evaluate_cq(&query.inner, &db.inner, &RuleRegistry::new()).map_err(err)?;
    let a = if query.inner.is_boolean() {
        Answer::Boolean(!rows.is_empty())
    } else {
        Answer::Tuples(rows.into_iter().collect())
    };
    answer(py, &a)
}

/// Number of completions of an election's profile; `None` past 2^64.
#[pyfunction]
fn completion_count(db: &PyDatabase, election: &str) -> PyResult<Option<u64>> {
    let p = profile_from_ballots(&db.inner, election).map_err(err)?;
    Ok(match count_completions(&p, u64::MAX) {
        CompletionCount::Exact(n) => Some(n),
        CompletionCount::Overflow => None,
    })
}

/// Every completion, as a list of `{voter: ranking}` dicts.
#[pyfunction]
#[pyo3(signature = (db, election, cap = DEFAULT_CAP))]
fn completions<'py>(py: Python<'py>, db: &PyDatabase, election: &str, cap: u64) -> PyResult<Bound<'py, PyList>> {
    let p = profile_from_ballots(&db.inner, election).map_err(err)?;
    let out = PyList::empty(py);
    for t in profile_completions(&p, cap).map_err(err)? {
        let d = PyDict::new(py);
        for (v, o) in t.entries() {
            let ranking: Vec<String> = o.ranking().iter().map(|c| c.to_string()).collect();
            d.set_item(v.as_str(), ranking)?;
        }
        out.append(d)?;
    }
    Ok(out)
}

/// Independent-set instance: `(db, query, expected necessary answer)`.
#[pyfunction]
fn generate_qh(graph: &str, k: usize) -> PyResult<(PyDatabase, PyQuery, bool)> {
    let g: Graph = graph.parse().map_err(err)?;
    let expected = !oracle_independent_set(&g, k).map_err(err)?;
    let (db, q) = gen_qh_instance(&g, k).map_err(err)?;
    Ok((PyDatabase { inner: db }, PyQuery { inner: q }, expected))
}

/// Tautology instance: `(db, query, expected necessary answer)`.
#[pyfunction]
fn generate_tautology(dnf: &str, rule: &str) -> PyResult<(PyDatabase, PyQuery, bool)> {
    let phi: ThreeDnf = dnf.parse().map_err(err)?;
    let rule = builtin_rule(rule).map_err(err)?;
    let expected = oracle_tautology(&phi).map_err(err)?;
    let (db, q) = gen_tautology_instance(&phi, &rule).map_err(err)?;
    Ok((PyDatabase { inner: db }, PyQuery { inner: q }, expected))
}

#[pymodule]
fn prefdb(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("PrefdbError", m.py().get_type::<PrefdbError>())?;
    m.add("DEFAULT_CAP", DEFAULT_CAP)?;
    m.add_class::<PyDatabase>()?;
    m.add_class::<PyQuery>()?;
    m.add_function(wrap_pyfunction!(necessary, m)?)?;
    m.add_function(wrap_pyfunction!(possible, m)?)?;
    m.add_function(wrap_pyfunction!(winners, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(completion_count, m)?)?;
    m.add_function(wrap_pyfunction!(completions, m)?)?;
    m.add_function(wrap_pyfunction!(generate_qh, m)?)?;
    m.add_function(wrap_pyfunction!(generate_tautology, m)?)?;
    Ok(())
}
