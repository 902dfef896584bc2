//! Python module `crossout`: the correspondence, the identity checks and the
//! dinner game engine.
//!
//! Permutations go in as a list of ints or one-line text ("2 1 3") and come
//! out as lists. Dyck paths are `U`/`D` words. Composite results (statistics,
//! identity reports) are returned as plain dicts.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyType;
use serde::Serialize;

use crossout::identities::{collect_suites, Suite};
use crossout::probability::rational_to_string;
use crossout::{DyckPath, Error, GameSetup, LabeledDyckPath, Matching, Parity, Permutation, Player};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::IllegalMove(_) | Error::State(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_py<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

#[derive(FromPyObject)]
enum PermInput {
    List(Vec<usize>),
    Text(String),
}

impl PermInput {
    fn permutation(self) -> PyResult<Permutation> {
        match self {
            PermInput::List(values) => Permutation::new(values),
            PermInput::Text(text) => text.parse(),
        }
        .map_err(py_err)
    }
}

fn path(word: &str) -> PyResult<DyckPath> {
    word.parse().map_err(py_err)
}

fn player(name: &str) -> PyResult<Player> {
    name.parse().map_err(py_err)
}

fn mark_letter(p: Player) -> &'static str {
    match p {
        Player::Alice => "A",
        Player::Bob => "B",
    }
}

#[pyclass(name = "CrossoutTuple", frozen, eq, module = "crossout")]
#[derive(PartialEq)]
struct PyTuple {
    inner: crossout::CrossoutTuple,
}

#[pymethods]
impl PyTuple {
    #[new]
    #[pyo3(signature = (pa, pb, ell, em))]
    fn new(pa: &str, pb: &str, ell: Vec<usize>, em: Vec<usize>) -> PyResult<Self> {
        let parity = if pb.len() == pa.len() { Parity::Odd } else { Parity::Even };
        let inner = crossout::CrossoutTuple::new(path(pa)?, path(pb)?, ell, em, parity).map_err(py_err)?;
        Ok(PyTuple { inner })
    }

    #[classmethod]
    fn from_json(_cls: &Bound<'_, PyType>, text: &str) -> PyResult<Self> {
        let inner = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(PyTuple { inner })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("tuple serializes")
    }

    #[getter]
    fn pa(&self) -> String {
        self.inner.pa().to_string()
    }

    #[getter]
    fn pb(&self) -> String {
        self.inner.pb().to_string()
    }

    #[getter]
    fn ell(&self) -> Vec<usize> {
        self.inner.ell().to_vec()
    }

    #[getter]
    fn em(&self) -> Vec<usize> {
        self.inner.em().to_vec()
    }

    #[getter]
    fn parity(&self) -> &'static str {
        match self.inner.parity() {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }

    fn __repr__(&self) -> String {
        format!("CrossoutTuple({})", self.to_json())
    }
}

/// The A/B marking of each position, as a string like "AABBB".
#[pyfunction]
fn crossout_mark(w: PermInput) -> PyResult<String> {
    Ok(crossout::crossout_mark(&w.permutation()?).marks().iter().map(|m| m.to_string()).collect())
}

#[pyfunction]
fn encode(w: PermInput) -> PyResult<PyTuple> {
    Ok(PyTuple { inner: crossout::encode(&w.permutation()?) })
}

#[pyfunction]
fn decode(t: &PyTuple) -> PyResult<Vec<usize>> {
    Ok(crossout::decode(&t.inner).map_err(py_err)?.values().to_vec())
}

/// `(h, h_star)` for a Dyck word.
#[pyfunction]
fn heights(word: &str) -> PyResult<(Vec<usize>, Vec<usize>)> {
    let h = path(word)?.heights();
    Ok((h.h, h.h_star))
}

#[pyfunction]
fn enumerate_dyck(length: usize) -> PyResult<Vec<String>> {
    Ok(crossout::enumerate_dyck(length).map_err(py_err)?.map(|p| p.to_string()).collect())
}

#[pyfunction]
fn hermite_to_matching(word: &str, labels: Vec<usize>) -> PyResult<Vec<(usize, usize)>> {
    let lp = LabeledDyckPath::hermite(path(word)?, labels).map_err(py_err)?;
    Ok(crossout::hermite_to_matching(&lp).map_err(py_err)?.pairs().to_vec())
}

#[pyfunction]
fn matching_to_hermite(pairs: Vec<(usize, usize)>) -> PyResult<(String, Vec<usize>)> {
    let m = Matching::new(pairs).map_err(py_err)?;
    let lp = crossout::matching_to_hermite(&m);
    Ok((lp.path.to_string(), lp.labels))
}

/// Probability (as `fractions.Fraction`) that Alice eats exactly the given
/// ranks out of `2n` under crossout play on a uniform permutation.
#[pyfunction]
fn alice_probability<'py>(py: Python<'py>, n: usize, ranks: Vec<usize>) -> PyResult<Bound<'py, PyAny>> {
    let p = crossout::alice_probability(n, &ranks).map_err(py_err)?;
    py.import("fractions")?.getattr("Fraction")?.call1((rational_to_string(&p),))
}

#[pyfunction]
fn stat_bundle<'py>(py: Python<'py>, w: PermInput) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &crossout::stat_bundle(&w.permutation()?))
}

#[pyfunction]
fn z_stat(w: PermInput) -> PyResult<u64> {
    crossout::z_stat(&w.permutation()?).map_err(py_err)
}

/// Runs identity suites for every n up to `n`; returns the reports as dicts.
#[pyfunction]
#[pyo3(signature = (suite, n, force = false))]
fn verify<'py>(py: Python<'py>, suite: &str, n: usize, force: bool) -> PyResult<Bound<'py, PyAny>> {
    let suites = Suite::parse_list(suite).map_err(py_err)?;
    let reports = py.detach(|| collect_suites(&suites, n, force)).map_err(py_err)?;
    to_py(py, &reports)
}

/// A dinner game. The engine moves for whichever side is not `human_role`
/// when asked through `engine_move`.
#[pyclass(module = "crossout")]
struct Game {
    state: crossout::GameState,
}

#[pymethods]
impl Game {
    #[new]
    #[pyo3(signature = (w = None, n = None, seed = 0, human_role = None))]
    fn new(w: Option<PermInput>, n: Option<usize>, seed: u64, human_role: Option<&str>) -> PyResult<Self> {
        let setup = match (w, n) {
            (Some(w), None) => GameSetup::Permutation(w.permutation()?),
            (None, Some(size)) => GameSetup::Random { size, seed },
            _ => return Err(PyValueError::new_err("give exactly one of w or n")),
        };
        let human = human_role.map(player).transpose()?;
        Ok(Game { state: crossout::new_game(setup, human).map_err(py_err)? })
    }

    #[getter]
    fn w(&self) -> Vec<usize> {
        self.state.w().values().to_vec()
    }

    #[getter]
    fn remaining(&self) -> Vec<usize> {
        self.state.remaining().iter().copied().collect()
    }

    /// "A" or "B", or None once the game is over.
    #[getter]
    fn turn(&self) -> Option<&'static str> {
        self.state.turn().map(mark_letter)
    }

    #[getter]
    fn over(&self) -> bool {
        self.state.is_over()
    }

    #[getter]
    fn history<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.state.history())
    }

    fn play(&mut self, position: usize) -> PyResult<()> {
        self.state = self.state.apply_move(position).map_err(py_err)?;
        Ok(())
    }

    /// Plays the crossout move for the side to move and returns its position.
    fn engine_move(&mut self) -> PyResult<usize> {
        let pos = self.state.engine_move().map_err(py_err)?;
        self.state = self.state.apply_move(pos).map_err(py_err)?;
        Ok(pos)
    }

    fn hint(&self) -> PyResult<usize> {
        self.state.optimal_move().map_err(py_err)
    }

    /// Predicted eater ("A"/"B") of each remaining position under optimal play.
    fn analysis(&self) -> Vec<(usize, &'static str)> {
        self.state.analysis().into_iter().map(|(p, who)| (p, mark_letter(who))).collect()
    }

    fn eaten_by(&self, role: &str) -> PyResult<Vec<usize>> {
        Ok(self.state.eaten_by(player(role)?))
    }

    fn no_trade_check(&self) -> PyResult<bool> {
        self.state.no_trade_check().map_err(py_err)
    }
}

#[pymodule]
#[pyo3(name = "crossout")]
fn crossout_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTuple>()?;
    m.add_class::<Game>()?;
    m.add_function(wrap_pyfunction!(crossout_mark, m)?)?;
    m.add_function(wrap_pyfunction!(encode, m)?)?;
    m.add_function(wrap_pyfunction!(decode, m)?)?;
    m.add_function(wrap_pyfunction!(heights, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_dyck, m)?)?;
    m.add_function(wrap_pyfunction!(hermite_to_matching, m)?)?;
    m.add_function(wrap_pyfunction!(matching_to_hermite, m)?)?;
    m.add_function(wrap_pyfunction!(alice_probability, m)?)?;
    m.add_function(wrap_pyfunction!(stat_bundle, m)?)?;
    m.add_function(wrap_pyfunction!(z_stat, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
