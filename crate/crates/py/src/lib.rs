//! Python bindings. Rationals cross the boundary as lowest-terms "a/b"
//! strings in both directions; indices stay 1-based to match the reports.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use minimax_lab::{
    enforcing_constant_lower, family_game, fooling_series, format_rat, game_from_json,
    game_of_hypergraph, game_to_json, gap_report, littlestone_dimension, nu_star, parse_rat,
    solve, staircase_exact, staircase_greedy, tau_star, threshold_dimension, truncate,
    value_grid, vc_dimension, zoo, Error, FiniteGame, Hypergraph, MixedStrategy, SetFamily,
};

fn to_py_err(err: Error) -> PyErr {
    match err {
        Error::Domain(_) | Error::Parse(_) | Error::UnsupportedCapability(_) => {
            PyValueError::new_err(err.to_string())
        }
        _ => PyRuntimeError::new_err(err.to_string()),
    }
}

fn strategy_dict(p: &MixedStrategy, labels: &[String]) -> BTreeMap<String, String> {
    p.iter()
        .map(|(&i, w)| (labels[(i - 1) as usize].clone(), format_rat(w)))
        .collect()
}

fn lookup_oracle(name: &str) -> PyResult<Box<dyn minimax_lab::GameOracle>> {
    zoo::by_name(name).ok_or_else(|| {
        PyValueError::new_err(format!(
            "unknown oracle {name:?}; expected one of {}",
            zoo::ORACLE_NAMES.join(", ")
        ))
    })
}

fn lookup_family(name: &str) -> PyResult<SetFamily> {
    SetFamily::by_name(name).ok_or_else(|| {
        PyValueError::new_err(format!(
            "unknown family {name:?}; expected one of {}, residue-<m>",
            minimax_lab::setfam::FAMILY_NAMES.join(", ")
        ))
    })
}

/// A finite game with exact rational payoffs.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct Game {
    inner: FiniteGame,
}

#[pymethods]
impl Game {
    /// Build from row labels, column labels, and a payoff matrix of
    /// rational strings.
    #[new]
    fn new(rows: Vec<String>, cols: Vec<String>, payoff: Vec<Vec<String>>) -> PyResult<Self> {
        let parsed = payoff
            .iter()
            .map(|row| row.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(to_py_err)?;
        Ok(Game { inner: FiniteGame::new(rows, cols, parsed).map_err(to_py_err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Game { inner: game_from_json(text).map_err(to_py_err)? })
    }

    fn to_json(&self) -> String {
        game_to_json(&self.inner)
    }

    #[getter]
    fn n_rows(&self) -> u64 {
        self.inner.n_rows()
    }

    #[getter]
    fn n_cols(&self) -> u64 {
        self.inner.n_cols()
    }

    #[getter]
    fn win_lose(&self) -> bool {
        self.inner.win_lose()
    }

    /// Payoff at 1-based (row, col) as a rational string.
    fn entry(&self, row: u64, col: u64) -> PyResult<String> {
        Ok(format_rat(self.inner.entry(row, col).map_err(to_py_err)?))
    }

    /// Exact value and optimal strategies: (value, p, q) with strategies
    /// keyed by label.
    fn solve(&self) -> PyResult<(String, BTreeMap<String, String>, BTreeMap<String, String>)> {
        let r = solve(&self.inner).map_err(to_py_err)?;
        Ok((
            format_rat(&r.value),
            strategy_dict(&r.p_opt, self.inner.row_labels()),
            strategy_dict(&r.q_opt, self.inner.col_labels()),
        ))
    }

    /// (vc, littlestone, threshold) dimensions.
    fn dims(&self) -> PyResult<(u64, u64, u64)> {
        Ok((
            vc_dimension(&self.inner).map_err(to_py_err)?,
            littlestone_dimension(&self.inner).map_err(to_py_err)?,
            threshold_dimension(&self.inner).map_err(to_py_err)?,
        ))
    }

    /// Largest staircase: (size, row indices, column indices).
    fn staircase(&self) -> PyResult<(u64, Vec<u64>, Vec<u64>)> {
        let (size, w) = staircase_exact(&self.inner).map_err(to_py_err)?;
        Ok((size, w.rows, w.cols))
    }

    fn dualize(&self) -> Game {
        Game { inner: self.inner.dualize() }
    }

    fn __repr__(&self) -> String {
        format!("Game({}x{})", self.inner.n_rows(), self.inner.n_cols())
    }
}

/// Finite window of a zoo oracle as a Game.
#[pyfunction]
fn zoo_window(name: &str, rows: u64, cols: u64) -> PyResult<Game> {
    let oracle = lookup_oracle(name)?;
    Ok(Game { inner: truncate(oracle.as_ref(), rows, cols).map_err(to_py_err)? })
}

#[pyfunction]
fn oracle_names() -> Vec<String> {
    zoo::ORACLE_NAMES.iter().map(|s| s.to_string()).collect()
}

#[pyfunction]
fn family_names() -> Vec<String> {
    minimax_lab::setfam::FAMILY_NAMES.iter().map(|s| s.to_string()).collect()
}

/// Exact values of scheduled truncations plus the gap estimates:
/// (values, upper_estimate, lower_estimate, lower_exact, converged).
#[pyfunction]
#[pyo3(signature = (oracle, rows, cols, tol = "1/100"))]
fn grid(
    oracle: &str,
    rows: Vec<u64>,
    cols: Vec<u64>,
    tol: &str,
) -> PyResult<(Vec<Vec<String>>, String, String, bool, bool)> {
    let oracle = lookup_oracle(oracle)?;
    let tol = parse_rat(tol).map_err(to_py_err)?;
    let grid = value_grid(oracle.as_ref(), &rows, &cols).map_err(to_py_err)?;
    let report = gap_report(&grid, &tol).map_err(to_py_err)?;
    Ok((
        grid.values.iter().map(|row| row.iter().map(format_rat).collect()).collect(),
        format_rat(&report.upper_estimate),
        format_rat(&report.lower_estimate),
        report.lower_exact,
        report.converged,
    ))
}

/// Greedy staircase against a zoo oracle: (rows, cols, stalled).
#[pyfunction]
fn greedy_staircase(oracle: &str, budget: u64) -> PyResult<(Vec<u64>, Vec<u64>, bool)> {
    let oracle = lookup_oracle(oracle)?;
    let result = staircase_greedy(oracle.as_ref(), budget).map_err(to_py_err)?;
    Ok((result.witness.rows, result.witness.cols, result.stalled))
}

/// Fractional matching and cover numbers with their solutions:
/// (nu_star, matching by edge index, tau_star, cover by vertex label).
#[pyfunction]
fn hyper(
    vertices: Vec<String>,
    edges: Vec<Vec<String>>,
) -> PyResult<(String, BTreeMap<u64, String>, String, BTreeMap<String, String>)> {
    let h = Hypergraph::from_labels(vertices, edges).map_err(to_py_err)?;
    let (nu, matching) = nu_star(&h).map_err(to_py_err)?;
    let (tau, cover) = tau_star(&h).map_err(to_py_err)?;
    let cover_by_label: BTreeMap<String, String> = cover
        .weights
        .iter()
        .map(|(&v, w)| (h.vertex_labels()[(v - 1) as usize].clone(), format_rat(w)))
        .collect();
    Ok((
        format_rat(&nu),
        matching.weights.iter().map(|(&e, w)| (e, format_rat(w))).collect(),
        format_rat(&tau),
        cover_by_label,
    ))
}

/// Incidence game of a hypergraph.
#[pyfunction]
fn hyper_game(vertices: Vec<String>, edges: Vec<Vec<String>>) -> PyResult<Game> {
    let h = Hypergraph::from_labels(vertices, edges).map_err(to_py_err)?;
    Ok(Game { inner: game_of_hypergraph(&h).map_err(to_py_err)? })
}

/// Divergent series staying within the family's unit bound:
/// (terms, mass, violation count).
#[pyfunction]
fn fooling(family: &str, eps: &str, horizon: u64) -> PyResult<(Vec<String>, String, usize)> {
    let family = lookup_family(family)?;
    let eps = parse_rat(eps).map_err(to_py_err)?;
    let series = fooling_series(&family, &eps, horizon).map_err(to_py_err)?;
    let terms: Vec<_> = (1..=horizon).map(|i| series.term(i)).collect();
    let mass = format_rat(&terms.iter().cloned().sum());
    let violations =
        minimax_lab::check_premise(&family, &series, horizon).map_err(to_py_err)?;
    Ok((terms.iter().map(format_rat).collect(), mass, violations.len()))
}

#[pyfunction]
fn enforcing_constant(family: &str, horizon: u64) -> PyResult<String> {
    let family = lookup_family(family)?;
    Ok(format_rat(&enforcing_constant_lower(&family, horizon).map_err(to_py_err)?))
}

/// Game window of the family whose rows are the members within the horizon.
#[pyfunction]
fn family_window(family: &str, horizon: u64) -> PyResult<Game> {
    let family = lookup_family(family)?.restrict(horizon).map_err(to_py_err)?;
    let oracle = family_game(&family).map_err(to_py_err)?;
    let max_col = family
        .enumerate_members()
        .map_err(to_py_err)?
        .iter()
        .filter_map(|m| m.last().copied())
        .max()
        .unwrap_or(1);
    Ok(Game {
        inner: truncate(&oracle, oracle.n_members(), max_col).map_err(to_py_err)?,
    })
}

/// Prefix densities: (row_estimates, col_estimates, candidate or None).
#[pyfunction]
#[pyo3(signature = (oracle, prefix, rows = 20, cols = 20))]
fn density(
    oracle: &str,
    prefix: u64,
    rows: u64,
    cols: u64,
) -> PyResult<(Vec<String>, Vec<String>, Option<(String, String)>)> {
    let oracle = lookup_oracle(oracle)?;
    let report =
        minimax_lab::density_report(oracle.as_ref(), rows, cols, prefix).map_err(to_py_err)?;
    Ok((
        report.row_estimates.iter().map(format_rat).collect(),
        report.col_estimates.iter().map(format_rat).collect(),
        report.candidate.map(|(a, b)| (format_rat(&a), format_rat(&b))),
    ))
}

/// Best pure row against a finite-support column strategy given as
/// {index: "a/b"}: returns (row, payoff).
#[pyfunction]
fn best_response(game: &Game, q: BTreeMap<u64, String>) -> PyResult<(u64, String)> {
    let weights = q
        .into_iter()
        .map(|(t, w)| Ok((t, parse_rat(&w).map_err(to_py_err)?)))
        .collect::<PyResult<BTreeMap<_, _>>>()?;
    let q = MixedStrategy::new(weights).map_err(to_py_err)?;
    let (row, payoff) = minimax_lab::best_pure_response(&game.inner, &q).map_err(to_py_err)?;
    Ok((row, format_rat(&payoff)))
}

/// Largest chain of family members within the horizon, as sorted lists.
#[pyfunction]
fn longest_chain(family: &str, horizon: u64) -> PyResult<Vec<Vec<u64>>> {
    let family = lookup_family(family)?.restrict(horizon).map_err(to_py_err)?;
    let chain = minimax_lab::longest_chain(&family).map_err(to_py_err)?;
    Ok(chain
        .sets()
        .iter()
        .map(|s: &BTreeSet<u64>| s.iter().copied().collect())
        .collect())
}

#[pymodule]
fn minimax_lab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Game>()?;
    m.add_function(wrap_pyfunction!(zoo_window, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_names, m)?)?;
    m.add_function(wrap_pyfunction!(family_names, m)?)?;
    m.add_function(wrap_pyfunction!(grid, m)?)?;
    m.add_function(wrap_pyfunction!(greedy_staircase, m)?)?;
    m.add_function(wrap_pyfunction!(hyper, m)?)?;
    m.add_function(wrap_pyfunction!(hyper_game, m)?)?;
    m.add_function(wrap_pyfunction!(fooling, m)?)?;
    m.add_function(wrap_pyfunction!(enforcing_constant, m)?)?;
    m.add_function(wrap_pyfunction!(family_window, m)?)?;
    m.add_function(wrap_pyfunction!(density, m)?)?;
    m.add_function(wrap_pyfunction!(best_response, m)?)?;
    m.add_function(wrap_pyfunction!(longest_chain, m)?)?;
    Ok(())
}
