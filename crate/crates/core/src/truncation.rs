//! Value grids over growing truncations, duality-gap diagnostics, and the
//! alternating extractor that pulls a violating core out of a claimed gap.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use num_traits::Zero;

use crate::error::{Error, Result, Side};
use crate::game::{FiniteGame, MixedStrategy};
use crate::oracle::{label_index, reduced_truncation, truncate, GameOracle};
use crate::rational::{rat_u64, Rat};
use crate::solver::{solve, SolveResult};

/// Exact values V[n][m] of the n×m truncations over two schedules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueGrid {
    pub row_schedule: Vec<u64>,
    pub col_schedule: Vec<u64>,
    /// values[k][l] = value of the row_schedule[k] × col_schedule[l] window.
    pub values: Vec<Vec<Rat>>,
    solves: Vec<Vec<SolveResult>>,
    /// For each scheduled n, a column that defeats every row <= n, when the
    /// oracle's row support bounds certify one. Pins the n-row limit at 0.
    escape_cols: Option<Vec<u64>>,
}

impl ValueGrid {
    pub fn solve_at(&self, k: usize, l: usize) -> &SolveResult {
        &self.solves[k][l]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellWitness {
    pub rows: u64,
    pub cols: u64,
    pub value: Rat,
    pub row_strategy: MixedStrategy,
    pub col_strategy: MixedStrategy,
}

/// One-sided estimates of the two order-of-limits readings of the grid.
///
/// `upper_estimate` bounds the columns-first reading from the computed
/// cells; `lower_estimate` is exact (and zero) when the oracle certifies
/// escape columns, otherwise it is the last-column reading and only an
/// estimate. The two are not ordered in general.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapReport {
    pub upper_estimate: Rat,
    pub lower_estimate: Rat,
    pub lower_exact: bool,
    pub converged: bool,
    pub tol: Rat,
    pub upper_witness: CellWitness,
    pub lower_witness: CellWitness,
}

fn check_schedule(schedule: &[u64], what: &str) -> Result<()> {
    if schedule.is_empty() {
        return Err(Error::Domain(format!("{what} schedule is empty")));
    }
    if schedule[0] == 0 {
        return Err(Error::Domain(format!("{what} schedule entries are 1-based")));
    }
    if schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain(format!("{what} schedule must be strictly increasing")));
    }
    Ok(())
}

pub fn value_grid(
    oracle: &dyn GameOracle,
    row_schedule: &[u64],
    col_schedule: &[u64],
) -> Result<ValueGrid> {
    value_grid_threaded(oracle, row_schedule, col_schedule, 1)
}

/// Same result as `value_grid` bit for bit; cells are solved by up to
/// `threads` workers.
pub fn value_grid_threaded(
    oracle: &dyn GameOracle,
    row_schedule: &[u64],
    col_schedule: &[u64],
    threads: usize,
) -> Result<ValueGrid> {
    check_schedule(row_schedule, "row")?;
    check_schedule(col_schedule, "column")?;

    let cells: Vec<(usize, usize)> = (0..row_schedule.len())
        .flat_map(|k| (0..col_schedule.len()).map(move |l| (k, l)))
        .collect();
    let solve_cell = |k: usize, l: usize| -> Result<SolveResult> {
        let (n, m) = (row_schedule[k], col_schedule[l]);
        let game = truncate(oracle, n, m)?;
        solve(&game).map_err(|e| match e {
            Error::Resource(msg) => Error::Resource(format!("grid cell ({n},{m}): {msg}")),
            other => other,
        })
    };

    let mut results: Vec<Vec<Option<SolveResult>>> =
        vec![vec![None; col_schedule.len()]; row_schedule.len()];
    if threads <= 1 {
        for &(k, l) in &cells {
            results[k][l] = Some(solve_cell(k, l)?);
        }
    } else {
        let next = AtomicUsize::new(0);
        let collected: Mutex<Vec<(usize, usize, Result<SolveResult>)>> = Mutex::new(Vec::new());
        std::thread::scope(|scope| {
            for _ in 0..threads.min(cells.len()) {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    let Some(&(k, l)) = cells.get(i) else { break };
                    let r = solve_cell(k, l);
                    collected.lock().expect("collector").push((k, l, r));
                });
            }
        });
        let mut collected = collected.into_inner().expect("collector");
        collected.sort_by_key(|&(k, l, _)| (k, l));
        for (k, l, r) in collected {
            results[k][l] = Some(r?);
        }
    }

    let solves: Vec<Vec<SolveResult>> = results
        .into_iter()
        .map(|row| row.into_iter().map(|c| c.expect("all cells solved")).collect())
        .collect();
    let values: Vec<Vec<Rat>> =
        solves.iter().map(|row| row.iter().map(|s| s.value.clone()).collect()).collect();

    for k in 0..values.len() {
        for l in 0..values[k].len() {
            if (k > 0 && values[k][l] < values[k - 1][l])
                || (l > 0 && values[k][l] > values[k][l - 1])
            {
                return Err(Error::Internal("value grid lost monotonicity".into()));
            }
        }
    }

    Ok(ValueGrid {
        row_schedule: row_schedule.to_vec(),
        col_schedule: col_schedule.to_vec(),
        values,
        solves,
        escape_cols: escape_columns(oracle, row_schedule),
    })
}

fn escape_columns(oracle: &dyn GameOracle, row_schedule: &[u64]) -> Option<Vec<u64>> {
    let n_max = *row_schedule.last()?;
    let mut bounds = Vec::with_capacity(n_max as usize);
    let mut running = 0u64;
    for r in 1..=n_max {
        running = running.max(oracle.row_support_bound(r)?);
        bounds.push(running);
    }
    Some(row_schedule.iter().map(|&n| bounds[(n - 1) as usize] + 1).collect())
}

/// The exact limit of V[n][m] as the column window grows, when the oracle's
/// row support bounds certify an escape column that defeats every row <= n.
/// Returns (escape column, limit); the limit is always 0 in this regime.
pub fn row_limit(oracle: &dyn GameOracle, n: u64) -> Option<(u64, Rat)> {
    let escape = escape_columns(oracle, &[n])?[0];
    debug_assert!((1..=n).all(|s| !oracle.payoff(s, escape)));
    Some((escape, Rat::zero()))
}

pub fn gap_report(grid: &ValueGrid, tol: &Rat) -> Result<GapReport> {
    if tol < &Rat::zero() {
        return Err(Error::Domain(format!("tolerance {tol} is negative")));
    }
    let (nk, nl) = (grid.row_schedule.len(), grid.col_schedule.len());

    let col_max = |l: usize| -> usize {
        (0..nk).rev().fold(0, |best, k| if grid.values[k][l] > grid.values[best][l] { k } else { best })
    };
    let mut best_l = 0;
    for l in 1..nl {
        if grid.values[col_max(l)][l] < grid.values[col_max(best_l)][best_l] {
            best_l = l;
        }
    }
    let upper_k = col_max(best_l);
    let upper_witness = cell_witness(grid, upper_k, best_l);
    let upper_estimate = grid.values[upper_k][best_l].clone();

    let (lower_estimate, lower_exact, lower_witness) = match &grid.escape_cols {
        Some(escapes) => {
            let witness = CellWitness {
                rows: *grid.row_schedule.last().expect("non-empty"),
                cols: *escapes.last().expect("non-empty"),
                value: Rat::zero(),
                row_strategy: MixedStrategy::point_mass(1),
                col_strategy: MixedStrategy::point_mass(*escapes.last().expect("non-empty")),
            };
            (Rat::zero(), true, witness)
        }
        None => {
            let l = nl - 1;
            let k = (0..nk).fold(0, |best, k| {
                if grid.values[k][l] > grid.values[best][l] { k } else { best }
            });
            (grid.values[k][l].clone(), false, cell_witness(grid, k, l))
        }
    };

    let converged = nk >= 2 && nl >= 2 && {
        let corner = &grid.values[nk - 1][nl - 1];
        abs_diff(corner, &grid.values[nk - 2][nl - 1]) <= *tol
            && abs_diff(corner, &grid.values[nk - 1][nl - 2]) <= *tol
    };

    Ok(GapReport {
        upper_estimate,
        lower_estimate,
        lower_exact,
        converged,
        tol: tol.clone(),
        upper_witness,
        lower_witness,
    })
}

fn cell_witness(grid: &ValueGrid, k: usize, l: usize) -> CellWitness {
    let s = &grid.solves[k][l];
    CellWitness {
        rows: grid.row_schedule[k],
        cols: grid.col_schedule[l],
        value: s.value.clone(),
        row_strategy: s.p_opt.clone(),
        col_strategy: s.q_opt.clone(),
    }
}

fn abs_diff(a: &Rat, b: &Rat) -> Rat {
    if a >= b { a - b } else { b - a }
}

/// Expected payoff of a mixed row strategy against one column, straight from
/// the oracle. Used to re-check solver output independently.
pub fn mix_vs_col(oracle: &dyn GameOracle, p: &MixedStrategy, t: u64) -> Rat {
    p.iter().map(|(&s, w)| w * rat_u64(oracle.payoff(s, t) as u64)).sum()
}

/// Expected payoff of one row against a mixed column strategy.
pub fn mix_vs_row(oracle: &dyn GameOracle, s: u64, q: &MixedStrategy) -> Rat {
    q.iter().map(|(&t, w)| w * rat_u64(oracle.payoff(s, t) as u64)).sum()
}

fn remap_to_labels(strategy: &MixedStrategy, labels: &[String]) -> Result<MixedStrategy> {
    let indices: Vec<u64> =
        labels.iter().map(|l| label_index(l)).collect::<Result<_>>()?;
    strategy.reindex(|i| indices[(i - 1) as usize])
}

/// A row mix that wins with probability at least 1 − eps against every
/// column in `cols`, if the reduced game over those columns allows one.
pub fn cover_columns(
    oracle: &dyn GameOracle,
    cols: &[u64],
    eps: &Rat,
) -> Result<MixedStrategy> {
    if eps <= &Rat::zero() || eps >= &rat_u64(1) {
        return Err(Error::Domain(format!("eps = {eps} must lie strictly between 0 and 1")));
    }
    let reduced = reduced_truncation(oracle, cols)?;
    let r = solve(&reduced)?;
    let target = rat_u64(1) - eps;
    if r.value < target {
        return Err(Error::CoverageInfeasible { achieved: r.value });
    }
    let p = remap_to_labels(&r.p_opt, reduced.row_labels())?;
    for &t in cols {
        if mix_vs_col(oracle, &p, t) < target {
            return Err(Error::Internal("cover strategy failed its own inequality".into()));
        }
    }
    Ok(p)
}

/// The alternating sequence p(1), q(1), ..., p(d+1), q(d+1) whose supports
/// trace the claimed gap: each p answers all columns seen so far at v_bar or
/// better, each q holds all rows seen so far to v_low or worse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViolatingCore {
    pub pairs: Vec<(MixedStrategy, MixedStrategy)>,
    pub row_support: Vec<u64>,
    pub col_support: Vec<u64>,
}

/// Runs the alternating construction for `depth` rounds past the seeded
/// p(1) = point mass on row 1. Both inequalities are re-verified exactly
/// against the oracle at every step; if a restricted game's value lands on
/// the wrong side of the claimed gap, the construction stops with the
/// offending round, side, and value.
pub fn extract_violating_core(
    oracle: &dyn GameOracle,
    v_low: &Rat,
    v_bar: &Rat,
    depth: u64,
) -> Result<ViolatingCore> {
    if v_low >= v_bar {
        return Err(Error::Domain(format!("v_low = {v_low} must be below v_bar = {v_bar}")));
    }

    let mut rows_seen: BTreeSet<u64> = BTreeSet::from([1]);
    let mut cols_seen: BTreeSet<u64> = BTreeSet::new();
    let mut pairs: Vec<(MixedStrategy, MixedStrategy)> = Vec::new();

    for round in 1..=depth + 1 {
        let p = if round == 1 {
            MixedStrategy::point_mass(1)
        } else {
            let cols: Vec<u64> = cols_seen.iter().copied().collect();
            let reduced = reduced_truncation(oracle, &cols)?;
            let r = solve(&reduced)?;
            if r.value < *v_bar {
                return Err(Error::GapInfeasible {
                    round,
                    side: Side::Row,
                    restricted_value: r.value,
                });
            }
            let p = remap_to_labels(&r.p_opt, reduced.row_labels())?;
            if cols.iter().any(|&t| mix_vs_col(oracle, &p, t) < *v_bar) {
                return Err(Error::Internal("extractor p-step lost its inequality".into()));
            }
            rows_seen.extend(p.support());
            p
        };

        let rows: Vec<u64> = rows_seen.iter().copied().collect();
        let reduced = reduced_over_rows(oracle, &rows)?;
        let r = solve(&reduced)?;
        if r.value > *v_low {
            return Err(Error::GapInfeasible {
                round,
                side: Side::Col,
                restricted_value: r.value,
            });
        }
        let q = remap_to_labels(&r.q_opt, reduced.col_labels())?;
        if rows.iter().any(|&s| mix_vs_row(oracle, s, &q) > *v_low) {
            return Err(Error::Internal("extractor q-step lost its inequality".into()));
        }
        cols_seen.extend(q.support());
        pairs.push((p, q));
    }

    Ok(ViolatingCore {
        pairs,
        row_support: rows_seen.into_iter().collect(),
        col_support: cols_seen.into_iter().collect(),
    })
}

/// Mirror image of `reduced_truncation`: the game on the given rows with
/// columns compressed to one representative per achievable pattern.
fn reduced_over_rows(oracle: &dyn GameOracle, rows: &[u64]) -> Result<FiniteGame> {
    let patterns = oracle.distinct_col_patterns(rows)?;
    let payoff = rows
        .iter()
        .enumerate()
        .map(|(i, _)| patterns.iter().map(|(pat, _)| rat_u64(pat[i] as u64)).collect())
        .collect();
    FiniteGame::new(
        rows.iter().map(|s| s.to_string()).collect(),
        patterns.iter().map(|(_, rep)| rep.to_string()).collect(),
        payoff,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};
    use crate::zoo;

    const POW2: [u64; 4] = [1, 2, 4, 8];

    #[test]
    fn lng_grid_is_step_function() {
        let grid = value_grid(&zoo::lng(), &POW2, &POW2).unwrap();
        for (k, &n) in POW2.iter().enumerate() {
            for (l, &m) in POW2.iter().enumerate() {
                let expect = rat_int((n >= m) as i64);
                assert_eq!(grid.values[k][l], expect, "cell ({n},{m})");
            }
        }
    }

    #[test]
    fn diagonal_grid_decays_on_the_diagonal() {
        let grid = value_grid(&zoo::diagonal(), &POW2, &POW2).unwrap();
        for (k, &n) in POW2.iter().enumerate() {
            for (l, &m) in POW2.iter().enumerate() {
                let expect = if m <= n { rat(1, m as i64) } else { rat_int(0) };
                assert_eq!(grid.values[k][l], expect, "cell ({n},{m})");
            }
        }
    }

    #[test]
    fn constant_one_grid() {
        let grid = value_grid(&zoo::ones(), &[1, 2], &[1, 2]).unwrap();
        assert!(grid.values.iter().flatten().all(|v| v == &rat_int(1)));
        let report = gap_report(&grid, &rat(1, 100)).unwrap();
        assert_eq!(report.upper_estimate, rat_int(1));
        assert_eq!(report.lower_estimate, rat_int(1));
        assert!(!report.lower_exact);
        assert!(report.converged);
    }

    #[test]
    fn lng_gap_is_zero_one() {
        let grid = value_grid(&zoo::lng(), &POW2, &POW2).unwrap();
        let report = gap_report(&grid, &rat(99, 100)).unwrap();
        assert_eq!(report.upper_estimate, rat_int(1));
        assert_eq!(report.lower_estimate, rat_int(0));
        assert!(report.lower_exact);
        assert!(!report.converged);
        assert_eq!(report.lower_witness.value, rat_int(0));
        assert_eq!(report.lower_witness.cols, 9);
    }

    #[test]
    fn diagonal_gap_converges_at_one_eighth() {
        let grid = value_grid(&zoo::diagonal(), &POW2, &POW2).unwrap();
        assert!(gap_report(&grid, &rat(1, 8)).unwrap().converged);
        assert!(!gap_report(&grid, &rat(1, 9)).unwrap().converged);
        let report = gap_report(&grid, &rat(1, 8)).unwrap();
        assert_eq!(report.upper_estimate, rat(1, 8));
        assert_eq!(report.lower_estimate, rat_int(0));
    }

    #[test]
    fn witnesses_reproduce_their_cell_values() {
        for oracle in [zoo::lng(), zoo::diagonal(), zoo::two_copies()] {
            let grid = value_grid(&oracle, &POW2, &POW2).unwrap();
            let report = gap_report(&grid, &rat(1, 100)).unwrap();
            for w in [&report.upper_witness, &report.lower_witness] {
                let game = truncate(&oracle, w.rows, w.cols).unwrap();
                assert_eq!(
                    game.pi_mix(&w.row_strategy, &w.col_strategy).unwrap(),
                    w.value,
                    "{}",
                    oracle.name()
                );
            }
        }
    }

    #[test]
    fn threaded_grid_is_identical() {
        let base = value_grid(&zoo::two_copies(), &POW2, &POW2).unwrap();
        for threads in 2..=4 {
            let alt = value_grid_threaded(&zoo::two_copies(), &POW2, &POW2, threads).unwrap();
            assert_eq!(alt, base);
        }
    }

    #[test]
    fn grid_resource_error_names_the_cell() {
        let err = value_grid(&zoo::lng(), &[1, 301], &[1]).unwrap_err();
        match err {
            Error::Resource(msg) => assert!(msg.contains("(301,1)"), "{msg}"),
            other => panic!("expected resource error, got {other:?}"),
        }
    }

    #[test]
    fn row_limit_is_certified_zero_for_bounded_oracles() {
        for n in [1u64, 3, 16] {
            let (escape, limit) = row_limit(&zoo::two_copies(), n).unwrap();
            assert_eq!(limit, rat_int(0));
            for s in 1..=n {
                assert!(!zoo::two_copies().payoff(s, escape));
            }
        }
        assert!(row_limit(&zoo::ones(), 3).is_none());
    }

    #[test]
    fn cover_lng_prefix_columns() {
        let p = cover_columns(&zoo::lng(), &[1, 2, 3], &rat(1, 10)).unwrap();
        for t in [1, 2, 3] {
            assert_eq!(mix_vs_col(&zoo::lng(), &p, t), rat_int(1));
        }
    }

    #[test]
    fn cover_diagonal_fails_with_achieved_value() {
        let err = cover_columns(&zoo::diagonal(), &[1, 2], &rat(1, 10)).unwrap_err();
        match err {
            Error::CoverageInfeasible { achieved } => assert_eq!(achieved, rat(1, 2)),
            other => panic!("expected coverage failure, got {other:?}"),
        }
    }

    #[test]
    fn cover_single_winnable_column_is_point_mass() {
        let p = cover_columns(&zoo::lng(), &[5], &rat(1, 2)).unwrap();
        assert_eq!(p, MixedStrategy::point_mass(5));
    }

    #[test]
    fn extract_lng_walks_the_staircase() {
        let core = extract_violating_core(&zoo::lng(), &rat_int(0), &rat_int(1), 5).unwrap();
        assert_eq!(core.pairs.len(), 6);
        assert_eq!(core.row_support, vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(core.col_support, vec![2, 3, 4, 5, 6, 7]);
        // Eq-style re-check: each p answers every earlier column at 1, each
        // q holds every row seen so far at 0.
        let mut cols_before: Vec<u64> = vec![];
        let mut rows_so_far: Vec<u64> = vec![];
        for (p, q) in &core.pairs {
            for &t in &cols_before {
                assert_eq!(mix_vs_col(&zoo::lng(), p, t), rat_int(1));
            }
            rows_so_far.extend(p.support());
            for &s in &rows_so_far {
                assert_eq!(mix_vs_row(&zoo::lng(), s, q), rat_int(0));
            }
            cols_before.extend(q.support());
        }
    }

    #[test]
    fn extract_diagonal_reports_gap_infeasible() {
        let err =
            extract_violating_core(&zoo::diagonal(), &rat_int(0), &rat(1, 2), 3).unwrap_err();
        match err {
            Error::GapInfeasible { round, side, restricted_value } => {
                assert_eq!(round, 4);
                assert_eq!(side, Side::Row);
                assert_eq!(restricted_value, rat(1, 3));
            }
            other => panic!("expected gap-infeasible, got {other:?}"),
        }
    }

    #[test]
    fn extract_zeros_fails_at_first_p_solve() {
        let err = extract_violating_core(&zoo::zeros(), &rat_int(0), &rat(1, 2), 4).unwrap_err();
        match err {
            Error::GapInfeasible { round, side, restricted_value } => {
                assert_eq!(round, 2);
                assert_eq!(side, Side::Row);
                assert_eq!(restricted_value, rat_int(0));
            }
            other => panic!("expected gap-infeasible, got {other:?}"),
        }
    }

    #[test]
    fn extract_ones_fails_at_first_q_solve() {
        let err = extract_violating_core(&zoo::ones(), &rat_int(0), &rat_int(1), 2).unwrap_err();
        match err {
            Error::GapInfeasible { round, side, restricted_value } => {
                assert_eq!(round, 1);
                assert_eq!(side, Side::Col);
                assert_eq!(restricted_value, rat_int(1));
            }
            other => panic!("expected gap-infeasible, got {other:?}"),
        }
    }

    #[test]
    fn rejects_empty_gap() {
        let err =
            extract_violating_core(&zoo::lng(), &rat(1, 2), &rat(1, 2), 1).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }
}
