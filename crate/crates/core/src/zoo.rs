//! Canonical infinite games used throughout the library and the CLI.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::game::FiniteGame;
use crate::oracle::GameOracle;
use crate::setfam::SetFamily;

/// An oracle defined by plain payoff rules.
pub struct RuleOracle {
    name: &'static str,
    payoff: fn(u64, u64) -> bool,
    support_bound: Option<fn(u64) -> u64>,
    rows_all_finite: Option<bool>,
    row_scan: fn(&[u64]) -> u64,
    col_scan: fn(&[u64]) -> u64,
}

impl GameOracle for RuleOracle {
    fn name(&self) -> &str {
        self.name
    }

    fn payoff(&self, row: u64, col: u64) -> bool {
        (self.payoff)(row, col)
    }

    fn row_support_bound(&self, row: u64) -> Option<u64> {
        self.support_bound.map(|f| f(row))
    }

    fn rows_all_finite(&self) -> Option<bool> {
        self.rows_all_finite
    }

    fn row_scan_bound(&self, cols: &[u64]) -> Option<u64> {
        Some((self.row_scan)(cols))
    }

    fn col_scan_bound(&self, rows: &[u64]) -> Option<u64> {
        Some((self.col_scan)(rows))
    }
}

fn max_of(indices: &[u64]) -> u64 {
    *indices.last().expect("index sets are validated non-empty")
}

/// The larger number game: the row player wins ties.
/// Row patterns on any column window are exactly its prefixes, so every
/// pattern is realized by some row up to the window maximum; column patterns
/// are suffixes and flatten out one past the largest row.
pub fn lng() -> RuleOracle {
    RuleOracle {
        name: "lng",
        payoff: |s, t| s >= t,
        support_bound: Some(|s| s),
        rows_all_finite: Some(true),
        row_scan: max_of,
        col_scan: |rows| max_of(rows) + 1,
    }
}

/// The larger number game with ties going to the column player.
pub fn lng_strict() -> RuleOracle {
    RuleOracle {
        name: "lng-strict",
        payoff: |s, t| s > t,
        support_bound: Some(|s| s - 1),
        rows_all_finite: Some(true),
        row_scan: |cols| max_of(cols) + 1,
        col_scan: max_of,
    }
}

/// Infinite matching pennies: the row player wins on exact agreement only.
pub fn diagonal() -> RuleOracle {
    RuleOracle {
        name: "diagonal",
        payoff: |s, t| s == t,
        support_bound: Some(|s| s),
        rows_all_finite: Some(true),
        row_scan: |cols| max_of(cols) + 1,
        col_scan: |rows| max_of(rows) + 1,
    }
}

/// Two interleaved copies of N as columns: copy one on the odd indices,
/// copy two on the even. Row 2n-1 beats the first n elements of copy one
/// plus the n-th element of copy two; row 2n is the mirror image.
/// Patterns in either direction stop changing a few indices past the window
/// maximum, once the window's elements of both copies are exhausted.
pub fn two_copies() -> RuleOracle {
    RuleOracle {
        name: "two-copies",
        payoff: |r, c| {
            let level = r.div_ceil(2);
            if r % 2 == 1 {
                if c % 2 == 1 { c <= 2 * level - 1 } else { c == 2 * level }
            } else if c % 2 == 0 {
                c <= 2 * level
            } else {
                c == 2 * level - 1
            }
        },
        support_bound: Some(|r| if r % 2 == 1 { r + 1 } else { r }),
        rows_all_finite: Some(true),
        row_scan: |cols| max_of(cols) + 4,
        col_scan: |rows| max_of(rows) + 4,
    }
}

/// The incidence game of the tail hypergraph: vertex v lies in edge j
/// exactly when v >= j.
pub fn tail_game() -> RuleOracle {
    RuleOracle {
        name: "tail",
        payoff: |v, j| v >= j,
        support_bound: Some(|v| v),
        rows_all_finite: Some(true),
        row_scan: max_of,
        col_scan: |rows| max_of(rows) + 1,
    }
}

pub fn ones() -> RuleOracle {
    RuleOracle {
        name: "ones",
        payoff: |_, _| true,
        support_bound: None,
        rows_all_finite: Some(false),
        row_scan: |_| 1,
        col_scan: |_| 1,
    }
}

pub fn zeros() -> RuleOracle {
    RuleOracle {
        name: "zeros",
        payoff: |_, _| false,
        support_bound: Some(|_| 0),
        rows_all_finite: Some(true),
        row_scan: |_| 1,
        col_scan: |_| 1,
    }
}

/// The game whose rows are the members of a finite family: row i wins
/// against column t exactly when t lies in the i-th member. Rows past the
/// last member lose everywhere, so truncations taller than the family are
/// padded with losing rows.
pub struct FamilyOracle {
    name: String,
    members: Vec<BTreeSet<u64>>,
    max_element: u64,
}

pub fn family_game(family: &SetFamily) -> Result<FamilyOracle> {
    let members = family.enumerate_members()?;
    if members.is_empty() {
        return Err(Error::Domain("family game needs a non-empty family".into()));
    }
    let max_element = members.iter().filter_map(|m| m.last().copied()).max().unwrap_or(0);
    Ok(FamilyOracle { name: format!("family:{}", family.name()), members, max_element })
}

impl FamilyOracle {
    pub fn n_members(&self) -> u64 {
        self.members.len() as u64
    }

    pub fn member(&self, row: u64) -> Option<&BTreeSet<u64>> {
        self.members.get((row as usize).checked_sub(1)?)
    }
}

impl GameOracle for FamilyOracle {
    fn name(&self) -> &str {
        &self.name
    }

    fn payoff(&self, row: u64, col: u64) -> bool {
        self.member(row).is_some_and(|m| m.contains(&col))
    }

    fn row_support_bound(&self, row: u64) -> Option<u64> {
        Some(self.member(row).and_then(|m| m.last().copied()).unwrap_or(0))
    }

    fn rows_all_finite(&self) -> Option<bool> {
        Some(true)
    }

    fn row_scan_bound(&self, _cols: &[u64]) -> Option<u64> {
        Some(self.members.len() as u64 + 1)
    }

    fn col_scan_bound(&self, _rows: &[u64]) -> Option<u64> {
        Some(self.max_element + 1)
    }
}

/// A finite game viewed as an infinite oracle: entries outside the matrix
/// are losses for the row player.
pub struct FiniteOracle {
    name: String,
    game: FiniteGame,
    last_one: Vec<u64>,
}

impl FiniteOracle {
    pub fn new(name: impl Into<String>, game: FiniteGame) -> Result<Self> {
        if !game.win_lose() {
            return Err(Error::Domain("oracle payoffs must be 0 or 1".into()));
        }
        let last_one = game
            .rows()
            .iter()
            .map(|row| {
                row.iter().enumerate().rev().find(|(_, v)| !num_traits::Zero::is_zero(*v)).map_or(0, |(j, _)| j as u64 + 1)
            })
            .collect();
        Ok(FiniteOracle { name: name.into(), game, last_one })
    }

    pub fn game(&self) -> &FiniteGame {
        &self.game
    }
}

impl GameOracle for FiniteOracle {
    fn name(&self) -> &str {
        &self.name
    }

    fn payoff(&self, row: u64, col: u64) -> bool {
        row >= 1
            && col >= 1
            && row <= self.game.n_rows()
            && col <= self.game.n_cols()
            && !num_traits::Zero::is_zero(self.game.entry(row, col).expect("in range"))
    }

    fn row_support_bound(&self, row: u64) -> Option<u64> {
        Some(self.last_one.get((row as usize).checked_sub(1)?).copied().unwrap_or(0))
    }

    fn rows_all_finite(&self) -> Option<bool> {
        Some(true)
    }

    fn row_scan_bound(&self, _cols: &[u64]) -> Option<u64> {
        Some(self.game.n_rows() + 1)
    }

    fn col_scan_bound(&self, _rows: &[u64]) -> Option<u64> {
        Some(self.game.n_cols() + 1)
    }
}

/// The k×k fully lower-triangular matrix.
pub fn staircase_matrix(k: u64) -> Result<FiniteGame> {
    FiniteGame::from_predicate(k, k, |s, t| s >= t)
}

pub fn by_name(name: &str) -> Option<Box<dyn GameOracle>> {
    match name {
        "lng" => Some(Box::new(lng())),
        "lng-strict" => Some(Box::new(lng_strict())),
        "diagonal" => Some(Box::new(diagonal())),
        "two-copies" => Some(Box::new(two_copies())),
        "tail" => Some(Box::new(tail_game())),
        "ones" => Some(Box::new(ones())),
        "zeros" => Some(Box::new(zeros())),
        _ => None,
    }
}

pub const ORACLE_NAMES: [&str; 7] =
    ["lng", "lng-strict", "diagonal", "two-copies", "tail", "ones", "zeros"];

pub fn all_oracles() -> Vec<Box<dyn GameOracle>> {
    ORACLE_NAMES.iter().map(|n| by_name(n).expect("listed")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lng_row_player_wins_ties() {
        assert!(lng().payoff(5, 5));
        assert!(!lng_strict().payoff(5, 5));
        assert!(lng_strict().payoff(6, 5));
    }

    #[test]
    fn tail_game_membership() {
        assert!(!tail_game().payoff(3, 5));
        assert!(tail_game().payoff(7, 5));
    }

    #[test]
    fn two_copies_row_supports() {
        let o = two_copies();
        let support = |r: u64| -> Vec<u64> { (1..=12).filter(|&c| o.payoff(r, c)).collect() };
        assert_eq!(support(1), vec![1, 2]);
        assert_eq!(support(2), vec![1, 2]);
        assert_eq!(support(3), vec![1, 3, 4]);
        assert_eq!(support(4), vec![2, 3, 4]);
        assert_eq!(support(5), vec![1, 3, 5, 6]);
        assert_eq!(support(6), vec![2, 4, 5, 6]);
    }

    #[test]
    fn support_bounds_are_tight() {
        for oracle in all_oracles() {
            for r in 1..=30u64 {
                let Some(b) = oracle.row_support_bound(r) else { continue };
                for t in b + 1..=b + 20 {
                    assert!(!oracle.payoff(r, t), "{} row {r} col {t}", oracle.name());
                }
                if b > 0 {
                    assert!(oracle.payoff(r, b), "{} row {r} bound {b}", oracle.name());
                }
            }
        }
    }

    #[test]
    fn scan_bounds_capture_every_pattern_in_wide_window() {
        // Patterns realized anywhere in a 60-deep window must already appear
        // within the advertised scan bound.
        let cols: Vec<u64> = vec![1, 2, 5, 8];
        for oracle in all_oracles() {
            let declared = oracle.distinct_row_patterns(&cols).unwrap();
            let mut wide = std::collections::BTreeSet::new();
            for r in 1..=60 {
                wide.insert(oracle.row_pattern(r, &cols));
            }
            let listed: std::collections::BTreeSet<_> =
                declared.iter().map(|(p, _)| p.clone()).collect();
            assert_eq!(listed, wide, "{}", oracle.name());
            for (pat, rep) in &declared {
                assert_eq!(&oracle.row_pattern(*rep, &cols), pat, "{}", oracle.name());
            }
        }
    }

    #[test]
    fn col_scan_bounds_capture_every_pattern_in_wide_window() {
        let rows: Vec<u64> = vec![1, 3, 4, 9];
        for oracle in all_oracles() {
            let declared = oracle.distinct_col_patterns(&rows).unwrap();
            let mut wide = std::collections::BTreeSet::new();
            for c in 1..=60 {
                wide.insert(oracle.col_pattern(c, &rows));
            }
            let listed: std::collections::BTreeSet<_> =
                declared.iter().map(|(p, _)| p.clone()).collect();
            assert_eq!(listed, wide, "{}", oracle.name());
        }
    }

    #[test]
    fn staircase_matrix_matches_lng_window() {
        let m = staircase_matrix(4).unwrap();
        let w = crate::oracle::truncate(&lng(), 4, 4).unwrap();
        assert_eq!(m.rows(), w.rows());
    }

    #[test]
    fn finite_oracle_extends_with_losses() {
        let o = FiniteOracle::new("id2", staircase_matrix(2).unwrap()).unwrap();
        assert!(o.payoff(2, 1));
        assert!(!o.payoff(3, 1));
        assert!(!o.payoff(1, 3));
        assert_eq!(o.row_support_bound(1), Some(1));
        assert_eq!(o.row_support_bound(9), Some(0));
    }

    #[test]
    fn unknown_oracle_name() {
        assert!(by_name("nope").is_none());
    }
}
