//! Intensional countable games: a payoff callback over all of N×N plus
//! enumeration capabilities that make finite analysis of the infinite game
//! possible.

use crate::error::{Error, Result};
use crate::game::FiniteGame;

/// A win pattern of one strategy against a finite window of opposing
/// strategies, bit i matching window position i.
pub type Pattern = Vec<bool>;

/// A countable win-lose game described by a total payoff rule.
///
/// `payoff` must be pure. The remaining methods are capabilities: oracles
/// that cannot answer soundly return `None` and operations needing them
/// fail with an unsupported-capability error instead of guessing.
pub trait GameOracle: Send + Sync {
    fn name(&self) -> &str;

    /// True iff the row player wins at (row, col). 1-based.
    fn payoff(&self, row: u64, col: u64) -> bool;

    /// Smallest b such that payoff(row, t) = 0 for every t > b, if known.
    /// Some(0) means the row wins nowhere.
    fn row_support_bound(&self, row: u64) -> Option<u64> {
        let _ = row;
        None
    }

    /// Whether every row wins against only finitely many columns.
    fn rows_all_finite(&self) -> Option<bool> {
        None
    }

    /// A row index R such that every achievable row pattern on `cols` is
    /// realized by some row ≤ R, if known.
    fn row_scan_bound(&self, cols: &[u64]) -> Option<u64> {
        let _ = cols;
        None
    }

    /// Column counterpart of `row_scan_bound`.
    fn col_scan_bound(&self, rows: &[u64]) -> Option<u64> {
        let _ = rows;
        None
    }

    fn row_pattern(&self, row: u64, cols: &[u64]) -> Pattern {
        cols.iter().map(|&t| self.payoff(row, t)).collect()
    }

    fn col_pattern(&self, col: u64, rows: &[u64]) -> Pattern {
        rows.iter().map(|&s| self.payoff(s, col)).collect()
    }

    /// Every achievable row pattern on `cols` exactly once, with its lowest
    /// representative row, ordered by representative.
    fn distinct_row_patterns(&self, cols: &[u64]) -> Result<Vec<(Pattern, u64)>> {
        check_index_set(cols, "cols")?;
        let bound = self.row_scan_bound(cols).ok_or_else(|| {
            Error::UnsupportedCapability(format!(
                "oracle {:?} cannot enumerate row patterns",
                self.name()
            ))
        })?;
        Ok(scan_patterns(bound, |i| self.row_pattern(i, cols)))
    }

    /// Every achievable column pattern on `rows` exactly once, with its
    /// lowest representative column, ordered by representative.
    fn distinct_col_patterns(&self, rows: &[u64]) -> Result<Vec<(Pattern, u64)>> {
        check_index_set(rows, "rows")?;
        let bound = self.col_scan_bound(rows).ok_or_else(|| {
            Error::UnsupportedCapability(format!(
                "oracle {:?} cannot enumerate column patterns",
                self.name()
            ))
        })?;
        Ok(scan_patterns(bound, |j| self.col_pattern(j, rows)))
    }
}

fn check_index_set(indices: &[u64], what: &str) -> Result<()> {
    if indices.is_empty() {
        return Err(Error::Domain(format!("{what} must be non-empty")));
    }
    if indices[0] == 0 {
        return Err(Error::Domain(format!("{what} are 1-based")));
    }
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain(format!("{what} must be strictly increasing")));
    }
    Ok(())
}

fn scan_patterns(bound: u64, pattern_of: impl Fn(u64) -> Pattern) -> Vec<(Pattern, u64)> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for i in 1..=bound.max(1) {
        let pat = pattern_of(i);
        if seen.insert(pat.clone()) {
            out.push((pat, i));
        }
    }
    out
}

/// The n×m window of the oracle's payoff matrix, rows 1..=n and
/// columns 1..=m, labeled by index.
pub fn truncate(oracle: &dyn GameOracle, n: u64, m: u64) -> Result<FiniteGame> {
    if n == 0 || m == 0 {
        return Err(Error::Domain("truncation needs n, m >= 1".into()));
    }
    FiniteGame::from_predicate(n, m, |s, t| oracle.payoff(s, t))
}

/// The game restricted to `cols` with rows compressed to one representative
/// per achievable pattern. Equivalent to the full infinite-row restriction:
/// rows with equal patterns are interchangeable.
///
/// Row labels carry the representative row index, column labels the column
/// index, so strategies map back to the original game.
pub fn reduced_truncation(oracle: &dyn GameOracle, cols: &[u64]) -> Result<FiniteGame> {
    let patterns = oracle.distinct_row_patterns(cols)?;
    let payoff = patterns
        .iter()
        .map(|(pat, _)| pat.iter().map(|&b| crate::rational::rat_u64(b as u64)).collect())
        .collect();
    FiniteGame::new(
        patterns.iter().map(|(_, rep)| rep.to_string()).collect(),
        cols.iter().map(|t| t.to_string()).collect(),
        payoff,
    )
}

/// Labels produced by `truncate`/`reduced_truncation` are bare indices;
/// recover them for mapping solved strategies back to oracle coordinates.
pub fn label_index(label: &str) -> Result<u64> {
    label
        .parse::<u64>()
        .map_err(|_| Error::Internal(format!("non-numeric strategy label {label:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::zoo;

    #[test]
    fn truncate_lng_3x3_lower_triangular() {
        let g = truncate(&zoo::lng(), 3, 3).unwrap();
        for s in 1..=3 {
            for t in 1..=3 {
                let expect = rat((s >= t) as i64, 1);
                assert_eq!(g.entry(s, t).unwrap(), &expect);
            }
        }
    }

    #[test]
    fn truncate_diagonal_2x4() {
        let g = truncate(&zoo::diagonal(), 2, 4).unwrap();
        let ones: Vec<(u64, u64)> = (1..=2)
            .flat_map(|s| (1..=4).map(move |t| (s, t)))
            .filter(|&(s, t)| g.entry(s, t).unwrap() == &rat(1, 1))
            .collect();
        assert_eq!(ones, vec![(1, 1), (2, 2)]);
    }

    #[test]
    fn reduced_lng_cols123_gives_three_prefixes() {
        let pats = zoo::lng().distinct_row_patterns(&[1, 2, 3]).unwrap();
        let got: Vec<(Pattern, u64)> = pats;
        assert_eq!(
            got,
            vec![
                (vec![true, false, false], 1),
                (vec![true, true, false], 2),
                (vec![true, true, true], 3),
            ]
        );
    }

    #[test]
    fn reduced_diagonal_cols12_gives_three_patterns() {
        let pats = zoo::diagonal().distinct_row_patterns(&[1, 2]).unwrap();
        assert_eq!(
            pats,
            vec![
                (vec![true, false], 1),
                (vec![false, true], 2),
                (vec![false, false], 3),
            ]
        );
    }

    #[test]
    fn single_column_has_at_most_two_patterns() {
        for oracle in zoo::all_oracles() {
            for c in [1u64, 2, 7] {
                let pats = oracle.distinct_row_patterns(&[c]).unwrap();
                assert!(pats.len() <= 2, "{} col {c}", oracle.name());
            }
        }
    }

    #[test]
    fn rejects_bad_index_sets() {
        let o = zoo::lng();
        assert!(o.distinct_row_patterns(&[]).is_err());
        assert!(o.distinct_row_patterns(&[0]).is_err());
        assert!(o.distinct_row_patterns(&[2, 2]).is_err());
        assert!(o.distinct_row_patterns(&[3, 1]).is_err());
    }

    #[test]
    fn reduced_truncation_labels_are_representatives() {
        let g = reduced_truncation(&zoo::lng(), &[1, 2, 3]).unwrap();
        assert_eq!(g.row_labels(), &["1".to_string(), "2".to_string(), "3".to_string()]);
        assert_eq!(g.col_labels(), &["1".to_string(), "2".to_string(), "3".to_string()]);
        assert_eq!(label_index(g.row_labels()[2].as_str()).unwrap(), 3);
    }
}
