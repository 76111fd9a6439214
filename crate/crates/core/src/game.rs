//! Finite matrix games and finite-support mixed strategies.
//!
//! Conventions used throughout the crate: payoffs are exact rationals in
//! [0,1] with 1 meaning a row-player win; strategy indices are 1-based.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{rat_u64, Rat};

/// A two-person zero-sum game given by its dense payoff matrix.
///
/// Rows belong to the maximizing player, columns to the minimizing player.
/// Labels are opaque and survive `subgame`/`dualize`, so witnesses stay
/// traceable to the strategies they came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGame {
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    payoff: Vec<Vec<Rat>>,
    win_lose: bool,
}

impl FiniteGame {
    pub fn new(
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        payoff: Vec<Vec<Rat>>,
    ) -> Result<Self> {
        if row_labels.is_empty() || col_labels.is_empty() {
            return Err(Error::Domain("game must have at least one row and one column".into()));
        }
        if payoff.len() != row_labels.len() {
            return Err(Error::Domain(format!(
                "payoff has {} rows but {} row labels",
                payoff.len(),
                row_labels.len()
            )));
        }
        for (i, row) in payoff.iter().enumerate() {
            if row.len() != col_labels.len() {
                return Err(Error::Domain(format!(
                    "payoff row {} has {} entries but there are {} column labels",
                    i + 1,
                    row.len(),
                    col_labels.len()
                )));
            }
            for (j, v) in row.iter().enumerate() {
                if v < &Rat::zero() || v > &Rat::one() {
                    return Err(Error::Domain(format!(
                        "payoff[{}][{}] = {} outside [0,1]",
                        i + 1,
                        j + 1,
                        v
                    )));
                }
            }
        }
        for (name, labels) in [("row", &row_labels), ("column", &col_labels)] {
            let mut seen = std::collections::BTreeSet::new();
            for l in labels {
                if !seen.insert(l) {
                    return Err(Error::Domain(format!("duplicate {name} label {l:?}")));
                }
            }
        }
        let win_lose = payoff
            .iter()
            .flatten()
            .all(|v| v.is_zero() || v.is_one());
        Ok(FiniteGame { row_labels, col_labels, payoff, win_lose })
    }

    /// Builds a win-lose game from a payoff predicate, labeling strategies by
    /// their 1-based index.
    pub fn from_predicate(rows: u64, cols: u64, payoff: impl Fn(u64, u64) -> bool) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Domain("game must have at least one row and one column".into()));
        }
        let matrix = (1..=rows)
            .map(|s| {
                (1..=cols)
                    .map(|t| if payoff(s, t) { Rat::one() } else { Rat::zero() })
                    .collect()
            })
            .collect();
        FiniteGame::new(
            (1..=rows).map(|s| s.to_string()).collect(),
            (1..=cols).map(|t| t.to_string()).collect(),
            matrix,
        )
    }

    pub fn n_rows(&self) -> u64 {
        self.row_labels.len() as u64
    }

    pub fn n_cols(&self) -> u64 {
        self.col_labels.len() as u64
    }

    pub fn win_lose(&self) -> bool {
        self.win_lose
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    /// Payoff at 1-based (row, col).
    pub fn entry(&self, row: u64, col: u64) -> Result<&Rat> {
        self.check_row(row)?;
        self.check_col(col)?;
        Ok(&self.payoff[(row - 1) as usize][(col - 1) as usize])
    }

    pub fn rows(&self) -> &[Vec<Rat>] {
        &self.payoff
    }

    fn check_row(&self, row: u64) -> Result<()> {
        if row == 0 || row > self.n_rows() {
            return Err(Error::Domain(format!(
                "row index {row} out of range 1..={}",
                self.n_rows()
            )));
        }
        Ok(())
    }

    fn check_col(&self, col: u64) -> Result<()> {
        if col == 0 || col > self.n_cols() {
            return Err(Error::Domain(format!(
                "column index {col} out of range 1..={}",
                self.n_cols()
            )));
        }
        Ok(())
    }

    /// Restriction to the given 1-based indices, in the order supplied.
    /// Duplicate or empty selections are rejected.
    pub fn subgame(&self, rows: &[u64], cols: &[u64]) -> Result<FiniteGame> {
        if rows.is_empty() || cols.is_empty() {
            return Err(Error::Domain("subgame selection must be non-empty".into()));
        }
        for &r in rows {
            self.check_row(r)?;
        }
        for &c in cols {
            self.check_col(c)?;
        }
        let payoff = rows
            .iter()
            .map(|&r| cols.iter().map(|&c| self.payoff[(r - 1) as usize][(c - 1) as usize].clone()).collect())
            .collect();
        FiniteGame::new(
            rows.iter().map(|&r| self.row_labels[(r - 1) as usize].clone()).collect(),
            cols.iter().map(|&c| self.col_labels[(c - 1) as usize].clone()).collect(),
            payoff,
        )
    }

    /// Interchanges the players: transpose the matrix and replace payoff by
    /// 1 − π. An involution; for win-lose games the value maps to 1 − value.
    pub fn dualize(&self) -> FiniteGame {
        let payoff = (0..self.col_labels.len())
            .map(|j| {
                (0..self.row_labels.len())
                    .map(|i| Rat::one() - &self.payoff[i][j])
                    .collect()
            })
            .collect();
        FiniteGame {
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
            payoff,
            win_lose: self.win_lose,
        }
    }

    /// Expected payoff Σ_s Σ_t p_s q_t π(s,t), exact.
    pub fn pi_mix(&self, p: &MixedStrategy, q: &MixedStrategy) -> Result<Rat> {
        let mut total = Rat::zero();
        for (&s, ps) in p.iter() {
            self.check_row(s)?;
            let mut row_part = Rat::zero();
            for (&t, qt) in q.iter() {
                self.check_col(t)?;
                row_part += qt * &self.payoff[(s - 1) as usize][(t - 1) as usize];
            }
            total += ps * row_part;
        }
        Ok(total)
    }

    /// Expected payoff of pure row s against q.
    pub fn pi_mix_row(&self, s: u64, q: &MixedStrategy) -> Result<Rat> {
        self.pi_mix(&MixedStrategy::point_mass(s), q)
    }

    /// Expected payoff of p against pure column t.
    pub fn pi_mix_col(&self, p: &MixedStrategy, t: u64) -> Result<Rat> {
        self.pi_mix(p, &MixedStrategy::point_mass(t))
    }
}

/// A finite-support probability vector over 1-based strategy indices.
/// Weights are positive exact rationals summing to exactly 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedStrategy {
    weights: BTreeMap<u64, Rat>,
}

impl MixedStrategy {
    pub fn new(weights: BTreeMap<u64, Rat>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Domain("mixed strategy must have non-empty support".into()));
        }
        let mut sum = Rat::zero();
        for (&i, w) in &weights {
            if i == 0 {
                return Err(Error::Domain("strategy indices are 1-based".into()));
            }
            if w <= &Rat::zero() {
                return Err(Error::Domain(format!("weight at index {i} is {w}, must be positive")));
            }
            sum += w;
        }
        if !sum.is_one() {
            return Err(Error::Domain(format!("weights sum to {sum}, must be exactly 1")));
        }
        Ok(MixedStrategy { weights })
    }

    pub fn point_mass(index: u64) -> Self {
        assert!(index >= 1, "strategy indices are 1-based");
        MixedStrategy { weights: BTreeMap::from([(index, Rat::one())]) }
    }

    pub fn uniform(indices: &[u64]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::Domain("uniform strategy needs at least one index".into()));
        }
        let w = Rat::one() / rat_u64(indices.len() as u64);
        let mut weights = BTreeMap::new();
        for &i in indices {
            if weights.insert(i, w.clone()).is_some() {
                return Err(Error::Domain(format!("duplicate index {i} in uniform support")));
            }
        }
        MixedStrategy::new(weights)
    }

    /// Support indices in increasing order.
    pub fn support(&self) -> Vec<u64> {
        self.weights.keys().copied().collect()
    }

    pub fn weight(&self, index: u64) -> Rat {
        self.weights.get(&index).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&u64, &Rat)> {
        self.weights.iter()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Reindexes the support through `map` (old index → new index), summing
    /// weights that collide.
    pub fn reindex(&self, map: impl Fn(u64) -> u64) -> Result<MixedStrategy> {
        let mut weights: BTreeMap<u64, Rat> = BTreeMap::new();
        for (&i, w) in &self.weights {
            *weights.entry(map(i)).or_insert_with(Rat::zero) += w;
        }
        MixedStrategy::new(weights)
    }
}
