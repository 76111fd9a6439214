//! Prefix-based density estimates for rows and columns of an infinite
//! 0/1 matrix, and the separation witness they motivate.

use crate::error::{Error, Result};
use crate::game::FiniteGame;
use crate::oracle::GameOracle;
use crate::rational::{rat_u64, Rat};
use crate::structure::{staircase_exact, StaircaseWitness};

/// Win frequencies over a finite prefix. `row_estimates[i]` approximates
/// the upper density of row i+1, `col_estimates[j]` the lower density of
/// column j+1; both are plain averages and say nothing about the limits
/// beyond the prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityReport {
    pub prefix: u64,
    pub row_estimates: Vec<Rat>,
    pub col_estimates: Vec<Rat>,
    /// (max row estimate, min column estimate), present when they separate.
    pub candidate: Option<(Rat, Rat)>,
}

pub fn density_report(
    oracle: &dyn GameOracle,
    n_rows: u64,
    n_cols: u64,
    prefix: u64,
) -> Result<DensityReport> {
    if n_rows == 0 || n_cols == 0 {
        return Err(Error::Domain("need at least one row and one column".into()));
    }
    if prefix == 0 {
        return Err(Error::Domain("prefix must be at least 1".into()));
    }
    let frequency = |count: u64| rat_u64(count) / rat_u64(prefix);
    let row_estimates: Vec<Rat> = (1..=n_rows)
        .map(|s| frequency((1..=prefix).filter(|&t| oracle.payoff(s, t)).count() as u64))
        .collect();
    let col_estimates: Vec<Rat> = (1..=n_cols)
        .map(|t| frequency((1..=prefix).filter(|&s| oracle.payoff(s, t)).count() as u64))
        .collect();
    let alpha = row_estimates.iter().max().expect("non-empty").clone();
    let beta = col_estimates.iter().min().expect("non-empty").clone();
    let candidate = (alpha < beta).then_some((alpha, beta));
    Ok(DensityReport { prefix, row_estimates, col_estimates, candidate })
}

/// Density separation promises a staircase; this returns the exact one.
pub fn separation_witness(game: &FiniteGame) -> Result<(u64, StaircaseWitness)> {
    staircase_exact(game)
}
