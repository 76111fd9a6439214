//! Exact solution of finite zero-sum games.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::game::{FiniteGame, MixedStrategy};
use crate::lp::simplex_max;
use crate::rational::Rat;

/// Largest dimension solved exactly; beyond this a resource error is
/// returned rather than falling back to floating point.
pub const MAX_SOLVE_DIM: u64 = 300;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub value: Rat,
    pub p_opt: MixedStrategy,
    pub q_opt: MixedStrategy,
    pub iterations: u64,
}

/// Value and optimal strategies for both players.
///
/// Solves max Σy subject to (Π+1)y <= 1, y >= 0. Shifting the payoff by 1
/// keeps the optimum positive, so q = y/Σy normalizes to the column
/// player's optimal strategy with value 1/Σy − 1; the row player's optimum
/// comes out of the dual of the same run. Exactness makes the certificate
/// equalities
///   min_t π(p,t) = value = max_s π(s,q)
/// literal equalities, which `verify` re-checks independently.
pub fn solve(game: &FiniteGame) -> Result<SolveResult> {
    let (n, m) = (game.n_rows(), game.n_cols());
    if n > MAX_SOLVE_DIM || m > MAX_SOLVE_DIM {
        return Err(Error::Resource(format!(
            "{n}×{m} exceeds the {MAX_SOLVE_DIM}×{MAX_SOLVE_DIM} exact solving limit"
        )));
    }
    let shifted: Vec<Vec<Rat>> = game
        .rows()
        .iter()
        .map(|row| row.iter().map(|v| v + Rat::one()).collect())
        .collect();
    let rhs = vec![Rat::one(); n as usize];
    let obj = vec![Rat::one(); m as usize];
    let lp = simplex_max(&shifted, &rhs, &obj)?;

    if lp.objective <= Rat::zero() {
        return Err(Error::Internal("shifted game LP must have positive optimum".into()));
    }
    let shifted_value = lp.objective.recip();
    let value = &shifted_value - Rat::one();

    let mut q = BTreeMap::new();
    for (j, yj) in lp.y.iter().enumerate() {
        if !yj.is_zero() {
            q.insert(j as u64 + 1, yj * &shifted_value);
        }
    }
    let mut p = BTreeMap::new();
    for (i, ui) in lp.dual.iter().enumerate() {
        if !ui.is_zero() {
            p.insert(i as u64 + 1, ui * &shifted_value);
        }
    }
    let result = SolveResult {
        value,
        p_opt: MixedStrategy::new(p)?,
        q_opt: MixedStrategy::new(q)?,
        iterations: lp.iterations,
    };
    if !verify(game, &result) {
        return Err(Error::Internal("solver certificate failed".into()));
    }
    Ok(result)
}

/// True iff both certificate equalities hold exactly.
pub fn verify(game: &FiniteGame, r: &SolveResult) -> bool {
    let cols_ok = (1..=game.n_cols())
        .map(|t| game.pi_mix_col(&r.p_opt, t))
        .try_fold(None::<Rat>, |acc, v| {
            let v = v.ok()?;
            Some(Some(match acc {
                Some(best) if best <= v => best,
                _ => v,
            }))
        })
        .flatten()
        .is_some_and(|min| min == r.value);
    let rows_ok = (1..=game.n_rows())
        .map(|s| game.pi_mix_row(s, &r.q_opt))
        .try_fold(None::<Rat>, |acc, v| {
            let v = v.ok()?;
            Some(Some(match acc {
                Some(best) if best >= v => best,
                _ => v,
            }))
        })
        .flatten()
        .is_some_and(|max| max == r.value);
    cols_ok && rows_ok
}

/// The row maximizing expected payoff against q, lowest index on ties.
pub fn best_pure_response(game: &FiniteGame, q: &MixedStrategy) -> Result<(u64, Rat)> {
    let mut best: Option<(u64, Rat)> = None;
    for s in 1..=game.n_rows() {
        let v = game.pi_mix_row(s, q)?;
        if best.as_ref().is_none_or(|(_, bv)| v > *bv) {
            best = Some((s, v));
        }
    }
    best.ok_or_else(|| Error::Domain("game has no rows".into()))
}
