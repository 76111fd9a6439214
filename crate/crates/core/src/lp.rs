//! Exact simplex over rationals for problems of the form
//! maximize c·y subject to Ay <= b, y >= 0, with b >= 0.
//!
//! The nonnegative right-hand side means the all-slack basis is feasible,
//! so no phase-1 is ever needed. Bland's rule guarantees termination, and
//! every returned solution carries an exact optimality certificate that is
//! re-verified before returning.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rat;

pub(crate) struct LpSolution {
    pub objective: Rat,
    /// Primal optimum, length = number of structural variables.
    pub y: Vec<Rat>,
    /// Dual optimum, length = number of constraints. Nonnegative, feasible
    /// for the dual, with dual objective b·u equal to `objective`.
    pub dual: Vec<Rat>,
    pub iterations: u64,
}

pub(crate) fn simplex_max(a: &[Vec<Rat>], b: &[Rat], c: &[Rat]) -> Result<LpSolution> {
    let m = a.len();
    let n = c.len();
    if b.len() != m || a.iter().any(|row| row.len() != n) {
        return Err(Error::Internal("LP dimension mismatch".into()));
    }
    if b.iter().any(|v| v < &Rat::zero()) {
        return Err(Error::Internal("LP right-hand side must be nonnegative".into()));
    }

    // Tableau rows: [structural columns | slack columns | rhs].
    let width = n + m + 1;
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(m);
    for (i, arow) in a.iter().enumerate() {
        let mut row = Vec::with_capacity(width);
        row.extend(arow.iter().cloned());
        for j in 0..m {
            row.push(if j == i { Rat::one() } else { Rat::zero() });
        }
        row.push(b[i].clone());
        rows.push(row);
    }
    // Reduced-cost row; last entry tracks -objective.
    let mut cost: Vec<Rat> = Vec::with_capacity(width);
    cost.extend(c.iter().cloned());
    cost.resize(width, Rat::zero());
    let mut basis: Vec<usize> = (n..n + m).collect();

    let mut iterations = 0u64;
    // Entering rule: Dantzig (most positive reduced cost) pivots far less
    // than Bland but can cycle on degenerate vertices. A streak of
    // degenerate pivots switches to Bland, whose termination guarantee
    // breaks any cycle; the first strict improvement switches back. The
    // leaving tie-break below already matches Bland's rule.
    let mut degenerate_streak = 0u32;
    loop {
        let enter = if degenerate_streak < 32 {
            let mut best: Option<usize> = None;
            for j in 0..n + m {
                if cost[j] > Rat::zero() && best.is_none_or(|b| cost[j] > cost[b]) {
                    best = Some(j);
                }
            }
            best
        } else {
            (0..n + m).find(|&j| cost[j] > Rat::zero())
        };
        let Some(enter) = enter else {
            break;
        };
        let mut leave: Option<usize> = None;
        let mut best_ratio: Option<Rat> = None;
        for i in 0..m {
            let coef = &rows[i][enter];
            if coef <= &Rat::zero() {
                continue;
            }
            let ratio = &rows[i][width - 1] / coef;
            let better = match &best_ratio {
                None => true,
                Some(r) => {
                    ratio < *r || (ratio == *r && basis[i] < basis[leave.expect("set with ratio")])
                }
            };
            if better {
                best_ratio = Some(ratio);
                leave = Some(i);
            }
        }
        let Some(leave) = leave else {
            return Err(Error::Internal("LP unbounded: no ratio-test row".into()));
        };
        if best_ratio.as_ref().is_some_and(|r| r.is_zero()) {
            degenerate_streak += 1;
        } else {
            degenerate_streak = 0;
        }

        let pivot = rows[leave][enter].clone();
        for v in rows[leave].iter_mut() {
            *v /= &pivot;
        }
        let pivot_row = rows[leave].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == leave || row[enter].is_zero() {
                continue;
            }
            let factor = row[enter].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v -= &factor * pv;
            }
        }
        if !cost[enter].is_zero() {
            let factor = cost[enter].clone();
            for (v, pv) in cost.iter_mut().zip(&pivot_row) {
                *v -= &factor * pv;
            }
        }
        basis[leave] = enter;
        iterations += 1;
    }

    let mut y = vec![Rat::zero(); n];
    for (i, &var) in basis.iter().enumerate() {
        if var < n {
            y[var] = rows[i][width - 1].clone();
        }
    }
    let dual: Vec<Rat> = (0..m).map(|i| -cost[n + i].clone()).collect();
    let objective = -cost[width - 1].clone();

    check_certificate(a, b, c, &objective, &y, &dual)?;
    Ok(LpSolution { objective, y, dual, iterations })
}

/// Exact optimality proof: primal feasible, dual feasible, equal objectives.
fn check_certificate(
    a: &[Vec<Rat>],
    b: &[Rat],
    c: &[Rat],
    objective: &Rat,
    y: &[Rat],
    dual: &[Rat],
) -> Result<()> {
    let fail = |msg: &str| Err(Error::Internal(format!("LP certificate failed: {msg}")));
    if y.iter().any(|v| v < &Rat::zero()) || dual.iter().any(|v| v < &Rat::zero()) {
        return fail("negative variable");
    }
    for (arow, bi) in a.iter().zip(b) {
        let lhs: Rat = arow.iter().zip(y).map(|(aij, yj)| aij * yj).sum();
        if &lhs > bi {
            return fail("primal constraint violated");
        }
    }
    for (j, cj) in c.iter().enumerate() {
        let lhs: Rat = a.iter().zip(dual).map(|(arow, ui)| &arow[j] * ui).sum();
        if &lhs < cj {
            return fail("dual constraint violated");
        }
    }
    let primal: Rat = c.iter().zip(y).map(|(cj, yj)| cj * yj).sum();
    let dual_obj: Rat = b.iter().zip(dual).map(|(bi, ui)| bi * ui).sum();
    if &primal != objective || &dual_obj != objective {
        return fail("objective mismatch");
    }
    Ok(())
}
