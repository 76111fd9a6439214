//! Staircase submatrix detection, chain analysis of set families, and the
//! combinatorial dimensions (VC, Littlestone, threshold) of win-lose games.

use std::collections::{BTreeSet, HashMap};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::game::FiniteGame;
use crate::oracle::GameOracle;
use crate::rational::Rat;
use crate::setfam::SetFamily;

pub const MAX_EXACT_STAIRCASE: u64 = 20;
pub const MAX_DIM_COLS: u64 = 24;
const LDIM_MEMO_BUDGET: usize = 1 << 20;
const GREEDY_SCAN_WINDOW: u64 = 1024;

/// Index sequences s_1..s_k and t_1..t_k with payoff(s_i, t_j) = 1 exactly
/// when i >= j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaircaseWitness {
    pub rows: Vec<u64>,
    pub cols: Vec<u64>,
}

impl StaircaseWitness {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn check_game(&self, game: &FiniteGame) -> Result<()> {
        self.check_with(|s, t| Ok(game.entry(s, t)? == &Rat::one()))
    }

    pub fn check_oracle(&self, oracle: &dyn GameOracle) -> Result<()> {
        self.check_with(|s, t| Ok(oracle.payoff(s, t)))
    }

    fn check_with(&self, payoff: impl Fn(u64, u64) -> Result<bool>) -> Result<()> {
        if self.rows.len() != self.cols.len() {
            return Err(Error::Domain("witness row and column counts differ".into()));
        }
        for seq in [&self.rows, &self.cols] {
            let distinct: BTreeSet<u64> = seq.iter().copied().collect();
            if distinct.len() != seq.len() {
                return Err(Error::Domain("witness indices repeat".into()));
            }
        }
        for (i, &s) in self.rows.iter().enumerate() {
            for (j, &t) in self.cols.iter().enumerate() {
                if payoff(s, t)? != (i >= j) {
                    return Err(Error::Domain(format!(
                        "witness breaks the staircase pattern at ({s},{t})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Strictly ascending sets under containment. A leading empty set is
/// accepted so caller-supplied chains may start from nothing; families
/// themselves never contain it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    sets: Vec<BTreeSet<u64>>,
}

impl Chain {
    pub fn new(sets: Vec<BTreeSet<u64>>) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::Domain("chain needs at least one set".into()));
        }
        for w in sets.windows(2) {
            if !(w[0].is_subset(&w[1]) && w[0] != w[1]) {
                return Err(Error::Domain("chain containments must be strict".into()));
            }
        }
        Ok(Chain { sets })
    }

    pub fn sets(&self) -> &[BTreeSet<u64>] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

fn require_win_lose(game: &FiniteGame, what: &str) -> Result<()> {
    if !game.win_lose() {
        return Err(Error::Domain(format!("{what} needs a win-lose game")));
    }
    Ok(())
}

fn row_masks(game: &FiniteGame) -> Vec<u32> {
    game.rows()
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, v)| v.is_one())
                .fold(0u32, |m, (j, _)| m | (1 << j))
        })
        .collect()
}

struct StairSearch {
    masks: Vec<u32>,
    n_rows: usize,
    n_cols: usize,
    best: Vec<(usize, usize)>,
    stack: Vec<(usize, usize)>,
}

impl StairSearch {
    fn descend(&mut self, rows_used: u32, cols_used: u32, beaten: u32, chosen_cols: u32) {
        if self.stack.len() > self.best.len() {
            self.best = self.stack.clone();
        }
        let free_cols = (0..self.n_cols)
            .filter(|&t| cols_used & (1 << t) == 0 && beaten & (1 << t) == 0)
            .count();
        let free_rows = (0..self.n_rows)
            .filter(|&s| rows_used & (1 << s) == 0 && self.masks[s] & chosen_cols == chosen_cols)
            .count();
        if self.stack.len() + free_cols.min(free_rows) <= self.best.len() {
            return;
        }
        for t in 0..self.n_cols {
            let t_bit = 1u32 << t;
            if cols_used & t_bit != 0 || beaten & t_bit != 0 {
                continue;
            }
            let need = chosen_cols | t_bit;
            for s in 0..self.n_rows {
                if rows_used & (1 << s) != 0 || self.masks[s] & need != need {
                    continue;
                }
                self.stack.push((s, t));
                self.descend(
                    rows_used | (1 << s),
                    cols_used | t_bit,
                    beaten | self.masks[s],
                    need,
                );
                self.stack.pop();
            }
        }
    }
}

/// Maximum staircase size with a witness, by exhaustive depth-first search
/// over alternating column/row choices with free-row/free-column pruning.
pub fn staircase_exact(game: &FiniteGame) -> Result<(u64, StaircaseWitness)> {
    require_win_lose(game, "staircase search")?;
    if game.n_rows() > MAX_EXACT_STAIRCASE || game.n_cols() > MAX_EXACT_STAIRCASE {
        return Err(Error::Resource(format!(
            "exact staircase search supports up to {MAX_EXACT_STAIRCASE}x{MAX_EXACT_STAIRCASE}, \
             got {}x{}; use staircase_greedy",
            game.n_rows(),
            game.n_cols()
        )));
    }
    let mut search = StairSearch {
        masks: row_masks(game),
        n_rows: game.n_rows() as usize,
        n_cols: game.n_cols() as usize,
        best: Vec::new(),
        stack: Vec::new(),
    };
    search.descend(0, 0, 0, 0);
    let witness = StaircaseWitness {
        rows: search.best.iter().map(|&(s, _)| s as u64 + 1).collect(),
        cols: search.best.iter().map(|&(_, t)| t as u64 + 1).collect(),
    };
    witness.check_game(game)?;
    Ok((witness.len() as u64, witness))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyStaircase {
    pub witness: StaircaseWitness,
    pub stalled: bool,
}

/// Alternating greedy construction: t_k is the smallest column no chosen
/// row beats, s_k the smallest row beating every chosen column. Candidate
/// indices are scanned up to a fixed window past 1; running out of window
/// before reaching the budget sets the stall flag on the partial witness.
pub fn staircase_greedy(oracle: &dyn GameOracle, budget: u64) -> Result<GreedyStaircase> {
    let window = GREEDY_SCAN_WINDOW.max(16 * budget);
    let mut rows: Vec<u64> = Vec::new();
    let mut cols: Vec<u64> = Vec::new();
    let mut stalled = false;
    while (rows.len() as u64) < budget {
        let next_col = (1..=window)
            .find(|&t| !cols.contains(&t) && rows.iter().all(|&s| !oracle.payoff(s, t)));
        let Some(t) = next_col else {
            stalled = true;
            break;
        };
        let next_row = (1..=window).find(|&s| {
            !rows.contains(&s)
                && oracle.payoff(s, t)
                && cols.iter().all(|&tj| oracle.payoff(s, tj))
        });
        let Some(s) = next_row else {
            stalled = true;
            break;
        };
        rows.push(s);
        cols.push(t);
    }
    let witness = StaircaseWitness { rows, cols };
    witness.check_oracle(oracle)?;
    Ok(GreedyStaircase { witness, stalled })
}

/// A maximum-length chain of members under strict containment, via longest
/// path in the containment order; ties resolve to the lexicographically
/// least chain.
pub fn longest_chain(family: &SetFamily) -> Result<Chain> {
    let mut members = family.enumerate_members()?;
    members.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    if members.is_empty() {
        return Err(Error::Domain("family has no members to chain".into()));
    }
    // down[i] = longest chain starting at member i; members are sorted by
    // size, so every superset sits at a later index.
    let n = members.len();
    let mut down = vec![1usize; n];
    for i in (0..n).rev() {
        for j in i + 1..n {
            if members[i].is_subset(&members[j]) && members[i] != members[j] {
                down[i] = down[i].max(1 + down[j]);
            }
        }
    }
    let total = *down.iter().max().expect("non-empty");
    let mut chain: Vec<BTreeSet<u64>> = Vec::with_capacity(total);
    let mut at: Option<usize> = None;
    for level in (1..=total).rev() {
        let next = (0..n)
            .find(|&j| {
                down[j] == level
                    && at.is_none_or(|i| members[i].is_subset(&members[j]) && members[i] != members[j])
            })
            .expect("chain level is populated");
        chain.push(members[next].clone());
        at = Some(next);
    }
    Chain::new(chain)
}

/// Builds a staircase from an ascending chain of column sets: each t_k is
/// the smallest chain element not yet beaten, each s_k the smallest row
/// whose winning set covers a chain element containing all chosen columns.
/// Stops early with a partial witness when the chain union is exhausted or
/// no covering row exists.
pub fn chain_to_staircase(
    family: &SetFamily,
    chain: &Chain,
    game: &FiniteGame,
) -> Result<StaircaseWitness> {
    require_win_lose(game, "chain construction")?;
    for (i, a) in chain.sets().iter().enumerate() {
        if a.is_empty() {
            continue;
        }
        if !family.contains(a) {
            return Err(Error::Domain(format!("chain set #{} is not a family member", i + 1)));
        }
        if a.last().is_some_and(|&v| v > game.n_cols()) {
            return Err(Error::Domain(format!(
                "chain set #{} reaches past column {}",
                i + 1,
                game.n_cols()
            )));
        }
    }

    let beats: Vec<BTreeSet<u64>> = (1..=game.n_rows())
        .map(|s| {
            (1..=game.n_cols())
                .filter(|&t| game.entry(s, t).expect("in range").is_one())
                .collect()
        })
        .collect();
    let union: &BTreeSet<u64> = chain.sets().last().expect("chain non-empty");

    let mut rows: Vec<u64> = Vec::new();
    let mut cols: Vec<u64> = Vec::new();
    let mut beaten: BTreeSet<u64> = BTreeSet::new();
    loop {
        let Some(&t) = union.iter().find(|t| !beaten.contains(t)) else { break };
        let mut chosen: BTreeSet<u64> = cols.iter().copied().collect();
        chosen.insert(t);
        let cover = chain
            .sets()
            .iter()
            .find(|a| chosen.is_subset(a))
            .expect("last chain set contains every chosen column");
        let Some(s) = (1..=game.n_rows()).find(|&s| cover.is_subset(&beats[(s - 1) as usize]))
        else {
            break;
        };
        beaten.extend(beats[(s - 1) as usize].iter().copied());
        rows.push(s);
        cols.push(t);
    }

    let witness = StaircaseWitness { rows, cols };
    witness.check_game(game)?;
    Ok(witness)
}

/// Largest set of columns on which the rows realize every 0/1 pattern.
pub fn vc_dimension(game: &FiniteGame) -> Result<u64> {
    require_win_lose(game, "VC dimension")?;
    if game.n_cols() > MAX_DIM_COLS {
        return Err(Error::Resource(format!(
            "VC search supports up to {MAX_DIM_COLS} columns, got {}",
            game.n_cols()
        )));
    }
    let masks = row_masks(game);
    let m = game.n_cols() as usize;
    let cap = (usize::BITS - 1 - (masks.len().max(1)).leading_zeros()) as usize;
    let cap = cap.min(m);
    let mut dim = 0;
    for d in 1..=cap {
        if !any_combination(m, d, |subset| shattered(&masks, subset)) {
            break;
        }
        dim = d;
    }
    Ok(dim as u64)
}

fn shattered(masks: &[u32], subset: &[usize]) -> bool {
    let d = subset.len();
    let mut seen = vec![false; 1 << d];
    let mut count = 0usize;
    for &mask in masks {
        let mut pattern = 0usize;
        for (j, &col) in subset.iter().enumerate() {
            pattern |= (((mask >> col) & 1) as usize) << j;
        }
        if !seen[pattern] {
            seen[pattern] = true;
            count += 1;
            if count == 1 << d {
                return true;
            }
        }
    }
    false
}

fn any_combination(m: usize, d: usize, mut pred: impl FnMut(&[usize]) -> bool) -> bool {
    let mut subset: Vec<usize> = (0..d).collect();
    loop {
        if pred(&subset) {
            return true;
        }
        // advance to the next lexicographic d-combination of 0..m
        let mut i = d;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if subset[i] != i + m - d {
                break;
            }
            if i == 0 {
                return false;
            }
        }
        subset[i] += 1;
        for j in i + 1..d {
            subset[j] = subset[j - 1] + 1;
        }
    }
}

/// Depth of the deepest complete mistake tree the rows can realize over the
/// columns; memoized on pattern sets canonicalized to their non-constant
/// columns.
pub fn littlestone_dimension(game: &FiniteGame) -> Result<u64> {
    require_win_lose(game, "Littlestone dimension")?;
    if game.n_cols() > MAX_DIM_COLS {
        return Err(Error::Resource(format!(
            "Littlestone recursion supports up to {MAX_DIM_COLS} columns, got {}",
            game.n_cols()
        )));
    }
    let class = canonical_class(&row_masks(game), game.n_cols() as usize);
    let mut memo: HashMap<Vec<u32>, u64> = HashMap::new();
    ldim(&class, &mut memo)
}

/// Drops constant columns, re-packs the rest densely, sorts and dedups.
/// The class's Littlestone dimension is invariant under all three.
fn canonical_class(masks: &[u32], n_cols: usize) -> Vec<u32> {
    let live: Vec<usize> = (0..n_cols)
        .filter(|&c| {
            let first = masks.first().map_or(0, |m| (m >> c) & 1);
            masks.iter().any(|m| (m >> c) & 1 != first)
        })
        .collect();
    let mut packed: Vec<u32> = masks
        .iter()
        .map(|&m| {
            live.iter()
                .enumerate()
                .fold(0u32, |acc, (j, &c)| acc | (((m >> c) & 1) << j))
        })
        .collect();
    packed.sort_unstable();
    packed.dedup();
    packed
}

fn ldim(class: &[u32], memo: &mut HashMap<Vec<u32>, u64>) -> Result<u64> {
    if class.len() <= 1 {
        return Ok(0);
    }
    if let Some(&d) = memo.get(class) {
        return Ok(d);
    }
    // every column of a canonical class splits it into two non-empty halves
    let n_cols = class
        .iter()
        .map(|m| (u32::BITS - m.leading_zeros()) as usize)
        .max()
        .expect("non-empty");
    let mut best = 0;
    for c in 0..n_cols {
        let (zeros, ones): (Vec<u32>, Vec<u32>) =
            class.iter().partition(|&&m| (m >> c) & 1 == 0);
        let d0 = ldim(&canonical_class(&zeros, n_cols), memo)?;
        let d1 = ldim(&canonical_class(&ones, n_cols), memo)?;
        best = best.max(1 + d0.min(d1));
    }
    if memo.len() >= LDIM_MEMO_BUDGET {
        return Err(Error::Resource("Littlestone memo budget exhausted".into()));
    }
    memo.insert(class.to_vec(), best);
    Ok(best)
}

/// The threshold dimension is the maximum staircase size.
pub fn threshold_dimension(game: &FiniteGame) -> Result<u64> {
    staircase_exact(game).map(|(k, _)| k)
}

/// Raw 0/1 counts per row and per column with their maxima. No judgement
/// is made about tail behaviour; counts on a finite window cannot decide it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowColProfile {
    pub row_zeros: Vec<u64>,
    pub row_ones: Vec<u64>,
    pub col_zeros: Vec<u64>,
    pub col_ones: Vec<u64>,
    pub max_row_zeros: u64,
    pub max_row_ones: u64,
    pub max_col_zeros: u64,
    pub max_col_ones: u64,
}

pub fn row_col_profile(game: &FiniteGame) -> RowColProfile {
    let (n, m) = (game.n_rows() as usize, game.n_cols() as usize);
    let mut profile = RowColProfile {
        row_zeros: vec![0; n],
        row_ones: vec![0; n],
        col_zeros: vec![0; m],
        col_ones: vec![0; m],
        max_row_zeros: 0,
        max_row_ones: 0,
        max_col_zeros: 0,
        max_col_ones: 0,
    };
    for (i, row) in game.rows().iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if v.is_zero() {
                profile.row_zeros[i] += 1;
                profile.col_zeros[j] += 1;
            } else if v.is_one() {
                profile.row_ones[i] += 1;
                profile.col_ones[j] += 1;
            }
        }
    }
    profile.max_row_zeros = profile.row_zeros.iter().copied().max().unwrap_or(0);
    profile.max_row_ones = profile.row_ones.iter().copied().max().unwrap_or(0);
    profile.max_col_zeros = profile.col_zeros.iter().copied().max().unwrap_or(0);
    profile.max_col_ones = profile.col_ones.iter().copied().max().unwrap_or(0);
    profile
}
