//! Families of finite subsets of N, given explicitly or by rule.
//!
//! Members are non-empty throughout; the empty set is never a member, even
//! of a downward closure. Elements are 1-based naturals.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::game::FiniteGame;
use crate::rational::Rat;

/// Ground sets larger than this are refused by the exhaustive enumeration
/// paths (2^16 subsets).
pub const MAX_ENUM_GROUND: u64 = 16;

#[derive(Clone)]
pub enum SetFamily {
    Explicit {
        name: String,
        sets: Vec<BTreeSet<u64>>,
        downward_closed: bool,
    },
    /// Membership by predicate over subsets of {1..ground_bound}.
    Predicate {
        name: String,
        member: fn(&BTreeSet<u64>) -> bool,
        ground_bound: u64,
        downward_closed: bool,
    },
    /// All {1..n}, n >= 1.
    InitialSegments,
    /// All initial segments of each residue class mod `modulus`:
    /// {r, r+m, ..., r+(k-1)m} for 1 <= r <= m, k >= 1.
    ResidueSegments { modulus: u64 },
    /// All non-empty A with |A| <= min A. Downward closed, no infinite
    /// ascending chain.
    MinBounded,
}

impl SetFamily {
    pub fn explicit(name: impl Into<String>, sets: Vec<BTreeSet<u64>>, downward_closed: bool) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for s in &sets {
            if s.is_empty() {
                return Err(Error::Domain("family members must be non-empty".into()));
            }
            if s.first() == Some(&0) {
                return Err(Error::Domain("family elements are 1-based".into()));
            }
            if !seen.insert(s.clone()) {
                return Err(Error::Domain(format!("duplicate family member {s:?}")));
            }
        }
        Ok(SetFamily::Explicit { name: name.into(), sets, downward_closed })
    }

    pub fn name(&self) -> String {
        match self {
            SetFamily::Explicit { name, .. } | SetFamily::Predicate { name, .. } => name.clone(),
            SetFamily::InitialSegments => "initial-segments".into(),
            SetFamily::ResidueSegments { modulus } => format!("residue-{modulus}"),
            SetFamily::MinBounded => "min-bounded".into(),
        }
    }

    pub fn is_downward_closed(&self) -> bool {
        match self {
            SetFamily::Explicit { downward_closed, .. }
            | SetFamily::Predicate { downward_closed, .. } => *downward_closed,
            SetFamily::InitialSegments | SetFamily::ResidueSegments { .. } => false,
            SetFamily::MinBounded => true,
        }
    }

    pub fn contains(&self, set: &BTreeSet<u64>) -> bool {
        if set.is_empty() || set.first() == Some(&0) {
            return false;
        }
        match self {
            SetFamily::Explicit { sets, .. } => sets.contains(set),
            SetFamily::Predicate { member, ground_bound, .. } => {
                *set.last().unwrap() <= *ground_bound && member(set)
            }
            SetFamily::InitialSegments => *set.last().unwrap() == set.len() as u64,
            SetFamily::ResidueSegments { modulus } => {
                let first = *set.first().unwrap();
                first <= *modulus
                    && set
                        .iter()
                        .enumerate()
                        .all(|(k, &x)| x == first + k as u64 * modulus)
            }
            SetFamily::MinBounded => set.len() as u64 <= *set.first().unwrap(),
        }
    }

    /// All members, for finitely-describable families only.
    pub fn enumerate_members(&self) -> Result<Vec<BTreeSet<u64>>> {
        match self {
            SetFamily::Explicit { sets, .. } => Ok(sets.clone()),
            SetFamily::Predicate { ground_bound, .. } => self.members_within(*ground_bound),
            _ => Err(Error::Domain(format!(
                "family {} is infinite; restrict to a horizon first",
                self.name()
            ))),
        }
    }

    /// Members whose largest element is <= horizon.
    pub fn members_within(&self, horizon: u64) -> Result<Vec<BTreeSet<u64>>> {
        match self {
            SetFamily::Explicit { sets, .. } => Ok(sets
                .iter()
                .filter(|s| *s.last().unwrap() <= horizon)
                .cloned()
                .collect()),
            SetFamily::Predicate { member, ground_bound, .. } => {
                subsets_satisfying(horizon.min(*ground_bound), |s| member(s))
            }
            SetFamily::InitialSegments => {
                Ok((1..=horizon).map(|n| (1..=n).collect()).collect())
            }
            SetFamily::ResidueSegments { modulus } => {
                let mut out = Vec::new();
                for r in 1..=*modulus {
                    let mut seg = BTreeSet::new();
                    let mut x = r;
                    while x <= horizon {
                        seg.insert(x);
                        out.push(seg.clone());
                        x += modulus;
                    }
                }
                Ok(out)
            }
            SetFamily::MinBounded => {
                subsets_satisfying(horizon, |s| s.len() as u64 <= *s.first().unwrap())
            }
        }
    }

    /// The family of members lying within {1..horizon}, as an explicit list.
    pub fn restrict(&self, horizon: u64) -> Result<SetFamily> {
        SetFamily::explicit(
            format!("{}|{horizon}", self.name()),
            dedup_sorted(self.members_within(horizon)?),
            self.is_downward_closed(),
        )
    }

    /// Smallest member containing `element` within the horizon, scanning in
    /// enumeration order for rule families and list order for explicit ones.
    pub fn covering_member(&self, element: u64, horizon: u64) -> Result<Option<BTreeSet<u64>>> {
        if element == 0 || element > horizon {
            return Ok(None);
        }
        match self {
            SetFamily::InitialSegments => Ok(Some((1..=element).collect())),
            SetFamily::ResidueSegments { modulus } => {
                let r = (element - 1) % modulus + 1;
                Ok(Some((r..=element).step_by(*modulus as usize).collect()))
            }
            SetFamily::MinBounded => Ok(Some(BTreeSet::from([element]))),
            _ => Ok(self
                .members_within(horizon)?
                .into_iter()
                .filter(|s| s.contains(&element))
                .min_by_key(|s| (s.len(), s.iter().copied().collect::<Vec<_>>()))),
        }
    }

    /// A member within the horizon maximizing the sum of the given
    /// nonnegative weights (weights[i] is the weight of element i+1), with
    /// the achieved sum.
    pub fn max_weight_member(&self, weights: &[Rat]) -> Result<Option<(BTreeSet<u64>, Rat)>> {
        let h = weights.len() as u64;
        if h == 0 {
            return Ok(None);
        }
        let weight = |i: u64| -> &Rat { &weights[(i - 1) as usize] };
        match self {
            SetFamily::InitialSegments | SetFamily::ResidueSegments { .. } => {
                let mut best: Option<(BTreeSet<u64>, Rat)> = None;
                for member in self.members_within(h)? {
                    let sum: Rat = member.iter().map(|&i| weight(i).clone()).sum();
                    if best.as_ref().is_none_or(|(_, b)| sum > *b) {
                        best = Some((member, sum));
                    }
                }
                Ok(best)
            }
            SetFamily::MinBounded => {
                let mut best: Option<(BTreeSet<u64>, Rat)> = None;
                // Sorting each suffix once per call is fine at LP horizons.
                for m in 1..=h {
                    let mut rest: Vec<u64> = (m + 1..=h).collect();
                    rest.sort_by(|&a, &b| weight(b).cmp(weight(a)).then(a.cmp(&b)));
                    let mut member = BTreeSet::from([m]);
                    let mut sum = weight(m).clone();
                    for &i in rest.iter().take(m as usize - 1) {
                        if weight(i).is_zero() {
                            break;
                        }
                        member.insert(i);
                        sum += weight(i);
                    }
                    if best.as_ref().is_none_or(|(_, b)| sum > *b) {
                        best = Some((member, sum));
                    }
                }
                Ok(best)
            }
            _ => {
                let mut best: Option<(BTreeSet<u64>, Rat)> = None;
                for member in self.members_within(h)? {
                    let sum: Rat = member.iter().map(|&i| weight(i).clone()).sum();
                    if best.as_ref().is_none_or(|(_, b)| sum > *b) {
                        best = Some((member, sum));
                    }
                }
                Ok(best)
            }
        }
    }

    /// Downward closure as an explicit family (empty set excluded).
    pub fn downward_closure(&self) -> Result<SetFamily> {
        let members = self.enumerate_members()?;
        let mut closed: BTreeSet<BTreeSet<u64>> = BTreeSet::new();
        let mut budget: u64 = 1 << 20;
        for m in &members {
            let elems: Vec<u64> = m.iter().copied().collect();
            if elems.len() > 20 {
                return Err(Error::Resource(format!(
                    "member of size {} too large for downward closure",
                    elems.len()
                )));
            }
            for mask in 1u64..(1 << elems.len()) {
                budget = budget.checked_sub(1).ok_or_else(|| {
                    Error::Resource("downward closure exceeds the enumeration budget".into())
                })?;
                closed.insert(
                    elems
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| mask >> k & 1 == 1)
                        .map(|(_, &x)| x)
                        .collect(),
                );
            }
        }
        SetFamily::explicit(
            format!("{}-down", self.name()),
            closed.into_iter().collect(),
            true,
        )
    }

    pub fn by_name(name: &str) -> Option<SetFamily> {
        match name {
            "initial-segments" => Some(SetFamily::InitialSegments),
            "even-odd" => Some(SetFamily::ResidueSegments { modulus: 2 }),
            "min-bounded" => Some(SetFamily::MinBounded),
            _ => name
                .strip_prefix("residue-")
                .and_then(|m| m.parse::<u64>().ok())
                .filter(|&m| m >= 1)
                .map(|modulus| SetFamily::ResidueSegments { modulus }),
        }
    }
}

pub const FAMILY_NAMES: [&str; 3] = ["initial-segments", "even-odd", "min-bounded"];

fn subsets_satisfying(
    ground: u64,
    keep: impl Fn(&BTreeSet<u64>) -> bool,
) -> Result<Vec<BTreeSet<u64>>> {
    if ground > MAX_ENUM_GROUND {
        return Err(Error::Resource(format!(
            "ground set {ground} exceeds the enumeration bound {MAX_ENUM_GROUND}"
        )));
    }
    let mut out = Vec::new();
    for mask in 1u64..(1 << ground) {
        let set: BTreeSet<u64> = (0..ground).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect();
        if keep(&set) {
            out.push(set);
        }
    }
    out.sort();
    Ok(out)
}

fn dedup_sorted(mut sets: Vec<BTreeSet<u64>>) -> Vec<BTreeSet<u64>> {
    sets.sort();
    sets.dedup();
    sets
}

/// B¹(G): the distinct winning column sets of the rows. Rows that win
/// nowhere contribute no member.
pub fn b1_family(game: &FiniteGame) -> Result<SetFamily> {
    let mut sets: Vec<BTreeSet<u64>> = Vec::new();
    for s in 1..=game.n_rows() {
        let b: BTreeSet<u64> =
            (1..=game.n_cols()).filter(|&t| !game.entry(s, t).unwrap().is_zero()).collect();
        if !b.is_empty() && !sets.contains(&b) {
            sets.push(b);
        }
    }
    SetFamily::explicit("b1", sets, false)
}

/// B²(G): the sets of rows each column defeats, i.e. B¹ of the dual game.
pub fn b2_family(game: &FiniteGame) -> Result<SetFamily> {
    let mut fam = b1_family(&game.dualize())?;
    if let SetFamily::Explicit { name, .. } = &mut fam {
        *name = "b2".into();
    }
    Ok(fam)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn set(xs: &[u64]) -> BTreeSet<u64> {
        xs.iter().copied().collect()
    }

    #[test]
    fn min_bounded_membership() {
        let f = SetFamily::MinBounded;
        assert!(f.contains(&set(&[3, 4, 5])));
        assert!(!f.contains(&set(&[2, 3, 4])));
        assert!(f.contains(&set(&[7])));
        assert!(!f.contains(&set(&[])));
    }

    #[test]
    fn initial_segments_membership() {
        let f = SetFamily::InitialSegments;
        assert!(f.contains(&set(&[1, 2, 3])));
        assert!(!f.contains(&set(&[1, 3])));
        assert!(!f.contains(&set(&[2])));
    }

    #[test]
    fn residue_segments_membership_and_listing() {
        let f = SetFamily::ResidueSegments { modulus: 2 };
        assert!(f.contains(&set(&[2, 4, 6])));
        assert!(f.contains(&set(&[1, 3])));
        assert!(!f.contains(&set(&[3, 5])));
        assert!(!f.contains(&set(&[2, 4, 8])));
        let within = f.members_within(5).unwrap();
        assert_eq!(within.len(), 5);
    }

    #[test]
    fn min_bounded_restriction_matches_predicate_enumeration() {
        let within = SetFamily::MinBounded.members_within(6).unwrap();
        for s in &within {
            assert!(s.len() as u64 <= *s.first().unwrap());
        }
        assert!(within.contains(&set(&[4, 5, 6])));
        assert!(!within.contains(&set(&[2, 3, 4])));
    }

    #[test]
    fn covering_members() {
        assert_eq!(
            SetFamily::InitialSegments.covering_member(3, 10).unwrap(),
            Some(set(&[1, 2, 3]))
        );
        assert_eq!(
            SetFamily::ResidueSegments { modulus: 2 }.covering_member(5, 10).unwrap(),
            Some(set(&[1, 3, 5]))
        );
        assert_eq!(SetFamily::MinBounded.covering_member(4, 10).unwrap(), Some(set(&[4])));
        assert_eq!(SetFamily::MinBounded.covering_member(11, 10).unwrap(), None);
    }

    #[test]
    fn max_weight_member_min_bounded_takes_heavy_window() {
        // weights 0,0,1,1,1 on elements 1..5: best is {3,4,5}.
        let w = vec![rat(0, 1), rat(0, 1), rat(1, 1), rat(1, 1), rat(1, 1)];
        let (member, sum) = SetFamily::MinBounded.max_weight_member(&w).unwrap().unwrap();
        assert_eq!(member, set(&[3, 4, 5]));
        assert_eq!(sum, rat(3, 1));
    }

    #[test]
    fn max_weight_matches_brute_force_on_small_horizons() {
        let weights = vec![rat(1, 3), rat(1, 2), rat(1, 6), rat(2, 5), rat(1, 5), rat(3, 7)];
        for fam in [
            SetFamily::MinBounded,
            SetFamily::InitialSegments,
            SetFamily::ResidueSegments { modulus: 3 },
        ] {
            let brute = fam
                .members_within(6)
                .unwrap()
                .into_iter()
                .map(|m| m.iter().map(|&i| weights[(i - 1) as usize].clone()).sum::<Rat>())
                .max()
                .unwrap();
            let (_, got) = fam.max_weight_member(&weights).unwrap().unwrap();
            assert_eq!(got, brute, "{}", fam.name());
        }
    }

    #[test]
    fn downward_closure_excludes_empty_and_contains_subsets() {
        let f = SetFamily::explicit("f", vec![set(&[2, 5])], false).unwrap();
        let down = f.downward_closure().unwrap();
        let members = down.enumerate_members().unwrap();
        assert_eq!(members.len(), 3);
        assert!(down.contains(&set(&[2])));
        assert!(down.contains(&set(&[5])));
        assert!(down.contains(&set(&[2, 5])));
    }

    #[test]
    fn b1_of_lng_window_is_prefix_chain() {
        let g = crate::zoo::staircase_matrix(4).unwrap();
        let fam = b1_family(&g).unwrap();
        let members = fam.enumerate_members().unwrap();
        assert_eq!(members, vec![set(&[1]), set(&[1, 2]), set(&[1, 2, 3]), set(&[1, 2, 3, 4])]);
    }

    #[test]
    fn b2_of_lng_window_drops_empty() {
        // Column 1 loses to every row, so its beaten-row set is empty.
        let g = crate::zoo::staircase_matrix(3).unwrap();
        let members = b2_family(&g).unwrap().enumerate_members().unwrap();
        assert_eq!(members, vec![set(&[1]), set(&[1, 2])]);
    }

    #[test]
    fn explicit_rejects_empty_and_duplicate_members() {
        assert!(SetFamily::explicit("x", vec![set(&[])], false).is_err());
        assert!(SetFamily::explicit("x", vec![set(&[1]), set(&[1])], false).is_err());
    }
}
