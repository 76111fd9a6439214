//! Nonnegative rational series against set families: premise checking,
//! blending, the enforcing-constant LP, and fooling-series construction.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lp::simplex_max;
use crate::rational::{rat, rat_u64, Rat};
use crate::setfam::SetFamily;

pub const MAX_ENFORCING_HORIZON: u64 = 300;
const MAX_VIOLATIONS: usize = 1000;
const MAX_CERTIFICATE_HORIZON: u64 = (1 << 20) - 1;

/// A series of nonnegative rationals indexed from 1. Rule variants generate
/// terms lazily; explicit series are zero past their stored terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Series {
    Zero,
    Harmonic,
    /// a_i = 2^(-floor(log2 i)): constant 1/2^j on the block 2^j..2^(j+1)-1.
    Dyadic,
    Constant(Rat),
    Explicit { name: String, terms: Vec<Rat> },
}

impl Series {
    pub fn explicit(name: impl Into<String>, terms: Vec<Rat>) -> Result<Series> {
        if terms.iter().any(|t| t < &Rat::zero()) {
            return Err(Error::Domain("series terms must be nonnegative".into()));
        }
        Ok(Series::Explicit { name: name.into(), terms })
    }

    pub fn term(&self, i: u64) -> Rat {
        assert!(i >= 1, "series terms are indexed from 1");
        match self {
            Series::Zero => Rat::zero(),
            Series::Harmonic => rat(1, i as i64),
            Series::Dyadic => rat(1, 1i64 << floor_log2(i)),
            Series::Constant(c) => c.clone(),
            Series::Explicit { terms, .. } => {
                terms.get((i - 1) as usize).cloned().unwrap_or_else(Rat::zero)
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            Series::Zero => "zero".into(),
            Series::Harmonic => "harmonic".into(),
            Series::Dyadic => "dyadic".into(),
            Series::Constant(c) => format!("constant-{c}"),
            Series::Explicit { name, .. } => name.clone(),
        }
    }

    pub fn by_name(name: &str) -> Option<Series> {
        match name {
            "zero" => Some(Series::Zero),
            "harmonic" => Some(Series::Harmonic),
            "dyadic" => Some(Series::Dyadic),
            "ones" => Some(Series::Constant(Rat::one())),
            _ => name
                .strip_prefix("constant:")
                .and_then(|v| crate::rational::parse_rat(v).ok())
                .filter(|c| c >= &Rat::zero())
                .map(Series::Constant),
        }
    }

    fn nonincreasing_through(&self, horizon: u64) -> bool {
        match self {
            Series::Zero | Series::Harmonic | Series::Dyadic | Series::Constant(_) => true,
            Series::Explicit { terms, .. } => {
                let upto = terms.len().min(horizon as usize);
                terms[..upto].windows(2).all(|w| w[0] >= w[1])
            }
        }
    }
}

pub const SERIES_NAMES: [&str; 4] = ["zero", "harmonic", "dyadic", "ones"];

fn floor_log2(i: u64) -> u32 {
    63 - i.leading_zeros()
}

/// A family member whose terms sum past 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub set: BTreeSet<u64>,
    pub sum: Rat,
}

/// Members within the horizon whose term sums exceed 1, exactly.
///
/// Explicit and segment families are checked member by member. For the
/// min-bounded family only the worst offender per minimum element is
/// materialized (its members are far too many to list); a clean result
/// still proves no member violates. The list is capped at 1000 entries.
pub fn check_premise(
    family: &SetFamily,
    series: &Series,
    horizon: u64,
) -> Result<Vec<Violation>> {
    if horizon == 0 {
        return Err(Error::Domain("horizon must be at least 1".into()));
    }
    let mut violations: Vec<Violation> = Vec::new();
    let push = |set: BTreeSet<u64>, sum: Rat, out: &mut Vec<Violation>| {
        if out.len() < MAX_VIOLATIONS {
            out.push(Violation { set, sum });
        }
    };

    match family {
        SetFamily::InitialSegments => {
            let mut sum = Rat::zero();
            let mut prefix: BTreeSet<u64> = BTreeSet::new();
            for j in 1..=horizon {
                sum += series.term(j);
                prefix.insert(j);
                if sum > Rat::one() {
                    push(prefix.clone(), sum.clone(), &mut violations);
                }
            }
        }
        SetFamily::ResidueSegments { modulus } => {
            for r in 1..=*modulus {
                let mut sum = Rat::zero();
                let mut seg: BTreeSet<u64> = BTreeSet::new();
                let mut j = r;
                while j <= horizon {
                    sum += series.term(j);
                    seg.insert(j);
                    if sum > Rat::one() {
                        push(seg.clone(), sum.clone(), &mut violations);
                    }
                    j += modulus;
                }
            }
        }
        SetFamily::MinBounded => {
            min_bounded_violations(series, horizon, &mut violations)?;
        }
        _ => {
            for member in family.members_within(horizon)? {
                let sum: Rat = member.iter().map(|&i| series.term(i)).sum();
                if sum > Rat::one() {
                    push(member, sum, &mut violations);
                }
            }
        }
    }

    violations.sort_by(|a, b| a.set.cmp(&b.set));
    Ok(violations)
}

/// The worst member with minimum m holds m and the m-1 heaviest later
/// terms; for nonincreasing series that is the window {m..2m-1}, screened
/// by width * a_m before any exact summation.
fn min_bounded_violations(
    series: &Series,
    horizon: u64,
    violations: &mut Vec<Violation>,
) -> Result<()> {
    if series.nonincreasing_through(horizon) {
        let window_end = |m: u64| (2 * m - 1).min(horizon);
        let suspects: Vec<u64> = (1..=horizon)
            .filter(|&m| {
                let width = window_end(m) - m + 1;
                rat_u64(width) * series.term(m) > Rat::one()
            })
            .collect();
        if suspects.is_empty() {
            return Ok(());
        }
        let mut prefix: Vec<Rat> = Vec::with_capacity(horizon as usize + 1);
        prefix.push(Rat::zero());
        for i in 1..=horizon {
            let next = prefix.last().expect("seeded") + series.term(i);
            prefix.push(next);
        }
        for m in suspects {
            let sum = &prefix[window_end(m) as usize] - &prefix[(m - 1) as usize];
            if sum > Rat::one() && violations.len() < MAX_VIOLATIONS {
                violations.push(Violation { set: (m..=window_end(m)).collect(), sum });
            }
        }
    } else {
        if horizon > 2000 {
            return Err(Error::Resource(format!(
                "exact min-bounded scan of a non-monotone series caps at horizon 2000, got {horizon}"
            )));
        }
        for m in 1..=horizon {
            let mut rest: Vec<u64> = (m + 1..=horizon).collect();
            rest.sort_by(|&a, &b| series.term(b).cmp(&series.term(a)).then(a.cmp(&b)));
            let mut member = BTreeSet::from([m]);
            let mut sum = series.term(m);
            for &i in rest.iter().take(m as usize - 1) {
                if series.term(i).is_zero() {
                    break;
                }
                member.insert(i);
                sum += series.term(i);
            }
            if sum > Rat::one() && violations.len() < MAX_VIOLATIONS {
                violations.push(Violation { set: member, sum });
            }
        }
    }
    Ok(())
}

/// Geometric mix of the inputs: a_i = sum over sequences n of term_n(i)/2^n,
/// materialized through the horizon.
pub fn blend(sequences: &[Series], horizon: u64) -> Result<Series> {
    if sequences.is_empty() {
        return Err(Error::Domain("blend needs at least one series".into()));
    }
    if horizon == 0 {
        return Err(Error::Domain("horizon must be at least 1".into()));
    }
    let terms: Vec<Rat> = (1..=horizon)
        .map(|i| {
            sequences
                .iter()
                .enumerate()
                .map(|(n, s)| s.term(i) / rat(1i64 << (n + 1), 1))
                .sum()
        })
        .collect();
    let names: Vec<String> = sequences.iter().map(|s| s.name()).collect();
    Series::explicit(format!("blend({})", names.join(",")), terms)
}

/// The exact optimum of max sum(a_i, i <= horizon) subject to
/// sum over A of a_i <= 1 for every member A, a >= 0: a lower bound on the
/// enforcing constant, nondecreasing in horizon.
pub fn enforcing_constant_lower(family: &SetFamily, horizon: u64) -> Result<Rat> {
    enforcing_lp(family, horizon).map(|(c, _)| c)
}

/// Optimum plus an optimal weight vector indexed 1..=horizon.
pub(crate) fn enforcing_lp(family: &SetFamily, horizon: u64) -> Result<(Rat, Vec<Rat>)> {
    if horizon == 0 {
        return Err(Error::Domain("horizon must be at least 1".into()));
    }
    for i in 1..=horizon {
        if family.covering_member(i, horizon)?.is_none() {
            return Err(Error::Unbounded { element: i });
        }
    }
    if matches!(family, SetFamily::MinBounded) && (horizon + 1).is_power_of_two() {
        return min_bounded_certificate(horizon);
    }
    if horizon > MAX_ENFORCING_HORIZON {
        let hint = if matches!(family, SetFamily::MinBounded) {
            "; horizons of the form 2^k - 1 are solved in closed form"
        } else {
            ""
        };
        return Err(Error::Resource(format!(
            "enforcing LP caps at horizon {MAX_ENFORCING_HORIZON}, got {horizon}{hint}"
        )));
    }

    let (objective, weights) = if matches!(family, SetFamily::MinBounded) {
        min_bounded_window_lp(horizon)?
    } else {
        // Every other family has at most a handful of members per element
        // within the horizon, so all of them fit in the LP directly.
        let members: BTreeSet<BTreeSet<u64>> =
            family.members_within(horizon)?.into_iter().collect();
        let rows: Vec<Vec<Rat>> = members
            .iter()
            .map(|member| {
                (1..=horizon)
                    .map(|i| rat_u64(member.contains(&i) as u64))
                    .collect()
            })
            .collect();
        let b = vec![Rat::one(); members.len()];
        let ones = vec![Rat::one(); horizon as usize];
        let solution = simplex_max(&rows, &b, &ones)?;
        (solution.objective, solution.y)
    };
    let series = Series::explicit("lp-weights", weights.clone())?;
    if !check_premise(family, &series, horizon)?.is_empty() {
        return Err(Error::Internal("enforcing optimum violates a member bound".into()));
    }
    Ok((objective, weights))
}

/// Some optimal weight vector for the min-bounded family is nonincreasing:
/// swapping an adjacent increasing pair never raises the best member sum
/// anchored at any minimum, so sorting an optimum keeps it feasible. For
/// nonincreasing weights the binding member with minimum m is the window
/// {m..min(2m-1, horizon)}, which shrinks the LP from exponentially many
/// member rows to horizon window rows plus the ordering rows.
fn min_bounded_window_lp(horizon: u64) -> Result<(Rat, Vec<Rat>)> {
    let h = horizon as usize;
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(2 * h - 1);
    let mut b: Vec<Rat> = Vec::with_capacity(2 * h - 1);
    for m in 1..=horizon {
        let mut row = vec![Rat::zero(); h];
        for i in m..=(2 * m - 1).min(horizon) {
            row[(i - 1) as usize] = Rat::one();
        }
        rows.push(row);
        b.push(Rat::one());
    }
    for i in 0..h - 1 {
        let mut row = vec![Rat::zero(); h];
        row[i] = -Rat::one();
        row[i + 1] = Rat::one();
        rows.push(row);
        b.push(Rat::zero());
    }
    let ones = vec![Rat::one(); h];
    let solution = simplex_max(&rows, &b, &ones)?;
    Ok((solution.objective, solution.y))
}

/// At horizon 2^k - 1 the min-bounded optimum is k, certified by the
/// dyadic weights (feasible, every block {2^j..2^(j+1)-1} sums to exactly 1)
/// against the partition of the horizon into those k member blocks. Both
/// sides are re-verified here rather than trusted.
fn min_bounded_certificate(horizon: u64) -> Result<(Rat, Vec<Rat>)> {
    if horizon > MAX_CERTIFICATE_HORIZON {
        return Err(Error::Resource(format!(
            "dyadic certificate caps at horizon {MAX_CERTIFICATE_HORIZON}, got {horizon}"
        )));
    }
    let k = floor_log2(horizon + 1);
    let weights: Vec<Rat> = (1..=horizon).map(|i| Series::Dyadic.term(i)).collect();
    if !check_premise(&SetFamily::MinBounded, &Series::Dyadic, horizon)?.is_empty() {
        return Err(Error::Internal("dyadic weights lost feasibility".into()));
    }
    let mut total = Rat::zero();
    for j in 0..k {
        let block: BTreeSet<u64> = (1 << j..1 << (j + 1)).collect();
        if !SetFamily::MinBounded.contains(&block) {
            return Err(Error::Internal("partition block is not a member".into()));
        }
        let sum: Rat = block.iter().map(|&i| weights[(i - 1) as usize].clone()).sum();
        if !sum.is_one() {
            return Err(Error::Internal("partition block sum is not 1".into()));
        }
        total += sum;
    }
    Ok((total, weights))
}

/// Scales an optimal enforcing weight vector down to mass exactly 1/eps:
/// the result keeps every member sum at most 1 while totalling 1/eps,
/// witnessing that the family tolerates eps-size mass everywhere. Fails
/// with the achieved truncated game value when the horizon's enforcing
/// constant is still below 1/eps.
pub fn fooling_series(family: &SetFamily, eps: &Rat, horizon: u64) -> Result<Series> {
    if eps <= &Rat::zero() {
        return Err(Error::Domain(format!("eps = {eps} must be positive")));
    }
    let (constant, weights) = enforcing_lp(family, horizon)?;
    let needed = Rat::one() / eps;
    if constant < needed {
        return Err(Error::ValueAboveEps { achieved: Rat::one() / constant });
    }
    let scale = &constant * eps;
    let terms: Vec<Rat> = weights.into_iter().map(|w| w / &scale).collect();
    let total: Rat = terms.iter().cloned().sum();
    if total != needed {
        return Err(Error::Internal("fooling series mass is off".into()));
    }
    let series = Series::explicit(format!("fooling-{}", family.name()), terms)?;
    if !check_premise(family, &series, horizon)?.is_empty() {
        return Err(Error::Internal("fooling series violates the premise".into()));
    }
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;

    #[test]
    fn term_values() {
        assert_eq!(Series::Harmonic.term(7), rat(1, 7));
        assert_eq!(Series::Dyadic.term(1), rat_int(1));
        assert_eq!(Series::Dyadic.term(3), rat(1, 2));
        assert_eq!(Series::Dyadic.term(4), rat(1, 4));
        assert_eq!(Series::Dyadic.term(1023), rat(1, 512));
        assert_eq!(Series::Zero.term(5), rat_int(0));
        let e = Series::explicit("e", vec![rat(1, 2)]).unwrap();
        assert_eq!(e.term(1), rat(1, 2));
        assert_eq!(e.term(2), rat_int(0));
    }

    #[test]
    fn explicit_rejects_negative_terms() {
        assert!(Series::explicit("bad", vec![rat(-1, 2)]).is_err());
    }

    #[test]
    fn series_by_name() {
        assert_eq!(Series::by_name("harmonic"), Some(Series::Harmonic));
        assert_eq!(Series::by_name("ones"), Some(Series::Constant(rat_int(1))));
        assert_eq!(Series::by_name("constant:2/3"), Some(Series::Constant(rat(2, 3))));
        assert_eq!(Series::by_name("constant:-1"), None);
        assert_eq!(Series::by_name("fibonacci"), None);
    }

    #[test]
    fn harmonic_fools_min_bounded_at_ten_thousand() {
        let v = check_premise(&SetFamily::MinBounded, &Series::Harmonic, 10_000).unwrap();
        assert!(v.is_empty());
    }

    #[test]
    fn dyadic_saturates_min_bounded_without_violation() {
        let v = check_premise(&SetFamily::MinBounded, &Series::Dyadic, 1023).unwrap();
        assert!(v.is_empty());
    }

    #[test]
    fn constant_series_violates_min_bounded_windows() {
        let v =
            check_premise(&SetFamily::MinBounded, &Series::Constant(rat_int(1)), 10).unwrap();
        assert_eq!(v.len(), 8);
        assert_eq!(v[0].set, BTreeSet::from([2, 3]));
        assert_eq!(v[0].sum, rat_int(2));
    }

    #[test]
    fn harmonic_violates_initial_segments_from_the_second_prefix() {
        let v = check_premise(&SetFamily::InitialSegments, &Series::Harmonic, 100).unwrap();
        assert_eq!(v.len(), 99);
        assert_eq!(v[0].set, BTreeSet::from([1, 2]));
        assert_eq!(v[0].sum, rat(3, 2));
    }

    #[test]
    fn harmonic_on_even_odd_segments() {
        let family = SetFamily::ResidueSegments { modulus: 2 };
        let v = check_premise(&family, &Series::Harmonic, 50).unwrap();
        assert_eq!(v.len(), 46);
        assert_eq!(v[0].set, BTreeSet::from([1, 3]));
        assert_eq!(v[0].sum, rat(4, 3));
    }

    #[test]
    fn zero_series_never_violates() {
        for family in [
            SetFamily::InitialSegments,
            SetFamily::MinBounded,
            SetFamily::ResidueSegments { modulus: 3 },
        ] {
            assert!(check_premise(&family, &Series::Zero, 64).unwrap().is_empty());
        }
    }

    #[test]
    fn blend_of_one_is_half() {
        let b = blend(&[Series::Harmonic], 6).unwrap();
        for i in 1..=6 {
            assert_eq!(b.term(i), rat(1, 2 * i as i64));
        }
    }

    #[test]
    fn blend_of_two_ones_is_three_quarters() {
        let ones = Series::Constant(rat_int(1));
        let b = blend(&[ones.clone(), ones], 4).unwrap();
        assert_eq!(b.term(3), rat(3, 4));
    }

    #[test]
    fn blend_preserves_the_premise() {
        let b = blend(&[Series::Harmonic, Series::Dyadic], 64).unwrap();
        assert!(check_premise(&SetFamily::MinBounded, &b, 64).unwrap().is_empty());
    }

    #[test]
    fn enforcing_on_initial_segments_is_one() {
        for h in [1u64, 10, 100] {
            assert_eq!(
                enforcing_constant_lower(&SetFamily::InitialSegments, h).unwrap(),
                rat_int(1)
            );
        }
    }

    #[test]
    fn enforcing_on_even_odd_is_two() {
        let family = SetFamily::ResidueSegments { modulus: 2 };
        assert_eq!(enforcing_constant_lower(&family, 10).unwrap(), rat_int(2));
    }

    #[test]
    fn enforcing_on_min_bounded_small_horizons() {
        assert_eq!(enforcing_constant_lower(&SetFamily::MinBounded, 2).unwrap(), rat_int(2));
        assert_eq!(enforcing_constant_lower(&SetFamily::MinBounded, 3).unwrap(), rat_int(2));
        assert_eq!(enforcing_constant_lower(&SetFamily::MinBounded, 4).unwrap(), rat(5, 2));
        assert_eq!(enforcing_constant_lower(&SetFamily::MinBounded, 7).unwrap(), rat_int(3));
    }

    #[test]
    fn window_lp_agrees_with_the_explicit_member_lp() {
        // The restriction lists every member, so its LP checks the window
        // formulation (and the dyadic certificate at 3 and 7) independently.
        for h in [2u64, 3, 4, 5, 6, 7, 8, 10] {
            let explicit = SetFamily::MinBounded.restrict(h).unwrap();
            assert_eq!(
                enforcing_constant_lower(&SetFamily::MinBounded, h).unwrap(),
                enforcing_constant_lower(&explicit, h).unwrap(),
                "horizon {h}"
            );
        }
    }

    #[test]
    fn enforcing_flags_uncovered_elements() {
        let family = SetFamily::explicit("partial", vec![BTreeSet::from([1])], false).unwrap();
        match enforcing_constant_lower(&family, 2).unwrap_err() {
            Error::Unbounded { element } => assert_eq!(element, 2),
            other => panic!("expected unbounded, got {other:?}"),
        }
    }

    #[test]
    fn fooling_min_bounded_at_certificate_horizon() {
        let series = fooling_series(&SetFamily::MinBounded, &rat(1, 10), 1023).unwrap();
        let total: Rat = (1..=1023).map(|i| series.term(i)).sum();
        assert_eq!(total, rat_int(10));
        assert_eq!(series.term(1), rat_int(1));
        assert_eq!(series.term(2), rat(1, 2));
        assert_eq!(series.term(1023), rat(1, 512));
    }

    #[test]
    fn fooling_fails_on_initial_segments() {
        match fooling_series(&SetFamily::InitialSegments, &rat(1, 2), 20).unwrap_err() {
            Error::ValueAboveEps { achieved } => assert_eq!(achieved, rat_int(1)),
            other => panic!("expected value-above-eps, got {other:?}"),
        }
    }

    #[test]
    fn fooling_at_eps_one_returns_the_strategy_itself() {
        let series = fooling_series(&SetFamily::MinBounded, &rat_int(1), 3).unwrap();
        let total: Rat = (1..=3).map(|i| series.term(i)).sum();
        assert_eq!(total, rat_int(1));
        assert_eq!(series.term(1), rat(1, 2));
    }
}
