//! Acceptance gate. One test per criterion; each prints a single summary
//! line on success so `--nocapture` reads as a checklist. Expected values
//! here are either closed forms (identity games, step functions) or values
//! frozen from independent brute-force oracles defined at the bottom of
//! this file.

use std::collections::BTreeSet;
use std::time::Instant;

use minimax_lab::zoo::{self, diagonal, lng, lng_strict, ones, tail_game, two_copies, zeros};
use minimax_lab::{
    best_pure_response, enforcing_constant_lower, extract_violating_core, family_from_json,
    family_to_json, fooling_series, game_from_json, game_of_hypergraph, game_to_json, gap_report,
    hypergraph_from_json, hypergraph_to_json, littlestone_dimension, mix_vs_col, mix_vs_row,
    nu_star, rat, rat_u64, row_limit, solve, staircase_exact, strategy_to_cover, tau_star,
    threshold_dimension, truncate, value_grid, vc_dimension, verify, check_premise,
    cover_to_strategy, FiniteGame, Hypergraph, MixedStrategy, Rat, Series, SetFamily,
};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FULL_SCHEDULE: [u64; 7] = [1, 2, 4, 8, 16, 32, 64];

#[test]
fn criterion_01_solver_exactness() {
    let start = Instant::now();
    for k in 1..=20u64 {
        let game = FiniteGame::from_predicate(k, k, |s, t| s == t).unwrap();
        let r = solve(&game).unwrap();
        assert_eq!(r.value, rat_u64(1) / rat_u64(k), "identity {k}x{k}");
        assert!(verify(&game, &r), "certificate failed on identity {k}x{k}");
    }
    let pennies = FiniteGame::new(
        vec!["heads".into(), "tails".into()],
        vec!["heads".into(), "tails".into()],
        vec![vec![rat_u64(1), rat_u64(0)], vec![rat_u64(0), rat_u64(1)]],
    )
    .unwrap();
    let r = solve(&pennies).unwrap();
    assert_eq!(r.value, rat(1, 2));
    assert!(verify(&pennies, &r));
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 10, "took {elapsed:?}");
    println!("criterion 1 pass: identity 1..20 and matching pennies exact in {elapsed:?}");
}

#[test]
fn criterion_02_lng_grid_step_function() {
    let grid = value_grid(&lng(), &FULL_SCHEDULE, &FULL_SCHEDULE).unwrap();
    for (k, &n) in FULL_SCHEDULE.iter().enumerate() {
        for (l, &m) in FULL_SCHEDULE.iter().enumerate() {
            let expected = if n >= m { Rat::one() } else { Rat::zero() };
            assert_eq!(grid.values[k][l], expected, "V[{n}][{m}]");
        }
    }
    let report = gap_report(&grid, &rat(1, 100)).unwrap();
    assert_eq!(report.lower_estimate, Rat::zero());
    assert_eq!(report.upper_estimate, Rat::one());
    assert!(report.lower_exact);
    assert!(!report.converged);
    println!("criterion 2 pass: LNG grid is the step function, gap report (0, 1)");
}

#[test]
fn criterion_03_diagonal_grid_converges() {
    let grid = value_grid(&diagonal(), &FULL_SCHEDULE, &FULL_SCHEDULE).unwrap();
    for (k, &n) in FULL_SCHEDULE.iter().enumerate() {
        for (l, &m) in FULL_SCHEDULE.iter().enumerate() {
            let expected = if m <= n { rat_u64(1) / rat_u64(m) } else { Rat::zero() };
            assert_eq!(grid.values[k][l], expected, "V[{n}][{m}]");
        }
    }
    let report = gap_report(&grid, &rat(1, 32)).unwrap();
    assert_eq!(report.upper_estimate, rat(1, 64));
    assert_eq!(report.lower_estimate, Rat::zero());
    assert!(report.lower_exact);
    assert!(report.converged, "not converged at tol 1/32 by schedule 64");
    println!("criterion 3 pass: diagonal grid 1/m, both estimates near 0, converged at 1/32");
}

#[test]
fn criterion_04_two_copies_has_no_good_column_strategy() {
    let oracle = two_copies();
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    let half = rat(1, 2);
    for round in 0..100 {
        let support_size = rng.random_range(1..=6u64);
        let mut support = BTreeSet::new();
        while (support.len() as u64) < support_size {
            support.insert(rng.random_range(1..=40u64));
        }
        let weights: Vec<(u64, Rat)> =
            support.iter().map(|&t| (t, rat_u64(rng.random_range(1..=9u64)))).collect();
        let total: Rat = weights.iter().map(|(_, w)| w.clone()).sum();
        let q = MixedStrategy::new(
            weights.into_iter().map(|(t, w)| (t, w / total.clone())).collect(),
        )
        .unwrap();
        let max_col = *support.last().unwrap();
        let window = truncate(&oracle, 2 * max_col + 2, max_col).unwrap();
        let (_, payoff) = best_pure_response(&window, &q).unwrap();
        assert!(payoff >= half, "round {round}: best pure response {payoff} < 1/2");
    }
    for n in 1..=16 {
        let (escape, lambda) = row_limit(&oracle, n).expect("finite rows certify an escape column");
        assert_eq!(lambda, Rat::zero(), "lambda_{n}");
        assert!(escape > 0);
    }
    println!("criterion 4 pass: best pure response >= 1/2 on 100 random q, lambda_n = 0 for n <= 16");
}

#[test]
fn criterion_05_staircase_detection() {
    for n in 1..=12u64 {
        let window = truncate(&lng(), n, n).unwrap();
        let (size, witness) = staircase_exact(&window).unwrap();
        assert_eq!(size, n, "LNG {n}x{n}");
        witness.check_game(&window).unwrap();
    }
    let identity = FiniteGame::from_predicate(6, 6, |s, t| s == t).unwrap();
    assert_eq!(staircase_exact(&identity).unwrap().0, 1);
    let zeros = FiniteGame::from_predicate(5, 5, |_, _| false).unwrap();
    assert_eq!(staircase_exact(&zeros).unwrap().0, 0);

    // Swapping the tie convention (s >= t versus s > t) shifts which window
    // holds a given staircase but not the detectable size: both conventions
    // fit a 12-step staircase in some 12x12 window.
    let weak = truncate(&lng(), 12, 12).unwrap();
    assert_eq!(staircase_exact(&weak).unwrap().0, 12);
    let strict_rows: Vec<u64> = (2..=13).collect();
    let strict_cols: Vec<u64> = (1..=12).collect();
    let strict = truncate(&lng_strict(), 13, 12)
        .unwrap()
        .subgame(&strict_rows, &strict_cols)
        .unwrap();
    assert_eq!(staircase_exact(&strict).unwrap().0, 12);
    println!("criterion 5 pass: exact staircases (LNG = n, identity 1, zeros 0), tie conventions agree");
}

#[test]
fn criterion_06_dimensions_match_brute_force() {
    for n in 2..=16u64 {
        let window = truncate(&lng(), n, n).unwrap();
        assert_eq!(vc_dimension(&window).unwrap(), 1, "vc(LNG {n}x{n})");
    }

    for code in 0u32..(1 << 16) {
        let game = FiniteGame::from_predicate(4, 4, |s, t| {
            code >> ((s - 1) * 4 + (t - 1)) & 1 == 1
        })
        .unwrap();
        let vc = vc_dimension(&game).unwrap();
        let ldim = littlestone_dimension(&game).unwrap();
        assert_eq!(ldim, brute_littlestone(&game), "ldim mismatch at code {code}");
        assert_eq!(
            threshold_dimension(&game).unwrap(),
            brute_threshold(&game),
            "threshold mismatch at code {code}"
        );
        assert!(vc <= ldim, "vc > ldim at code {code}");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(60);
    for round in 0..50 {
        let cells: Vec<Vec<bool>> =
            (0..6).map(|_| (0..6).map(|_| rng.random_bool(0.5)).collect()).collect();
        let game =
            FiniteGame::from_predicate(6, 6, |s, t| cells[(s - 1) as usize][(t - 1) as usize])
                .unwrap();
        let vc = vc_dimension(&game).unwrap();
        let ldim = littlestone_dimension(&game).unwrap();
        assert_eq!(ldim, brute_littlestone(&game), "ldim mismatch round {round}");
        assert_eq!(
            threshold_dimension(&game).unwrap(),
            brute_threshold(&game),
            "threshold mismatch round {round}"
        );
        assert!(vc <= ldim);
    }
    println!("criterion 6 pass: vc(LNG) = 1; littlestone and threshold match brute force (4x4 exhaustive, 50 random 6x6)");
}

#[test]
fn criterion_07_extractor_digs_out_a_staircase() {
    let oracle = lng();
    let core = extract_violating_core(&oracle, &Rat::zero(), &Rat::one(), 10).unwrap();

    // Re-verify the alternating inequalities from scratch: each q holds every
    // accumulated row to <= v_low, each non-seed p wins every previously
    // accumulated column at >= v_bar.
    let mut rows_acc: BTreeSet<u64> = BTreeSet::new();
    let mut cols_acc: BTreeSet<u64> = BTreeSet::new();
    for (round, (p, q)) in core.pairs.iter().enumerate() {
        if round > 0 {
            for &t in &cols_acc {
                assert!(
                    mix_vs_col(&oracle, p, t) >= Rat::one(),
                    "round {} p fails on column {t}",
                    round + 1
                );
            }
        }
        rows_acc.extend(p.support());
        cols_acc.extend(q.support());
        for &s in &rows_acc {
            assert!(
                mix_vs_row(&oracle, s, q) <= Rat::zero(),
                "round {} q fails on row {s}",
                round + 1
            );
        }
    }

    let max_row = *core.row_support.last().unwrap();
    let max_col = *core.col_support.last().unwrap();
    let window = truncate(&oracle, max_row, max_col).unwrap();
    let union = window.subgame(&core.row_support, &core.col_support).unwrap();
    let (size, witness) = staircase_exact(&union).unwrap();
    assert!(size >= 10, "support union only contains a staircase of size {size}");
    witness.check_game(&union).unwrap();
    println!("criterion 7 pass: depth-10 extraction verified stepwise, union holds a staircase of size {size}");
}

#[test]
fn criterion_08_hypergraph_duality() {
    let mut rng = ChaCha8Rng::seed_from_u64(80);
    for round in 0..100 {
        let n = rng.random_range(1..=8u64);
        let n_edges = rng.random_range(1..=8usize);
        let mut edges: Vec<BTreeSet<u64>> = Vec::new();
        for _ in 0..n_edges {
            let mut edge: BTreeSet<u64> = (1..=n).filter(|_| rng.random_bool(0.4)).collect();
            if edge.is_empty() {
                edge.insert(rng.random_range(1..=n));
            }
            edges.push(edge);
        }
        let h = Hypergraph::new((1..=n).map(|v| v.to_string()).collect(), edges).unwrap();
        let (nu, matching) = nu_star(&h).unwrap();
        let (tau, cover) = tau_star(&h).unwrap();
        assert_eq!(nu, tau, "duality gap on round {round}");
        matching.validate(&h).unwrap();
        cover.validate(&h).unwrap();
        let game = game_of_hypergraph(&h).unwrap();
        let value = solve(&game).unwrap().value;
        assert_eq!(value * tau, Rat::one(), "value != 1/tau* on round {round}");

        let p = cover_to_strategy(&cover).unwrap();
        let back = strategy_to_cover(&h, &p, &(Rat::one() / cover.size.clone())).unwrap();
        assert_eq!(back, cover, "cover round-trip not the identity on round {round}");
    }

    let triangle = Hypergraph::new(
        vec!["a".into(), "b".into(), "c".into()],
        vec![[1, 2].into(), [2, 3].into(), [1, 3].into()],
    )
    .unwrap();
    assert_eq!(nu_star(&triangle).unwrap().0, rat(3, 2));
    assert_eq!(tau_star(&triangle).unwrap().0, rat(3, 2));
    assert_eq!(solve(&game_of_hypergraph(&triangle).unwrap()).unwrap().value, rat(2, 3));
    println!("criterion 8 pass: value = 1/tau* = 1/nu* on 100 random hypergraphs, triangle 3/2 and 2/3");
}

#[test]
fn criterion_09_enforcing_and_fooling() {
    let min_family = SetFamily::MinBounded;
    let violations = check_premise(&min_family, &Series::Harmonic, 10_000).unwrap();
    assert!(violations.is_empty(), "harmonic series violated the min-family premise");

    let fooled = fooling_series(&min_family, &rat(1, 10), 1023).unwrap();
    let mass: Rat = (1..=1023u64).map(|i| fooled.term(i)).sum();
    assert_eq!(mass, rat_u64(10));
    assert!(check_premise(&min_family, &fooled, 1023).unwrap().is_empty());

    let even_odd = SetFamily::ResidueSegments { modulus: 2 };
    assert_eq!(enforcing_constant_lower(&even_odd, 10).unwrap(), rat_u64(2));
    assert_eq!(enforcing_constant_lower(&even_odd, 50).unwrap(), rat_u64(2));

    let mut last = Rat::zero();
    for h in [4u64, 8, 16, 32] {
        let c = enforcing_constant_lower(&min_family, h).unwrap();
        assert!(c > last, "C({h}) = {c} did not increase past {last}");
        last = c;
    }
    println!("criterion 9 pass: harmonic premise clean at 10^4, fooling mass 10, even/odd C = 2, min-family C strictly increasing");
}

#[test]
fn criterion_10_monotonicity_and_round_trips() {
    let schedule = [1u64, 2, 4, 8, 16];
    for oracle in zoo::all_oracles() {
        let grid = value_grid(oracle.as_ref(), &schedule, &schedule).unwrap();
        for k in 0..schedule.len() {
            for l in 0..schedule.len() {
                if k > 0 {
                    assert!(
                        grid.values[k][l] >= grid.values[k - 1][l],
                        "{} not row-monotone",
                        oracle.name()
                    );
                }
                if l > 0 {
                    assert!(
                        grid.values[k][l] <= grid.values[k][l - 1],
                        "{} not column-monotone",
                        oracle.name()
                    );
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for round in 0..200 {
        let n = rng.random_range(1..=7u64);
        let m = rng.random_range(1..=7u64);
        let cells: Vec<Vec<bool>> = (0..=n)
            .map(|_| (0..=m).map(|_| rng.random_bool(0.5)).collect())
            .collect();
        let small = FiniteGame::from_predicate(n, m, |s, t| {
            cells[(s - 1) as usize][(t - 1) as usize]
        })
        .unwrap();
        let taller = FiniteGame::from_predicate(n + 1, m, |s, t| {
            cells[(s - 1) as usize][(t - 1) as usize]
        })
        .unwrap();
        let wider = FiniteGame::from_predicate(n, m + 1, |s, t| {
            cells[(s - 1) as usize][(t - 1) as usize]
        })
        .unwrap();
        let v = solve(&small).unwrap().value;
        assert!(solve(&taller).unwrap().value >= v, "row addition hurt on round {round}");
        assert!(solve(&wider).unwrap().value <= v, "column addition helped on round {round}");
    }

    let mut games = vec![
        truncate(&lng(), 5, 7).unwrap(),
        truncate(&diagonal(), 6, 6).unwrap(),
        truncate(&two_copies(), 8, 5).unwrap(),
        truncate(&tail_game(), 4, 4).unwrap(),
        truncate(&ones(), 3, 2).unwrap(),
        truncate(&zeros(), 2, 3).unwrap(),
    ];
    for _ in 0..10 {
        let n = rng.random_range(1..=6u64);
        let m = rng.random_range(1..=6u64);
        let cells: Vec<Vec<bool>> =
            (0..n).map(|_| (0..m).map(|_| rng.random_bool(0.5)).collect()).collect();
        games.push(
            FiniteGame::from_predicate(n, m, |s, t| cells[(s - 1) as usize][(t - 1) as usize])
                .unwrap(),
        );
    }
    for game in &games {
        let text = game_to_json(game);
        let back = game_from_json(&text).unwrap();
        assert_eq!(&back, game);
        assert_eq!(game_to_json(&back), text, "game JSON not byte-stable");
    }

    let triangle = Hypergraph::new(
        vec!["a".into(), "b".into(), "c".into()],
        vec![[1, 2].into(), [2, 3].into(), [1, 3].into()],
    )
    .unwrap();
    for h in [triangle, minimax_lab::tail_hypergraph(6).unwrap()] {
        let text = hypergraph_to_json(&h);
        let back = hypergraph_from_json(&text).unwrap();
        assert_eq!(back, h);
        assert_eq!(hypergraph_to_json(&back), text, "hypergraph JSON not byte-stable");
    }

    for family in [SetFamily::MinBounded.restrict(6).unwrap(), SetFamily::InitialSegments.restrict(5).unwrap()] {
        let text = family_to_json(&family).unwrap();
        let back = family_from_json(&text).unwrap();
        assert_eq!(family_to_json(&back).unwrap(), text, "family JSON not byte-stable");
    }
    println!("criterion 10 pass: grids monotone on every zoo oracle, value monotone on 200 random games, formats round-trip byte-exactly");
}

/// Mistake-bound recursion straight from the definition: no memoization, no
/// canonicalization, classes kept as explicit row-pattern sets.
fn brute_littlestone(game: &FiniteGame) -> u64 {
    let patterns: BTreeSet<Vec<bool>> = (1..=game.n_rows())
        .map(|s| {
            (1..=game.n_cols())
                .map(|t| !game.entry(s, t).unwrap().is_zero())
                .collect()
        })
        .collect();
    let class: Vec<Vec<bool>> = patterns.into_iter().collect();
    brute_ldim_rec(&class)
}

fn brute_ldim_rec(class: &[Vec<bool>]) -> u64 {
    if class.len() <= 1 {
        return 0;
    }
    let n_cols = class[0].len();
    let mut best = 0;
    for col in 0..n_cols {
        let (zeroes, ones): (Vec<Vec<bool>>, Vec<Vec<bool>>) =
            class.iter().cloned().partition(|row| !row[col]);
        if zeroes.is_empty() || ones.is_empty() {
            continue;
        }
        best = best.max(1 + brute_ldim_rec(&zeroes).min(brute_ldim_rec(&ones)));
    }
    best
}

/// Largest staircase by exhaustive search over row and column subsets: a
/// k-subset pair works iff the restricted winning sets form a chain with
/// sizes exactly 1..k.
fn brute_threshold(game: &FiniteGame) -> u64 {
    let n = game.n_rows() as usize;
    let m = game.n_cols() as usize;
    let masks: Vec<u32> = (1..=game.n_rows())
        .map(|s| {
            (1..=game.n_cols())
                .filter(|&t| !game.entry(s, t).unwrap().is_zero())
                .fold(0u32, |acc, t| acc | 1 << (t - 1))
        })
        .collect();
    let mut best = 0u64;
    for k in (1..=n.min(m)).rev() {
        if k as u64 <= best {
            break;
        }
        let found = subsets(n, k).iter().any(|rows| {
            subsets(m, k).iter().any(|cols| {
                let col_mask = cols.iter().fold(0u32, |acc, &c| acc | 1 << c);
                let mut restricted: Vec<u32> =
                    rows.iter().map(|&r| masks[r] & col_mask).collect();
                restricted.sort_by_key(|mask| mask.count_ones());
                restricted.iter().enumerate().all(|(i, &mask)| {
                    mask.count_ones() as usize == i + 1
                        && (i == 0 || mask & restricted[i - 1] == restricted[i - 1])
                })
            })
        });
        if found {
            best = k as u64;
        }
    }
    best
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    subsets_rec(0, n, k, &mut current, &mut out);
    out
}

fn subsets_rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if current.len() == k {
        out.push(current.clone());
        return;
    }
    for i in start..n {
        current.push(i);
        subsets_rec(i + 1, n, k, current, out);
        current.pop();
    }
}

#[test]
fn brute_force_oracles_agree_on_known_cases() {
    let lng4 = truncate(&lng(), 4, 4).unwrap();
    assert_eq!(brute_threshold(&lng4), 4);
    assert_eq!(brute_littlestone(&lng4), 2);
    let identity = FiniteGame::from_predicate(4, 4, |s, t| s == t).unwrap();
    assert_eq!(brute_threshold(&identity), 1);
    let full = FiniteGame::from_predicate(3, 2, |_, _| true).unwrap();
    assert_eq!(brute_threshold(&full), 1);
    assert_eq!(brute_littlestone(&full), 0);
    let empty = FiniteGame::from_predicate(3, 3, |_, _| false).unwrap();
    assert_eq!(brute_threshold(&empty), 0);
}
