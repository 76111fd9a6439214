//! Exact computational tools for infinite two-person win-lose games studied
//! through their finite truncations.

pub mod density;
pub mod error;
pub mod game;
pub mod hypergraph;
pub mod io;
mod lp;
pub mod oracle;
pub mod rational;
pub mod series;
pub mod setfam;
pub mod solver;
pub mod structure;
pub mod truncation;
pub mod zoo;

pub use density::{density_report, separation_witness, DensityReport};
pub use error::{Error, Result, Side};
pub use game::{FiniteGame, MixedStrategy};
pub use hypergraph::{
    cover_to_strategy, game_of_hypergraph, nu_star, strategy_to_cover, tail_hypergraph, tau_star,
    FractionalSolution, Hypergraph, SolutionKind,
};
pub use io::{
    family_from_json, family_to_json, game_from_json, game_to_json, hypergraph_from_json,
    hypergraph_to_json, strategy_map,
};
pub use oracle::{reduced_truncation, truncate, GameOracle, Pattern};
pub use rational::{format_rat, parse_rat, parse_unit_rat, rat, rat_int, rat_u64, Rat};
pub use series::{
    blend, check_premise, enforcing_constant_lower, fooling_series, Series, Violation,
};
pub use setfam::{b1_family, b2_family, SetFamily};
pub use solver::{best_pure_response, solve, verify, SolveResult, MAX_SOLVE_DIM};
pub use structure::{
    chain_to_staircase, littlestone_dimension, longest_chain, row_col_profile, staircase_exact,
    staircase_greedy, threshold_dimension, vc_dimension, Chain, GreedyStaircase, RowColProfile,
    StaircaseWitness,
};
pub use truncation::{
    cover_columns, extract_violating_core, gap_report, mix_vs_col, mix_vs_row, row_limit,
    value_grid, value_grid_threaded, CellWitness, GapReport, ValueGrid, ViolatingCore,
};
pub use zoo::{family_game, staircase_matrix, FamilyOracle, FiniteOracle, ORACLE_NAMES};
