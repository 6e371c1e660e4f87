//! Hat guessing games on graphs: strategy constructions, exhaustive
//! verification, exact solvability search and adversaries.
//!
//! Vertices and colors are 0-indexed. A coloring of an `n`-vertex graph is a
//! word in `[q]^n`; vertex `v` sees the colors of `g.sees(v)` and must guess
//! its own.

pub mod budget;
pub mod constructions;
pub mod error;
pub mod field;
pub mod formats;
pub mod graphs;
pub mod hamming;
pub mod linear;
pub mod saturated;
pub mod solver;
pub mod strategies;
pub mod words;

pub use budget::Budget;
pub use constructions::{
    bipartite_from_saturated, complete_graph_strategy, directed_cycle_strategy, multipartite_partial,
    multipartite_strategy, Construction, PartialColoringSet,
};
pub use error::{Error, Result};
pub use field::FieldSpec;
pub use formats::{parse_graph, parse_matrix, parse_strategy, verdict_line, write_graph, write_matrix, StrategyFile};
pub use graphs::{build_graph, degeneracy, GraphSpec, Mode, SightGraph};
pub use hamming::{find_center, hamming_distance, BallCertificate, CenterMode, CenterSearch};
pub use linear::{
    c4_linear_example, cycle_minus_edge_adversary, decide_linear_solvable, linear_verify, matrix_rank,
    min_rank_bruteforce, LinearDecision, LinearReport, LinearStrategy, MinRank,
};
pub use saturated::{is_t_saturated, random_saturated, search_saturated, SaturatedMatrix, Saturation, SearchOutcome};
pub use solver::{
    decide_solvable, hat_guessing_number, lll_bad_coloring, robust_bad_coloring, HatGuessingNumber, RobustOutcome,
    SolveOutcome, SolveVerdict,
};
pub use strategies::{
    find_all_bad_colorings, lift_strategy, tree_reduction, verify_wins, verify_wins_par, Reduction, TableStrategy,
    Verdict,
};
pub use words::{Color, Coloring};
