//! Solvers for the search and rescue game played on a cycle.
//!
//! A Hider places `k` targets on the vertices `1..=n` of a cycle whose root
//! `0` is where the search starts. The Searcher extends a contiguous arc
//! around the root one vertex at a time; each vertex `i` searched is survived
//! with probability `p_i`. The payoff is the probability of surviving until
//! the last target is found.
//!
//! The crate provides closed-form solutions where they exist
//! ([`single`], [`multi`], [`continuous`]) together with an exhaustive
//! matrix-game oracle ([`matrix`]) used to check them.

pub mod continuous;
pub mod dispatch;
pub mod error;
pub mod game;
pub mod golden;
pub mod matrix;
pub mod multi;
pub mod single;
pub mod solution;

pub use continuous::{CirclePlacement, ContinuousBounds, ContinuousGame};
pub use error::{Error, Result};
pub use game::{
    enumerate_expanding_searches, mixed_payoff, payoff, payoff_prime, CycleGame, ExpandingSearch,
    HiderPlacement, MixedStrategy, Move, SwitchingRule,
};
pub use matrix::{solve_matrix_game, MatrixGame, MatrixSolution};
pub use solution::{GameSolution, Guarantee, Method, SearchPlan};

/// Tolerance on probability vectors summing to one.
pub const PROB_SUM_TOL: f64 = 1e-12;
