//! The formula-size game `EF_{m,k}(𝒜, ℬ)`.
//!
//! S wins a position when some literal separates its two sides; otherwise S
//! may split a side (spending one connective) or move to successors (spending
//! one modal operator). S has a winning strategy exactly when some formula
//! with at most `m` modal operators and `k` binary connectives separates the
//! sides, and strategies convert to such formulas and back.

mod duplicator;
mod minimal;
mod position;
mod solver;
mod strategy;

pub use duplicator::{
    duplicator_bisim_strategy, exhaustive_playout, find_bisimilar_pair, BisimResponder, PlayoutReport, Responder,
};
pub use minimal::{minimal_separating, minimal_separating_with, FrontierEntry};
pub use position::{apply_move, legal_moves, separating_literal, terminal_status, DChoice, GamePosition, Move, Split, Terminal};
pub use solver::{solve, solve_with, Solution, Solver, SolverConfig, Verdict, DEFAULT_NODE_LIMIT, MAX_SPLIT_WIDTH};
pub use strategy::{extract_formula, strategy_from_formula, wins_every_playout, SpoilerStrategy, Step};

use crate::kripke::ModelError;
use crate::logic::LogicError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GameError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error("illegal move: {0}")]
    IllegalMove(&'static str),
    #[error("a split needs D's choice")]
    MissingChoice,
    #[error("successor moves take no choice from D")]
    ExtraneousChoice,
    #[error("search exceeded the limit of {limit} positions")]
    BudgetExceeded { limit: u64 },
    #[error("cannot enumerate splits of a side with {width} distinct types")]
    SplitTooWide { width: usize },
    #[error("invalid strategy: {0}")]
    InvalidStrategy(&'static str),
    #[error("the formula does not separate the two sets")]
    NotSeparating,
    #[error("witness has depth {depth} but the position needs {needed}")]
    WitnessTooShallow { depth: u32, needed: u32 },
    #[error("strategy precondition violated: {0}")]
    Precondition(&'static str),
}
