//! CPB optimizers: unconstrained dynamic programming, exact fixed-distribution
//! search (multiset DP and branch and bound), and simulated annealing.

pub mod dp;
pub mod fixed;
pub mod sa;

use serde::{Deserialize, Serialize};

use crate::seq::CodonSeq;

pub use dp::{optimize_unconstrained, suffix_bounds, DpLattice, SuffixBounds};
pub use fixed::{
    enumerate_all, estimate_state_count, optimize_bnb, optimize_exact_dp, BnbOptions, FixedError,
    InitialIncumbent, DEFAULT_STATE_CAP, ENUMERATION_CAP,
};
pub use sa::{optimize_sa, SaCheckpoint, SaError, SaParams, SaTrace};

/// Optimization sense.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    #[serde(rename = "max")]
    Maximize,
    #[serde(rename = "min")]
    Minimize,
}

impl Direction {
    /// Is `a` strictly better than `b` in this direction?
    pub fn better(self, a: f64, b: f64) -> bool {
        match self {
            Direction::Maximize => a > b,
            Direction::Minimize => a < b,
        }
    }

    /// The value every candidate beats.
    pub fn worst(self) -> f64 {
        match self {
            Direction::Maximize => f64::NEG_INFINITY,
            Direction::Minimize => f64::INFINITY,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Direction::Maximize => "max",
            Direction::Minimize => "min",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OptMethod {
    /// Linear-time dynamic program, no distribution constraint.
    UnconstrainedDp,
    /// Exact multiset-state dynamic program under a fixed distribution.
    ExactDp,
    /// Exact depth-first branch and bound under a fixed distribution.
    BranchAndBound,
    /// Simulated annealing under a fixed distribution.
    SimulatedAnnealing,
}

impl OptMethod {
    pub fn label(self) -> &'static str {
        match self {
            OptMethod::UnconstrainedDp => "dp",
            OptMethod::ExactDp => "exact",
            OptMethod::BranchAndBound => "bnb",
            OptMethod::SimulatedAnnealing => "sa",
        }
    }
}

/// Search effort counters; fields irrelevant to a method stay zero.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Codon pair score evaluations.
    pub pair_evaluations: u64,
    /// Dynamic-programming states materialized.
    pub states: u64,
    /// Branch-and-bound nodes visited.
    pub nodes_expanded: u64,
    /// Branch-and-bound children cut by the bound.
    pub nodes_pruned: u64,
    /// Annealing iterations performed.
    pub iterations: u64,
    /// Annealing moves accepted.
    pub accepted_moves: u64,
    /// Annealing restarts performed.
    pub restarts: u32,
}

/// A recoded sequence with its achieved CPB and search metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub sequence: CodonSeq,
    /// CPB of `sequence`, recomputed from the table at the end of the search.
    pub cpb: f64,
    /// Sum of pair scores (CPB numerator).
    pub total_score: f64,
    pub method: OptMethod,
    pub direction: Direction,
    /// Whether the result is provably optimal (exact methods that ran to
    /// completion) rather than heuristic or budget-truncated.
    pub optimal: bool,
    pub stats: SearchStats,
}
