//! BV-LASSO variable selection.
//!
//! Observations collected under a fixed decision are binned; each bin runs a
//! LASSO on bin-normalized covariates and votes for its support. Votes are
//! combined with weights into per-variable scores, and variables scoring at
//! least `xi` are selected.

mod chernoff;
mod constants;
mod local;
mod schedule;
mod votes;
mod voting;

pub use chernoff::{allocation_value, chernoff_objective, optimal_chernoff, worst_case_allocation, ChernoffSolution};
pub use constants::{compute_pq, ConstantsBundle, MisidModel};
pub use local::{local_relevance_bounds, LocalBounds};
pub use schedule::{hyperparams, integer_root, Schedule};
pub use votes::{localized_select, BinVote, Observation, SelectionParams};
pub use voting::{aggregate_votes, select, threshold_select, voting_weights, SelectionOutcome, WeightScheme};

/// Threshold for global relevance.
pub const DEFAULT_XI: f64 = 0.5;
