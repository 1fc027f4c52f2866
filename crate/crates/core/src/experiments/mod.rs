//! Seeded experiments, word-map probabilities, analytic bounds, law search
//! and projective zero counts.

mod bounds;
mod harness;
mod law;
mod orders;
mod prob;
mod zeros;

use thiserror::Error;

use crate::girth::GirthError;
use crate::groups::GroupError;
use crate::words::WordError;

pub use bounds::{
    pgl_word_prob_bound, sn_power_prob_lower_bound, sn_word_prob_bound, union_bound_threshold, word_count_up_to,
    BoundKind,
};
pub use harness::{run_girth_experiment, ExperimentConfig, GirthHistogram, TrialRecord};
pub use law::{shortest_law, verify_ping_pong_form, LawOutcome, DEFAULT_NODE_CAP};
pub use orders::{wn_order_experiment, OrderStats};
pub use prob::{estimate_word_prob, exact_power_word_prob_sn, wilson_interval, WordProbEstimate, Z_99};
pub use zeros::{count_projective_zeros, split_product, HomogeneousPoly, ZeroCount};

pub(crate) use harness::round_sig;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExperimentError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("{} trial(s) hit a resource limit; first: trial {}: {}", failed.len(), failed[0].0, failed[0].1)]
    ResourceLimit { failed: Vec<(usize, GirthError)> },
    #[error("search exceeded {0} nodes")]
    SearchCap(u64),
    #[error("outside the bound's domain: {0}")]
    Domain(String),
    #[error("invalid polynomial: {0}")]
    Polynomial(String),
}

impl ExperimentError {
    /// Process exit code: 2 for configuration problems, 3 for resource limits.
    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::ResourceLimit { .. } | ExperimentError::SearchCap(_) => 3,
            _ => 2,
        }
    }
}
