//! Ground truth for tests: exhaustive search, graph generators and fuzzing.

mod exhaustive;
mod fuzz;
mod generate;
mod well;

use thiserror::Error;

use crate::graph::GraphError;

pub use exhaustive::{exhaustive_offsets, oracle_accepts, Exhaustive, EXHAUSTIVE_LIMIT};
pub use fuzz::{
    check_instance, fuzz_campaign, fuzz_campaign_with, shrink, Checked, FuzzConfig, FuzzFailure,
    FuzzReport, Instance,
};
pub use generate::{gen_named, gen_random, gen_regular, NAMED_FAMILIES};
pub use well::{hall_condition, well_bruteforce, WELL_BRUTE_LIMIT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance too large: {elements} > {limit}")]
    TooLarge { elements: usize, limit: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("unknown graph family {0:?}")]
    UnknownFamily(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
