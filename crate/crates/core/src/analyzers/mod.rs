//! Exact complexity measures: sensitivity, block sensitivity, effective
//! variables, minterm checks and the Simon lower bound.

mod block;
mod minterm;
mod sensitivity;

use serde::{Deserialize, Serialize};

use crate::word::Word;

pub use block::{
    block_sensitivity_at, block_sensitivity_at_index, global_block_sensitivity, BlockLimits, BlockPacking,
    BlockScratch, BlockSearch, DEFAULT_BLOCK_SEARCH_LIMIT, DEFAULT_NODE_CAP,
};
pub use minterm::{effective_variables, simon_bound_check, verify_minterm, SimonCheck, DEFAULT_MINTERM_BUDGET};
pub use sensitivity::{
    global_sensitivity, sensitive_positions, sensitivity_at, sensitivity_at_index, SensitivityProfile,
};

/// How a reported value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exhaustive,
    Pointwise,
    BlockSearch,
}

/// Limits in force when a measure was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub dense_limit: usize,
    pub block_cap: Option<usize>,
    pub node_cap: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { dense_limit: crate::function::DEFAULT_DENSE_LIMIT, block_cap: None, node_cap: DEFAULT_NODE_CAP }
    }
}

/// One computed measure. `exhausted` means a budget ran out, so `value` is
/// only a lower bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub measure: String,
    pub value: usize,
    pub witness: Option<Word>,
    pub method: Method,
    pub budget: Budget,
    pub exhausted: bool,
}
