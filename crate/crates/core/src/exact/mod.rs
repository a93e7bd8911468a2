//! Exhaustive reference solvers.
//!
//! Everything here is exact. The brute-force routines refuse inputs above a
//! configurable size instead of falling back to heuristics. The SAT-backed
//! deciders in [`sat`] and the certificate in [`slack`] are complete
//! procedures for the larger instances produced by the reduction chain.

mod boolean;
mod partition;
pub mod sat;
pub mod slack;

pub use boolean::{
    is_2_colorable, max_bichromatic_fraction, max_bichromatic_fraction_with, max_val, max_val_nae,
    max_val_nae_with, max_val_with, val, val_nae, Fraction,
};
pub use partition::{opt_max_agree, opt_max_agree_with, opt_min_disagree, opt_min_disagree_with, PartitionIterator};

use serde::{Deserialize, Serialize};

/// Size limits for the exhaustive solvers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactLimits {
    /// Largest vertex count for partition enumeration.
    pub max_partition_vertices: usize,
    /// Largest variable (or hypergraph vertex) count for assignment enumeration.
    pub max_boolean_vars: usize,
}

impl Default for ExactLimits {
    fn default() -> Self {
        Self { max_partition_vertices: 14, max_boolean_vars: 24 }
    }
}
