//! Correlation clustering with same-cluster queries.
//!
//! The crate is organised around the pieces of the workbench:
//!
//! * [`instance`]: ±-labelled complete graphs, clusterings, cost functions,
//!   planted instances and the text file formats.
//! * [`oracle`]: perfect and faulty same-cluster oracles, query ledgers and
//!   query-based sample partitioning.
//! * [`exact`]: brute-force reference solvers used to validate everything else.
//! * [`query_cluster`]: the perfect-oracle MaxAgree / MinDisAgree algorithms.
//! * [`faulty_cluster`]: the faulty-oracle variants built on cluster recovery.
//! * [`reductions`]: the E3-SAT → NAE6 → NAE3 → monotone NAE3 → hypergraph →
//!   correlation clustering chain and its verifiers.

pub mod error;
pub mod exact;
pub mod faulty_cluster;
pub mod formula;
pub mod instance;
pub mod oracle;
pub mod query_cluster;
pub mod reductions;
mod rng;

pub use error::{Error, Result};
pub use instance::{Clustering, EdgeLabeling, PlantedSpec};
pub use oracle::{Answer, FaultyOracle, PerfectOracle, QueryLedger, SameClusterOracle, SamplePartition};
