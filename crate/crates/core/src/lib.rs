//! Semantic Code Graph (SCG) extraction and analysis.
//!
//! The crate extracts a graph of code entities and their dependencies from
//! Java sources ([`java`]), persists it under `.semanticgraphs/` ([`store`]),
//! and analyses it: project overview ([`summary`]), crucial entities
//! ([`crucial`]), k-way partitioning ([`partition`]) and exports
//! ([`export`]). The `scg-cli` binary wires these together ([`cli`]).

pub mod centrality;
pub mod cli;
pub mod crucial;
pub mod digraph;
pub mod error;
pub mod export;
pub mod java;
pub mod model;
pub mod partition;
pub mod store;
pub mod summary;

pub use error::{Error, Result};
pub use model::{EdgeKind, Location, NodeKind, SemanticCodeGraph, SemanticEdge, SemanticNode};
