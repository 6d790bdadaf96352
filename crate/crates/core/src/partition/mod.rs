//! Balanced k-way partitioning of the code graph and its quality scoring.
//!
//! Partitions cover every non-FILE node (external stubs included) and are
//! computed on the undirected simplification of the edges among them.

pub mod multilevel;
pub mod quality;

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

pub use multilevel::{edge_cut, MultilevelOptions};
pub use quality::{distribution_percent, partition_variance, score_partition, QualityScores};

use crate::digraph::{DiGraph, UnGraph};
use crate::error::{Error, Result};
use crate::model::SemanticCodeGraph;

/// The shipped partitioner variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    /// Multilevel with FM cut refinement at every level.
    MlvFm,
    /// Multilevel with greedy growing only; no refinement.
    MlvGreedy,
}

impl Algorithm {
    pub const ALL: [Algorithm; 2] = [Algorithm::MlvFm, Algorithm::MlvGreedy];

    pub fn label(self) -> &'static str {
        match self {
            Algorithm::MlvFm => "mlv-fm",
            Algorithm::MlvGreedy => "mlv-greedy",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Serialize for Algorithm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionConfig {
    pub epsilon: f64,
    pub seed: u64,
}

impl Default for PartitionConfig {
    fn default() -> Self {
        PartitionConfig { epsilon: 0.30, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionResult {
    pub algorithm: Algorithm,
    pub k: usize,
    /// Node id → partition index in `0..k`.
    pub assignment: BTreeMap<String, usize>,
    /// Undirected edges crossing partitions.
    pub cut: usize,
    pub quality: QualityScores,
}

/// The partitionable part of a graph: non-FILE nodes and the undirected
/// simple graph among them.
#[derive(Debug, Clone)]
pub struct PartitionInput {
    pub ids: Vec<String>,
    pub graph: UnGraph,
}

impl PartitionInput {
    pub fn new(graph: &SemanticCodeGraph) -> Self {
        let di = DiGraph::from_scg_filtered(graph, |n| !n.is_file());
        PartitionInput { ids: di.ids().to_vec(), graph: di.undirected() }
    }
}

fn check_k(k: usize, nodes: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::Partition(format!("k must be at least 2, got {k}")));
    }
    if k > nodes {
        return Err(Error::Partition(format!("k = {k} exceeds the {nodes} partitionable nodes")));
    }
    Ok(())
}

pub fn partition(graph: &SemanticCodeGraph, k: usize, algorithm: Algorithm, cfg: &PartitionConfig) -> Result<PartitionResult> {
    let input = PartitionInput::new(graph);
    check_k(k, input.ids.len())?;
    Ok(run(graph, &input, k, algorithm, cfg))
}

fn run(graph: &SemanticCodeGraph, input: &PartitionInput, k: usize, algorithm: Algorithm, cfg: &PartitionConfig) -> PartitionResult {
    let opts = MultilevelOptions { epsilon: cfg.epsilon, seed: cfg.seed, refine: algorithm == Algorithm::MlvFm };
    let part = multilevel::partition_graph(&input.graph, k, &opts);
    let cut = edge_cut(&input.graph, &part);
    let assignment: BTreeMap<String, usize> = input.ids.iter().cloned().zip(part).collect();
    let quality = score_partition(graph, &assignment, k);
    PartitionResult { algorithm, k, assignment, cut, quality }
}

/// Every k in `2..=max_k` for both variants, ordered by k then variant.
pub fn partition_sweep(graph: &SemanticCodeGraph, max_k: usize, cfg: &PartitionConfig) -> Result<Vec<PartitionResult>> {
    let input = PartitionInput::new(graph);
    check_k(max_k, input.ids.len())?;
    let jobs: Vec<(usize, Algorithm)> =
        (2..=max_k).flat_map(|k| Algorithm::ALL.into_iter().map(move |a| (k, a))).collect();
    Ok(jobs.into_par_iter().map(|(k, a)| run(graph, &input, k, a, cfg)).collect())
}
