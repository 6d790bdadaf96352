//! Project overview statistics.
//!
//! Density and degrees use the directed simple graph; clustering and
//! assortativity use its undirected simplification. FILE nodes count like
//! any other node.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use crate::digraph::{DiGraph, UnGraph};
use crate::model::SemanticCodeGraph;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SummaryStats {
    pub node_count: usize,
    pub edge_count: usize,
    pub total_loc: u64,
    pub node_kind_distribution: BTreeMap<String, usize>,
    pub edge_kind_distribution: BTreeMap<String, usize>,
    pub density: f64,
    pub avg_in_degree: f64,
    pub avg_out_degree: f64,
    pub global_clustering_coefficient: f64,
    /// `None` when endpoint degrees have zero variance (rendered "n/a").
    #[serde(serialize_with = "ser_opt")]
    pub degree_assortativity: Option<f64>,
}

fn ser_opt<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_f64(*x),
        None => s.serialize_str("n/a"),
    }
}

pub fn summarize(graph: &SemanticCodeGraph) -> SummaryStats {
    let mut node_kinds = BTreeMap::new();
    let mut total_loc = 0u64;
    for node in graph.nodes() {
        *node_kinds.entry(node.kind.to_string()).or_insert(0) += 1;
        if node.is_file() {
            total_loc += node.loc as u64;
        }
    }
    let mut edge_kinds = BTreeMap::new();
    for edge in graph.edges() {
        *edge_kinds.entry(edge.kind.to_string()).or_insert(0) += 1;
    }

    let di = DiGraph::from_scg(graph);
    let n = di.len();
    let avg = if n == 0 { 0.0 } else { graph.edge_count() as f64 / n as f64 };
    let un = di.undirected();
    SummaryStats {
        node_count: n,
        edge_count: graph.edge_count(),
        total_loc,
        node_kind_distribution: node_kinds,
        edge_kind_distribution: edge_kinds,
        density: density(&di),
        avg_in_degree: avg,
        avg_out_degree: avg,
        global_clustering_coefficient: un.transitivity(),
        degree_assortativity: degree_assortativity(&un),
    }
}

/// m / (n·(n−1)) on the directed simple graph; 0 for fewer than two nodes.
pub fn density(g: &DiGraph) -> f64 {
    let n = g.len();
    if n < 2 {
        return 0.0;
    }
    g.edge_count() as f64 / (n as f64 * (n as f64 - 1.0))
}

/// Pearson correlation of endpoint degrees, each undirected edge counted in
/// both orientations.
pub fn degree_assortativity(g: &UnGraph) -> Option<f64> {
    let m = g.edge_count();
    if m == 0 {
        return None;
    }
    // symmetric pairs: both marginals are the same distribution
    let (mut s1, mut s2, mut sxy) = (0.0f64, 0.0f64, 0.0f64);
    for (u, v) in g.edges() {
        let (du, dv) = (g.degree(u) as f64, g.degree(v) as f64);
        s1 += du + dv;
        s2 += du * du + dv * dv;
        sxy += 2.0 * du * dv;
    }
    let count = 2.0 * m as f64;
    let mean = s1 / count;
    let var = s2 / count - mean * mean;
    if var <= 1e-12 * (1.0 + mean * mean) {
        return None;
    }
    let cov = sxy / count - mean * mean;
    Some((cov / var).clamp(-1.0, 1.0))
}
