//! Quality measures for a node→partition assignment.

use std::collections::{BTreeMap, HashMap};

use serde::{Serialize, Serializer};

use crate::digraph::{DiGraph, UnGraph};
use crate::model::SemanticCodeGraph;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct QualityScores {
    /// Intra-partition edges over cut edges; infinite when nothing is cut.
    #[serde(serialize_with = "ser_ratio")]
    pub modularity_ratio: f64,
    pub avg_clustering_coefficient: f64,
    pub file_weighted_accuracy: f64,
    pub file_average_accuracy: f64,
    pub package_weighted_accuracy: f64,
    pub package_average_accuracy: f64,
    pub partition_variance: f64,
    pub distribution_percent: Vec<u32>,
    pub internal_edges: usize,
    pub cut_edges: usize,
}

fn ser_ratio<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*v)
    }
}

/// Population variance of part sizes over the squared mean size.
pub fn partition_variance(sizes: &[f64]) -> f64 {
    if sizes.is_empty() {
        return 0.0;
    }
    let k = sizes.len() as f64;
    let mean = sizes.iter().sum::<f64>() / k;
    if mean == 0.0 {
        return 0.0;
    }
    let var = sizes.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / k;
    var / (mean * mean)
}

/// Part sizes as integer-rounded percentages of all assigned nodes.
pub fn distribution_percent(sizes: &[usize]) -> Vec<u32> {
    let total: usize = sizes.iter().sum();
    if total == 0 {
        return vec![0; sizes.len()];
    }
    sizes.iter().map(|&s| (100.0 * s as f64 / total as f64).round() as u32).collect()
}

/// Modal-partition fraction per unit, as (weighted %, average %).
///
/// `units` pairs each unit key with the partitions of its nodes.
fn accuracy<K: Ord>(units: BTreeMap<K, Vec<usize>>) -> (f64, f64) {
    if units.is_empty() {
        return (100.0, 100.0);
    }
    let mut modal_total = 0usize;
    let mut node_total = 0usize;
    let mut fraction_sum = 0.0;
    for parts in units.values() {
        let mut counts: HashMap<usize, usize> = HashMap::new();
        for &p in parts {
            *counts.entry(p).or_default() += 1;
        }
        let modal = counts.values().copied().max().unwrap_or(0);
        modal_total += modal;
        node_total += parts.len();
        fraction_sum += modal as f64 / parts.len() as f64;
    }
    (100.0 * modal_total as f64 / node_total as f64, 100.0 * fraction_sum / units.len() as f64)
}

/// Scores `assignment` (node id → part in `0..k`) against `graph`.
///
/// Edge-based measures use the undirected simplification restricted to
/// assigned nodes. File and package units exclude location-less stubs.
pub fn score_partition(graph: &SemanticCodeGraph, assignment: &BTreeMap<String, usize>, k: usize) -> QualityScores {
    let ids: Vec<String> = assignment.keys().cloned().collect();
    let part: Vec<usize> = assignment.values().copied().collect();
    let index: HashMap<&str, usize> = ids.iter().enumerate().map(|(i, id)| (id.as_str(), i)).collect();
    let edges = graph
        .edges()
        .iter()
        .filter_map(|e| Some((*index.get(e.from.as_str())?, *index.get(e.to.as_str())?)));
    let un = DiGraph::with_ids(ids.clone(), edges).undirected();

    let mut file_units: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    let mut package_units: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (id, &p) in assignment {
        if let Some(node) = graph.node(id).filter(|n| !n.is_stub()) {
            file_units.entry(&node.file_uri).or_default().push(p);
            package_units.entry(&node.package_name).or_default().push(p);
        }
    }
    score_parts(&un, &part, k, file_units, package_units)
}

pub(crate) fn score_parts<K: Ord>(
    un: &UnGraph,
    part: &[usize],
    k: usize,
    file_units: BTreeMap<K, Vec<usize>>,
    package_units: BTreeMap<K, Vec<usize>>,
) -> QualityScores {
    let mut internal = 0usize;
    let mut cut = 0usize;
    for (u, v) in un.edges() {
        if part[u] == part[v] {
            internal += 1;
        } else {
            cut += 1;
        }
    }
    let modularity_ratio = if cut == 0 { f64::INFINITY } else { internal as f64 / cut as f64 };

    let mut members: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (v, &p) in part.iter().enumerate() {
        members[p].push(v);
    }
    let clustering_sum: f64 = members
        .iter()
        .map(|vs| {
            let local: HashMap<usize, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
            let sub = UnGraph::from_edges(
                vs.len(),
                vs.iter().flat_map(|&v| {
                    let local = &local;
                    un.neighbors(v).iter().filter_map(move |u| Some((local[&v], *local.get(u)?)))
                }),
            );
            sub.transitivity()
        })
        .sum();
    let avg_clustering_coefficient = if k == 0 { 0.0 } else { clustering_sum / k as f64 };

    let sizes: Vec<usize> = members.iter().map(Vec::len).collect();
    let (fw, fa) = accuracy(file_units);
    let (pw, pa) = accuracy(package_units);
    QualityScores {
        modularity_ratio,
        avg_clustering_coefficient,
        file_weighted_accuracy: fw,
        file_average_accuracy: fa,
        package_weighted_accuracy: pw,
        package_average_accuracy: pa,
        partition_variance: partition_variance(&sizes.iter().map(|&s| s as f64).collect::<Vec<_>>()),
        distribution_percent: distribution_percent(&sizes),
        internal_edges: internal,
        cut_edges: cut,
    }
}
