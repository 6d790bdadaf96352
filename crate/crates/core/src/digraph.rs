//! Dense, index-based views of a graph used by the analysis algorithms.

use std::collections::{BTreeSet, HashMap};

use crate::model::SemanticCodeGraph;

/// Directed simple graph: no self-loops, no parallel edges, sorted adjacency.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DiGraph {
    ids: Vec<String>,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
}

impl DiGraph {
    /// Builds from an edge list over `n` vertices named `0..n`.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let ids = (0..n).map(|i| i.to_string()).collect();
        Self::with_ids(ids, edges)
    }

    pub fn with_ids(ids: Vec<String>, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let n = ids.len();
        let set: BTreeSet<(usize, usize)> = edges.into_iter().filter(|(u, v)| u != v).collect();
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        for (u, v) in set {
            out[u].push(v);
            inn[v].push(u);
        }
        for list in &mut inn {
            list.sort_unstable();
        }
        DiGraph { ids, out, inn }
    }

    /// All SCG nodes, ordered by id.
    pub fn from_scg(graph: &SemanticCodeGraph) -> Self {
        Self::from_scg_filtered(graph, |_| true)
    }

    /// Induced subgraph on the nodes accepted by `keep`, ordered by id.
    pub fn from_scg_filtered(graph: &SemanticCodeGraph, keep: impl Fn(&crate::model::SemanticNode) -> bool) -> Self {
        let ids: Vec<String> = graph.nodes().filter(|n| keep(n)).map(|n| n.id.clone()).collect();
        let index: HashMap<&str, usize> = ids.iter().enumerate().map(|(i, id)| (id.as_str(), i)).collect();
        let edges: Vec<(usize, usize)> = graph
            .edges()
            .iter()
            .filter_map(|e| Some((*index.get(e.from.as_str())?, *index.get(e.to.as_str())?)))
            .collect();
        Self::with_ids(ids, edges)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn predecessors(&self, v: usize) -> &[usize] {
        &self.inn[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.inn[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out.iter().enumerate().flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v)))
    }

    /// Undirected simplification: opposite and parallel edges collapse.
    pub fn undirected(&self) -> UnGraph {
        UnGraph::from_edges(self.len(), self.edges())
    }
}

/// Undirected simple graph with sorted adjacency lists.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UnGraph {
    adj: Vec<Vec<usize>>,
}

impl UnGraph {
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let set: BTreeSet<(usize, usize)> =
            edges.into_iter().filter(|(u, v)| u != v).map(|(u, v)| (u.min(v), u.max(v))).collect();
        let mut adj = vec![Vec::new(); n];
        for (u, v) in set {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        UnGraph { adj }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Each undirected edge once, as (smaller, larger).
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, vs)| vs.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// (closed triangles counted once, connected triples centred at any vertex)
    pub fn triangles_and_triples(&self) -> (u64, u64) {
        let mut triangles = 0u64;
        let mut triples = 0u64;
        for u in 0..self.len() {
            let d = self.degree(u) as u64;
            triples += d * d.saturating_sub(1) / 2;
            for &v in self.neighbors(u).iter().filter(|&&v| v > u) {
                // common neighbours w > v close the triangle u < v < w
                let (a, b) = (self.neighbors(u), self.neighbors(v));
                let (mut i, mut j) = (0, 0);
                while i < a.len() && j < b.len() {
                    match a[i].cmp(&b[j]) {
                        std::cmp::Ordering::Less => i += 1,
                        std::cmp::Ordering::Greater => j += 1,
                        std::cmp::Ordering::Equal => {
                            if a[i] > v {
                                triangles += 1;
                            }
                            i += 1;
                            j += 1;
                        }
                    }
                }
            }
        }
        (triangles, triples)
    }

    /// Global clustering coefficient, 3·triangles / connected triples (0 without triples).
    pub fn transitivity(&self) -> f64 {
        let (t, triples) = self.triangles_and_triples();
        if triples == 0 {
            0.0
        } else {
            3.0 * t as f64 / triples as f64
        }
    }
}
