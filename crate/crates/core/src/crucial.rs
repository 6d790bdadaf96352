//! Crucial code entities: top-n rankings over nine importance metrics.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::centrality::{self, EigenvectorConfig, KatzConfig, PageRankConfig};
use crate::digraph::DiGraph;
use crate::model::SemanticCodeGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Metric {
    Loc,
    OutDegree,
    InDegree,
    Pagerank,
    Eigenvector,
    Katz,
    Betweenness,
    Harmonic,
    Combined,
}

impl Metric {
    /// The eight metrics the combined importance aggregates, in report order.
    pub const BASE: [Metric; 8] = [
        Metric::Loc,
        Metric::OutDegree,
        Metric::InDegree,
        Metric::Pagerank,
        Metric::Eigenvector,
        Metric::Katz,
        Metric::Betweenness,
        Metric::Harmonic,
    ];

    pub const ALL: [Metric; 9] = [
        Metric::Loc,
        Metric::OutDegree,
        Metric::InDegree,
        Metric::Pagerank,
        Metric::Eigenvector,
        Metric::Katz,
        Metric::Betweenness,
        Metric::Harmonic,
        Metric::Combined,
    ];

    pub fn title(self) -> &'static str {
        match self {
            Metric::Loc => "Lines of code",
            Metric::OutDegree => "Node out-degree",
            Metric::InDegree => "Node in-degree",
            Metric::Pagerank => "PageRank",
            Metric::Eigenvector => "Eigenvector centrality",
            Metric::Katz => "Katz centrality",
            Metric::Betweenness => "Betweenness centrality",
            Metric::Harmonic => "Harmonic centrality",
            Metric::Combined => "Combined importance",
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            Metric::Loc => "LOC",
            Metric::OutDegree => "OUT_DEGREE",
            Metric::InDegree => "IN_DEGREE",
            Metric::Pagerank => "PAGERANK",
            Metric::Eigenvector => "EIGENVECTOR",
            Metric::Katz => "KATZ",
            Metric::Betweenness => "BETWEENNESS",
            Metric::Harmonic => "HARMONIC",
            Metric::Combined => "COMBINED",
        }
    }

    /// Integer-valued metrics render without decimals.
    pub fn is_count(self) -> bool {
        matches!(self, Metric::Loc | Metric::OutDegree | Metric::InDegree | Metric::Combined)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankEntry {
    pub id: String,
    pub score: f64,
}

/// Entries sorted by score descending, ties by id ascending.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricRanking {
    pub metric: Metric,
    pub entries: Vec<RankEntry>,
}

impl MetricRanking {
    /// Ranks `scores`, keeping the best `n`.
    pub fn top(metric: Metric, scores: impl IntoIterator<Item = (String, f64)>, n: usize) -> Self {
        let mut entries: Vec<RankEntry> = scores.into_iter().map(|(id, score)| RankEntry { id, score }).collect();
        entries.sort_by(|a, b| b.score.partial_cmp(&a.score).unwrap_or(Ordering::Equal).then_with(|| a.id.cmp(&b.id)));
        entries.truncate(n);
        MetricRanking { metric, entries }
    }

    pub fn contains(&self, id: &str) -> bool {
        self.entries.iter().any(|e| e.id == id)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CrucialConfig {
    pub pagerank: PageRankConfig,
    pub eigenvector: EigenvectorConfig,
    pub katz: KatzConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrucialReport {
    pub n: usize,
    pub rankings: Vec<MetricRanking>,
    /// Katz attenuation used after any divergence halving.
    pub katz_alpha: f64,
    /// Metrics whose iteration stopped at the budget.
    pub unconverged: Vec<Metric>,
}

impl CrucialReport {
    pub fn ranking(&self, metric: Metric) -> Option<&MetricRanking> {
        self.rankings.iter().find(|r| r.metric == metric)
    }
}

/// Number of base rankings each node appears in. Inputs are truncated to `n`.
pub fn combined_importance(base: &[MetricRanking], n: usize) -> MetricRanking {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for ranking in base {
        for entry in ranking.entries.iter().take(n) {
            *counts.entry(&entry.id).or_default() += 1;
        }
    }
    MetricRanking::top(Metric::Combined, counts.into_iter().map(|(id, c)| (id.to_string(), c as f64)), n)
}

/// Runs every metric and assembles the top-`n` report.
///
/// Metrics are computed on the whole directed simple graph; FILE nodes and
/// location-less external stubs are left out of the rankings.
pub fn crucial(graph: &SemanticCodeGraph, n: usize, cfg: &CrucialConfig) -> CrucialReport {
    let g = DiGraph::from_scg(graph);
    let rankable: Vec<usize> = (0..g.len())
        .filter(|&v| graph.node(g.id(v)).is_some_and(|node| !node.is_file() && !node.is_stub()))
        .collect();
    let rank = |metric: Metric, values: &[f64]| {
        MetricRanking::top(metric, rankable.iter().map(|&v| (g.id(v).to_string(), values[v])), n)
    };

    let loc: Vec<f64> = g.ids().iter().map(|id| graph.node(id).map_or(0.0, |n| n.loc as f64)).collect();
    let out_deg: Vec<f64> = (0..g.len()).map(|v| g.out_degree(v) as f64).collect();
    let in_deg: Vec<f64> = (0..g.len()).map(|v| g.in_degree(v) as f64).collect();

    let (pr, (ev, (katz, (bw, hc)))) = rayon::join(
        || centrality::pagerank(&g, &cfg.pagerank),
        || {
            rayon::join(
                || centrality::eigenvector(&g, &cfg.eigenvector),
                || {
                    rayon::join(
                        || centrality::katz(&g, &cfg.katz),
                        || rayon::join(|| centrality::betweenness(&g), || centrality::harmonic(&g)),
                    )
                },
            )
        },
    );

    let mut unconverged = Vec::new();
    if !pr.converged {
        unconverged.push(Metric::Pagerank);
    }
    if !ev.converged {
        unconverged.push(Metric::Eigenvector);
    }
    if !katz.scores.converged {
        unconverged.push(Metric::Katz);
    }

    let mut rankings = vec![
        rank(Metric::Loc, &loc),
        rank(Metric::OutDegree, &out_deg),
        rank(Metric::InDegree, &in_deg),
        rank(Metric::Pagerank, &pr.values),
        rank(Metric::Eigenvector, &ev.values),
        rank(Metric::Katz, &katz.scores.values),
        rank(Metric::Betweenness, &bw.values),
        rank(Metric::Harmonic, &hc.values),
    ];
    rankings.push(combined_importance(&rankings, n));
    CrucialReport { n, rankings, katz_alpha: katz.alpha, unconverged }
}
