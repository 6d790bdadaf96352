//! Node centrality measures over a directed simple graph.
//!
//! Conventions: PageRank follows out-links; eigenvector and Katz aggregate
//! over incoming edges; harmonic centrality uses outgoing distances;
//! betweenness is unnormalized (raw pair-dependency sums).

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use crate::digraph::DiGraph;

/// Scores indexed like the graph's vertices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scores {
    pub values: Vec<f64>,
    pub iterations: usize,
    /// False when the iteration budget ran out before the tolerance was met.
    pub converged: bool,
}

impl Scores {
    fn exact(values: Vec<f64>) -> Self {
        Scores { values, iterations: 0, converged: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PageRankConfig {
    pub damping: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for PageRankConfig {
    fn default() -> Self {
        PageRankConfig { damping: 0.85, tolerance: 1e-8, max_iterations: 100 }
    }
}

/// Power iteration with uniform teleport; dangling mass is spread uniformly.
pub fn pagerank(g: &DiGraph, cfg: &PageRankConfig) -> Scores {
    let n = g.len();
    if n == 0 {
        return Scores::exact(Vec::new());
    }
    let nf = n as f64;
    let d = cfg.damping;
    let mut x = vec![1.0 / nf; n];
    let mut next = vec![0.0; n];
    for it in 1..=cfg.max_iterations {
        let dangling: f64 = (0..n).filter(|&v| g.out_degree(v) == 0).map(|v| x[v]).sum();
        let base = (1.0 - d) / nf + d * dangling / nf;
        for (v, slot) in next.iter_mut().enumerate() {
            *slot = base + d * g.predecessors(v).iter().map(|&u| x[u] / g.out_degree(u) as f64).sum::<f64>();
        }
        let change: f64 = x.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut x, &mut next);
        if change < cfg.tolerance {
            return Scores { values: x, iterations: it, converged: true };
        }
    }
    Scores { values: x, iterations: cfg.max_iterations, converged: false }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenvectorConfig {
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for EigenvectorConfig {
    fn default() -> Self {
        EigenvectorConfig { tolerance: 1e-8, max_iterations: 1000 }
    }
}

/// Power iteration on `Aᵀ + I` (incoming edges), L2-normalized each step.
///
/// The identity shift keeps periodic graphs from oscillating without changing
/// the dominant eigenvector. A vector that collapses to zero restarts uniform.
pub fn eigenvector(g: &DiGraph, cfg: &EigenvectorConfig) -> Scores {
    let n = g.len();
    if n == 0 {
        return Scores::exact(Vec::new());
    }
    let uniform = vec![1.0 / (n as f64).sqrt(); n];
    let mut x = uniform.clone();
    for it in 1..=cfg.max_iterations {
        let mut next: Vec<f64> =
            (0..n).map(|v| x[v] + g.predecessors(v).iter().map(|&u| x[u]).sum::<f64>()).collect();
        if !normalize_l2(&mut next) {
            next = uniform.clone();
        }
        let change: f64 = x.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        x = next;
        if change < cfg.tolerance {
            return Scores { values: x, iterations: it, converged: true };
        }
    }
    Scores { values: x, iterations: cfg.max_iterations, converged: false }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KatzConfig {
    pub alpha: f64,
    pub beta: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for KatzConfig {
    fn default() -> Self {
        KatzConfig { alpha: 0.1, beta: 1.0, tolerance: 1e-8, max_iterations: 1000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KatzScores {
    pub scores: Scores,
    /// Attenuation actually used; smaller than requested after divergence.
    pub alpha: f64,
    pub halvings: u32,
}

const MAX_HALVINGS: u32 = 60;

/// Iterates `x ← α·Aᵀx + β` to a fixed point and L2-normalizes it. When the
/// iteration diverges or fails to settle, α is halved and the solve restarts.
pub fn katz(g: &DiGraph, cfg: &KatzConfig) -> KatzScores {
    let n = g.len();
    let mut alpha = cfg.alpha;
    let mut halvings = 0;
    loop {
        let mut x = vec![0.0; n];
        let mut outcome = None;
        for it in 1..=cfg.max_iterations {
            let next: Vec<f64> = (0..n)
                .map(|v| alpha * g.predecessors(v).iter().map(|&u| x[u]).sum::<f64>() + cfg.beta)
                .collect();
            let change: f64 = x.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
            x = next;
            if !change.is_finite() || x.iter().any(|v| !v.is_finite()) {
                break;
            }
            if change < cfg.tolerance {
                outcome = Some(it);
                break;
            }
        }
        match outcome {
            Some(iterations) => {
                if !normalize_l2(&mut x) && n > 0 {
                    x = vec![1.0 / (n as f64).sqrt(); n];
                }
                return KatzScores { scores: Scores { values: x, iterations, converged: true }, alpha, halvings };
            }
            None if halvings < MAX_HALVINGS => {
                log::warn!("Katz iteration did not converge with alpha = {alpha}; halving");
                alpha /= 2.0;
                halvings += 1;
            }
            None => {
                return KatzScores {
                    scores: Scores { values: vec![0.0; n], iterations: cfg.max_iterations, converged: false },
                    alpha,
                    halvings,
                }
            }
        }
    }
}

fn normalize_l2(x: &mut [f64]) -> bool {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return false;
    }
    x.iter_mut().for_each(|v| *v /= norm);
    true
}

/// Brandes' algorithm, directed, unit weights, unnormalized.
pub fn betweenness(g: &DiGraph) -> Scores {
    let n = g.len();
    let sources: Vec<usize> = (0..n).collect();
    // fixed-size chunks keep the floating-point summation order stable
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(64)
        .map(|chunk| {
            let mut acc = vec![0.0; n];
            for &s in chunk {
                brandes_from(g, s, &mut acc);
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; n];
    for p in partials {
        for (t, v) in total.iter_mut().zip(p) {
            *t += v;
        }
    }
    Scores::exact(total)
}

fn brandes_from(g: &DiGraph, s: usize, acc: &mut [f64]) {
    let n = g.len();
    let mut stack = Vec::with_capacity(n);
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![usize::MAX; n];
    let mut delta = vec![0.0f64; n];
    sigma[s] = 1.0;
    dist[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        stack.push(v);
        for &w in g.successors(v) {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
            if dist[w] == dist[v] + 1 {
                sigma[w] += sigma[v];
            }
        }
    }
    while let Some(w) = stack.pop() {
        for &v in g.predecessors(w) {
            if dist[v] != usize::MAX && dist[w] == dist[v] + 1 {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
        }
        if w != s {
            acc[w] += delta[w];
        }
    }
}

/// Σ_{v≠u} 1/d(u,v) over outgoing shortest paths, divided by n−1.
pub fn harmonic(g: &DiGraph) -> Scores {
    let n = g.len();
    if n < 2 {
        return Scores::exact(vec![0.0; n]);
    }
    let values = (0..n)
        .into_par_iter()
        .map(|s| {
            let mut dist = vec![usize::MAX; n];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            let mut sum = 0.0;
            while let Some(v) = queue.pop_front() {
                for &w in g.successors(v) {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        sum += 1.0 / dist[w] as f64;
                        queue.push_back(w);
                    }
                }
            }
            sum / (n as f64 - 1.0)
        })
        .collect();
    Scores::exact(values)
}
