//! Multilevel k-way partitioner: heavy-edge coarsening, greedy graph-growing
//! initial partition, boundary Fiduccia–Mattheyses refinement while
//! uncoarsening. Objective is edge cut under a node-count balance bound.

use std::collections::{BinaryHeap, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::digraph::UnGraph;

const NONE: usize = usize::MAX;
const INITIAL_TRIALS: usize = 4;
const FM_PASSES: usize = 8;
/// A pass stops after this many consecutive moves without a new best cut.
const FM_PATIENCE: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultilevelOptions {
    /// Allowed overload: no part may exceed (1+ε)·n/k nodes.
    pub epsilon: f64,
    pub seed: u64,
    /// Run FM refinement at every level; otherwise only the balance repair runs.
    pub refine: bool,
}

impl Default for MultilevelOptions {
    fn default() -> Self {
        MultilevelOptions { epsilon: 0.30, seed: 0, refine: true }
    }
}

/// Undirected graph with vertex and edge weights.
#[derive(Debug, Clone)]
struct WGraph {
    vwgt: Vec<u64>,
    adj: Vec<Vec<(usize, u64)>>,
}

impl WGraph {
    fn from_ungraph(g: &UnGraph) -> Self {
        WGraph {
            vwgt: vec![1; g.len()],
            adj: (0..g.len()).map(|v| g.neighbors(v).iter().map(|&u| (u, 1)).collect()).collect(),
        }
    }

    fn len(&self) -> usize {
        self.vwgt.len()
    }

    fn total_weight(&self) -> u64 {
        self.vwgt.iter().sum()
    }
}

/// Largest part size allowed for `n` nodes in `k` parts.
pub fn max_part_size(n: usize, k: usize, epsilon: f64) -> u64 {
    let ideal = n as f64 / k as f64;
    let bound = ((1.0 + epsilon) * ideal + 1e-9).floor() as u64;
    bound.max(n.div_ceil(k) as u64)
}

/// Vertices at or below this count are partitioned directly.
pub fn coarsen_target(k: usize) -> usize {
    (30 * k).max(200)
}

/// Partitions `g` into `k` parts; returns one part index per vertex.
///
/// Requires `2 <= k <= g.len()`. Every part is nonempty on return.
pub fn partition_graph(g: &UnGraph, k: usize, opts: &MultilevelOptions) -> Vec<usize> {
    let n = g.len();
    assert!(k >= 1 && k <= n, "k must lie in 1..=n");
    if k == 1 {
        return vec![0; n];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let max_part = max_part_size(n, k, opts.epsilon);

    // coarsening phase
    let target = coarsen_target(k);
    let mut levels: Vec<(WGraph, Vec<usize>)> = Vec::new();
    let mut current = WGraph::from_ungraph(g);
    let max_vwgt = ((1.5 * n as f64 / target as f64).ceil() as u64).max(1);
    while current.len() > target {
        let (coarse, cmap) = coarsen(&current, max_vwgt, &mut rng);
        if coarse.len() as f64 > 0.95 * current.len() as f64 {
            break;
        }
        levels.push((std::mem::replace(&mut current, coarse), cmap));
    }

    // initial partition on the coarsest graph
    let mut part = initial_partition(&current, k, max_part, &mut rng);
    balance(&current, &mut part, k, max_part);
    if opts.refine {
        fm_refine(&current, &mut part, k, max_part);
    }

    // uncoarsening
    while let Some((finer, cmap)) = levels.pop() {
        part = cmap.iter().map(|&c| part[c]).collect();
        current = finer;
        balance(&current, &mut part, k, max_part);
        if opts.refine {
            fm_refine(&current, &mut part, k, max_part);
        }
    }
    ensure_nonempty(&current, &mut part, k);
    part
}

/// Heavy-edge matching, then two-hop matching of leftovers sharing a
/// neighbour, then pairing of isolated leftovers.
fn coarsen(g: &WGraph, max_vwgt: u64, rng: &mut ChaCha8Rng) -> (WGraph, Vec<usize>) {
    let n = g.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut mate = vec![NONE; n];
    for &v in &order {
        if mate[v] != NONE {
            continue;
        }
        let mut best: Option<(u64, u64, usize)> = None;
        for &(u, w) in &g.adj[v] {
            if mate[u] != NONE || g.vwgt[v] + g.vwgt[u] > max_vwgt {
                continue;
            }
            // heaviest edge, then lightest partner, then lowest index
            let better = match best {
                None => true,
                Some((bw, bv, bu)) => w > bw || (w == bw && (g.vwgt[u] < bv || (g.vwgt[u] == bv && u < bu))),
            };
            if better {
                best = Some((w, g.vwgt[u], u));
            }
        }
        if let Some((_, _, u)) = best {
            mate[v] = u;
            mate[u] = v;
        }
    }

    let mut by_hub: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut isolated = Vec::new();
    for &v in &order {
        if mate[v] != NONE {
            continue;
        }
        match g.adj[v].iter().max_by_key(|&&(u, w)| (w, std::cmp::Reverse(u))) {
            Some(&(hub, _)) => by_hub.entry(hub).or_default().push(v),
            None => isolated.push(v),
        }
    }
    let mut hubs: Vec<usize> = by_hub.keys().copied().collect();
    hubs.sort_unstable();
    let pair_up = |group: &[usize], mate: &mut Vec<usize>| {
        let mut pending: Option<usize> = None;
        for &v in group {
            match pending {
                Some(p) if g.vwgt[p] + g.vwgt[v] <= max_vwgt => {
                    mate[p] = v;
                    mate[v] = p;
                    pending = None;
                }
                _ => pending = Some(v),
            }
        }
    };
    for hub in hubs {
        pair_up(&by_hub[&hub], &mut mate);
    }
    pair_up(&isolated, &mut mate);

    let mut cmap = vec![NONE; n];
    let mut vwgt = Vec::new();
    for v in 0..n {
        if cmap[v] != NONE {
            continue;
        }
        let c = vwgt.len();
        cmap[v] = c;
        let mut w = g.vwgt[v];
        if mate[v] != NONE {
            cmap[mate[v]] = c;
            w += g.vwgt[mate[v]];
        }
        vwgt.push(w);
    }
    let mut adj: Vec<Vec<(usize, u64)>> = vec![Vec::new(); vwgt.len()];
    let mut acc: HashMap<usize, u64> = HashMap::new();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); vwgt.len()];
    for v in 0..n {
        members[cmap[v]].push(v);
    }
    for (c, slot) in adj.iter_mut().enumerate() {
        acc.clear();
        for &v in &members[c] {
            for &(u, w) in &g.adj[v] {
                let cu = cmap[u];
                if cu != c {
                    *acc.entry(cu).or_default() += w;
                }
            }
        }
        let mut list: Vec<(usize, u64)> = acc.iter().map(|(&u, &w)| (u, w)).collect();
        list.sort_unstable();
        *slot = list;
    }
    (WGraph { vwgt, adj }, cmap)
}

fn bfs_distances(g: &WGraph, sources: &[usize]) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.len()];
    let mut queue = std::collections::VecDeque::new();
    for &s in sources {
        dist[s] = 0;
        queue.push_back(s);
    }
    while let Some(v) = queue.pop_front() {
        for &(u, _) in &g.adj[v] {
            if dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    dist
}

/// Farthest vertex from `sources` (unreachable counts as farthest); ties go
/// to the earliest vertex in `order`.
fn farthest(g: &WGraph, sources: &[usize], order: &[usize], taken: &[bool]) -> Option<usize> {
    let dist = bfs_distances(g, sources);
    let best = order.iter().filter(|&&v| !taken[v]).map(|&v| dist[v]).max()?;
    order.iter().copied().find(|&v| !taken[v] && dist[v] == best)
}

fn initial_partition(g: &WGraph, k: usize, max_part: u64, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut best: Option<(u64, u64, Vec<usize>)> = None;
    for _ in 0..INITIAL_TRIALS {
        let mut order: Vec<usize> = (0..g.len()).collect();
        order.shuffle(rng);
        let part = grow(g, k, max_part, &order);
        let key = (overload(g, &part, k, max_part), cut_weight(g, &part));
        if best.as_ref().is_none_or(|(o, c, _)| key < (*o, *c)) {
            best = Some((key.0, key.1, part));
        }
    }
    best.expect("at least one trial").2
}

fn grow(g: &WGraph, k: usize, max_part: u64, order: &[usize]) -> Vec<usize> {
    let n = g.len();
    let total = g.total_weight();
    let mut part = vec![NONE; n];
    let mut taken = vec![false; n];

    // seeds: a pseudo-peripheral vertex, then repeatedly the vertex farthest
    // from all chosen seeds
    let start = order[0];
    let first = farthest(g, &[start], order, &taken).unwrap_or(start);
    let mut seeds = vec![first];
    taken[first] = true;
    while seeds.len() < k {
        match farthest(g, &seeds, order, &taken) {
            Some(s) => {
                taken[s] = true;
                seeds.push(s);
            }
            None => break,
        }
    }

    let mut assigned_weight = 0u64;
    for p in 0..k - 1 {
        let remaining_parts = (k - p) as u64;
        let target = (total - assigned_weight).div_ceil(remaining_parts);
        let seed = if part[seeds[p]] == NONE {
            seeds[p]
        } else {
            match order.iter().copied().find(|&v| part[v] == NONE) {
                Some(v) => v,
                None => break,
            }
        };
        let mut weight = 0u64;
        // gain = weight into the growing part minus weight to unassigned vertices
        let mut heap: BinaryHeap<(i64, std::cmp::Reverse<usize>)> = BinaryHeap::new();
        let mut conn = vec![0i64; n];
        let add = |v: usize, part: &mut Vec<usize>, conn: &mut Vec<i64>, heap: &mut BinaryHeap<_>, weight: &mut u64| {
            part[v] = p;
            *weight += g.vwgt[v];
            for &(u, w) in &g.adj[v] {
                if part[u] == NONE {
                    conn[u] += w as i64;
                    let ext: i64 = g.adj[u].iter().filter(|&&(x, _)| part[x] == NONE).map(|&(_, w)| w as i64).sum();
                    heap.push((conn[u] - ext, std::cmp::Reverse(u)));
                }
            }
        };
        add(seed, &mut part, &mut conn, &mut heap, &mut weight);
        while weight < target {
            let next = loop {
                match heap.pop() {
                    Some((_, std::cmp::Reverse(v))) if part[v] == NONE => {
                        if weight + g.vwgt[v] <= max_part {
                            break Some(v);
                        }
                    }
                    Some(_) => continue,
                    None => break None,
                }
            };
            let v = match next {
                Some(v) => v,
                // frontier exhausted: jump to another component
                None => match order.iter().copied().find(|&v| part[v] == NONE && weight + g.vwgt[v] <= max_part) {
                    Some(v) => v,
                    None => break,
                },
            };
            add(v, &mut part, &mut conn, &mut heap, &mut weight);
        }
        assigned_weight += weight;
    }
    for slot in part.iter_mut().filter(|p| **p == NONE) {
        *slot = k - 1;
    }
    part
}

fn part_weights(g: &WGraph, part: &[usize], k: usize) -> Vec<u64> {
    let mut pw = vec![0u64; k];
    for (v, &p) in part.iter().enumerate() {
        pw[p] += g.vwgt[v];
    }
    pw
}

fn overload(g: &WGraph, part: &[usize], k: usize, max_part: u64) -> u64 {
    part_weights(g, part, k).iter().map(|&w| w.saturating_sub(max_part)).sum()
}

fn cut_weight(g: &WGraph, part: &[usize]) -> u64 {
    let mut cut = 0;
    for v in 0..g.len() {
        for &(u, w) in &g.adj[v] {
            if u > v && part[u] != part[v] {
                cut += w;
            }
        }
    }
    cut
}

/// Connectivity of `v` to each part it touches, plus its own-part weight.
fn connectivity(g: &WGraph, part: &[usize], v: usize) -> (u64, Vec<(usize, u64)>) {
    let own = part[v];
    let mut internal = 0;
    let mut ext: Vec<(usize, u64)> = Vec::new();
    for &(u, w) in &g.adj[v] {
        let p = part[u];
        if p == own {
            internal += w;
        } else if let Some(slot) = ext.iter_mut().find(|(q, _)| *q == p) {
            slot.1 += w;
        } else {
            ext.push((p, w));
        }
    }
    (internal, ext)
}

/// Moves vertices out of overweight parts, cheapest cut increase first.
fn balance(g: &WGraph, part: &mut [usize], k: usize, max_part: u64) {
    let mut pw = part_weights(g, part, k);
    let mut counts = vec![0usize; k];
    for &p in part.iter() {
        counts[p] += 1;
    }
    loop {
        let Some(src) = (0..k).filter(|&p| pw[p] > max_part).max_by_key(|&p| (pw[p], std::cmp::Reverse(p))) else {
            return;
        };
        let mut best: Option<(i64, usize, usize)> = None;
        for v in (0..g.len()).filter(|&v| part[v] == src) {
            let w = g.vwgt[v];
            let (internal, ext) = connectivity(g, part, v);
            let mut consider = |dst: usize, gain: i64| {
                if dst != src && pw[dst] + w <= max_part {
                    let cand = (gain, v, dst);
                    let better = match best {
                        None => true,
                        Some((bg, bv, bd)) => gain > bg || (gain == bg && (pw[dst], v) < (pw[bd], bv)),
                    };
                    if better {
                        best = Some(cand);
                    }
                }
            };
            for &(dst, wt) in &ext {
                consider(dst, wt as i64 - internal as i64);
            }
            let lightest = (0..k).min_by_key(|&p| (pw[p], p)).unwrap_or(0);
            consider(lightest, -(internal as i64));
        }
        match best {
            Some((_, v, dst)) if counts[src] > 1 => {
                pw[src] -= g.vwgt[v];
                pw[dst] += g.vwgt[v];
                counts[src] -= 1;
                counts[dst] += 1;
                part[v] = dst;
            }
            _ => return,
        }
    }
}

/// Boundary FM with rollback to the best prefix of each pass.
fn fm_refine(g: &WGraph, part: &mut [usize], k: usize, max_part: u64) {
    let n = g.len();
    let mut pw = part_weights(g, part, k);
    let mut counts = vec![0usize; k];
    for &p in part.iter() {
        counts[p] += 1;
    }
    let best_move = |part: &[usize], pw: &[u64], v: usize| -> Option<(i64, usize)> {
        let (internal, ext) = connectivity(g, part, v);
        ext.iter()
            .filter(|&&(p, _)| pw[p] + g.vwgt[v] <= max_part)
            .map(|&(p, w)| (w as i64 - internal as i64, p))
            .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
    };

    for _ in 0..FM_PASSES {
        let mut heap: BinaryHeap<(i64, std::cmp::Reverse<usize>)> = BinaryHeap::new();
        for v in 0..n {
            if let Some((gain, _)) = best_move(part, &pw, v) {
                heap.push((gain, std::cmp::Reverse(v)));
            }
        }
        let mut moved = vec![false; n];
        let mut log: Vec<(usize, usize)> = Vec::new();
        let (mut cum, mut best_cum, mut best_len) = (0i64, 0i64, 0usize);
        while let Some((key, std::cmp::Reverse(v))) = heap.pop() {
            if moved[v] {
                continue;
            }
            let Some((gain, dst)) = best_move(part, &pw, v) else { continue };
            if gain != key {
                heap.push((gain, std::cmp::Reverse(v)));
                continue;
            }
            let src = part[v];
            if counts[src] == 1 {
                continue;
            }
            part[v] = dst;
            pw[src] -= g.vwgt[v];
            pw[dst] += g.vwgt[v];
            counts[src] -= 1;
            counts[dst] += 1;
            moved[v] = true;
            log.push((v, src));
            cum += gain;
            if cum > best_cum {
                best_cum = cum;
                best_len = log.len();
            } else if log.len() - best_len > FM_PATIENCE {
                break;
            }
            for &(u, _) in &g.adj[v] {
                if !moved[u] {
                    if let Some((gu, _)) = best_move(part, &pw, u) {
                        heap.push((gu, std::cmp::Reverse(u)));
                    }
                }
            }
        }
        for &(v, src) in log[best_len..].iter().rev() {
            let dst = part[v];
            part[v] = src;
            pw[dst] -= g.vwgt[v];
            pw[src] += g.vwgt[v];
            counts[dst] -= 1;
            counts[src] += 1;
        }
        if best_cum <= 0 {
            break;
        }
    }
}

/// Gives every empty part one vertex taken from the most populous part.
fn ensure_nonempty(g: &WGraph, part: &mut [usize], k: usize) {
    let mut counts = vec![0usize; k];
    for &p in part.iter() {
        counts[p] += 1;
    }
    for empty in 0..k {
        if counts[empty] > 0 {
            continue;
        }
        let donor = (0..k).max_by_key(|&p| (counts[p], std::cmp::Reverse(p))).expect("k > 0");
        // the donor vertex with the fewest ties to its own part
        let v = (0..g.len())
            .filter(|&v| part[v] == donor)
            .min_by_key(|&v| (connectivity(g, part, v).0, v))
            .expect("donor part is nonempty");
        part[v] = empty;
        counts[donor] -= 1;
        counts[empty] += 1;
    }
}

/// Undirected edges whose endpoints sit in different parts.
pub fn edge_cut(g: &UnGraph, part: &[usize]) -> usize {
    g.edges().filter(|&(u, v)| part[u] != part[v]).count()
}
