//! Independent reference implementations used to check the library.
//!
//! These are deliberately naive: dense matrices, Floyd–Warshall, explicit
//! enumeration of triples and pairs. None of them call into `scg`'s
//! algorithms.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use scg::model::{EdgeKind, Location, NodeKind, SemanticCodeGraph, SemanticEdge, SemanticNode};

/// A simple directed graph as an edge set over `0..n`.
#[derive(Debug, Clone)]
pub struct Edges {
    pub n: usize,
    pub set: BTreeSet<(usize, usize)>,
}

impl Edges {
    pub fn adjacency(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for &(u, v) in &self.set {
            a[(u, v)] = 1.0;
        }
        a
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.set.iter().filter(|e| e.0 == u).count()
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Erdős–Rényi style digraph without self-loops.
pub fn random_digraph(r: &mut ChaCha8Rng, n: usize, p: f64) -> Edges {
    let mut set = BTreeSet::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && r.random_bool(p) {
                set.insert((u, v));
            }
        }
    }
    Edges { n, set }
}

/// Random digraph made strongly connected by a random Hamiltonian cycle.
pub fn random_strongly_connected(r: &mut ChaCha8Rng, n: usize, p: f64) -> Edges {
    let mut g = random_digraph(r, n, p);
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, r.random_range(0..=i));
    }
    if n > 1 {
        for i in 0..n {
            g.set.insert((order[i], order[(i + 1) % n]));
        }
    }
    g
}

/// PageRank by solving `(I − d·S) x = (1−d)/n · 1`, with `S` the column
/// stochastic link matrix whose dangling columns are uniform.
pub fn pagerank(g: &Edges, d: f64) -> Vec<f64> {
    let n = g.n;
    let nf = n as f64;
    let mut s = DMatrix::zeros(n, n);
    for u in 0..n {
        let deg = g.out_degree(u);
        for v in 0..n {
            s[(v, u)] = if deg == 0 { 1.0 / nf } else if g.set.contains(&(u, v)) { 1.0 / deg as f64 } else { 0.0 };
        }
    }
    let m = DMatrix::identity(n, n) - s * d;
    let rhs = DVector::from_element(n, (1.0 - d) / nf);
    m.lu().solve(&rhs).expect("I − dS is nonsingular").iter().copied().collect()
}

/// Spectral radius of the adjacency matrix.
pub fn spectral_radius(g: &Edges) -> f64 {
    if g.n == 0 {
        return 0.0;
    }
    g.adjacency().complex_eigenvalues().iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Perron vector of `Aᵀ` (strongly connected graphs only): the null vector of
/// `Aᵀ − ρI` from an SVD, L2-normalized and made positive.
pub fn eigenvector(g: &Edges) -> Vec<f64> {
    let n = g.n;
    let rho = spectral_radius(g);
    let m = g.adjacency().transpose() - DMatrix::identity(n, n) * rho;
    let svd = m.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let (imin, _) = svd.singular_values.iter().enumerate().fold((0, f64::MAX), |acc, (i, &s)| if s < acc.1 { (i, s) } else { acc });
    let mut x: Vec<f64> = vt.row(imin).iter().copied().collect();
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let sign = if x.iter().sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
    x.iter_mut().for_each(|v| *v *= sign / norm);
    x
}

/// Katz by solving `(I − α·Aᵀ) x = β·1`, then L2-normalizing.
pub fn katz(g: &Edges, alpha: f64, beta: f64) -> Vec<f64> {
    let n = g.n;
    let m = DMatrix::identity(n, n) - g.adjacency().transpose() * alpha;
    let x = m.lu().solve(&DVector::from_element(n, beta)).expect("nonsingular for α < 1/ρ");
    let norm = x.norm();
    x.iter().map(|v| v / norm).collect()
}

/// All-pairs hop distances; `None` when unreachable.
pub fn floyd_warshall(g: &Edges) -> Vec<Vec<Option<usize>>> {
    let n = g.n;
    let mut d = vec![vec![None; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = Some(0);
    }
    for &(u, v) in &g.set {
        d[u][v] = Some(1);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|c| a + b < c) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

/// Number of shortest paths between every ordered pair, from the distances.
fn path_counts(g: &Edges, d: &[Vec<Option<usize>>]) -> Vec<Vec<f64>> {
    let n = g.n;
    let mut sigma = vec![vec![0.0; n]; n];
    for s in 0..n {
        let mut by_dist: Vec<usize> = (0..n).filter(|&t| d[s][t].is_some()).collect();
        by_dist.sort_by_key(|&t| d[s][t]);
        sigma[s][s] = 1.0;
        for &t in by_dist.iter().skip(1) {
            let dt = d[s][t].unwrap();
            sigma[s][t] = (0..n)
                .filter(|&u| g.set.contains(&(u, t)) && d[s][u] == Some(dt - 1))
                .map(|u| sigma[s][u])
                .sum();
        }
    }
    sigma
}

/// Unnormalized directed betweenness from the pair-dependency definition.
pub fn betweenness(g: &Edges) -> Vec<f64> {
    let n = g.n;
    let d = floyd_warshall(g);
    let sigma = path_counts(g, &d);
    let mut bc = vec![0.0; n];
    for s in 0..n {
        for t in 0..n {
            let Some(dst) = d[s][t] else { continue };
            if s == t {
                continue;
            }
            for (v, b) in bc.iter_mut().enumerate() {
                if v == s || v == t {
                    continue;
                }
                if let (Some(a), Some(c)) = (d[s][v], d[v][t]) {
                    if a + c == dst {
                        *b += sigma[s][v] * sigma[v][t] / sigma[s][t];
                    }
                }
            }
        }
    }
    bc
}

/// Σ 1/d(u, v) over reachable v ≠ u, divided by n − 1.
pub fn harmonic(g: &Edges) -> Vec<f64> {
    let n = g.n;
    if n < 2 {
        return vec![0.0; n];
    }
    let d = floyd_warshall(g);
    (0..n)
        .map(|u| (0..n).filter(|&v| v != u).filter_map(|v| d[u][v]).map(|x| 1.0 / x as f64).sum::<f64>() / (n - 1) as f64)
        .collect()
}

/// Undirected simple edge set of a digraph.
pub fn undirected(g: &Edges) -> BTreeSet<(usize, usize)> {
    g.set.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect()
}

pub fn density(g: &Edges) -> f64 {
    if g.n < 2 {
        0.0
    } else {
        g.set.len() as f64 / (g.n * (g.n - 1)) as f64
    }
}

/// 3·triangles / connected triples by enumerating every node triple.
pub fn transitivity(n: usize, und: &BTreeSet<(usize, usize)>) -> f64 {
    let mut m = vec![vec![false; n]; n];
    for &(a, b) in und {
        m[a][b] = true;
        m[b][a] = true;
    }
    let adj = |a: usize, b: usize| m[a][b];
    let mut closed = 0u64;
    let mut triples = 0u64;
    for c in 0..n {
        for a in 0..n {
            for b in (a + 1)..n {
                if a != c && b != c && adj(a, c) && adj(b, c) {
                    triples += 1;
                    if adj(a, b) {
                        closed += 1;
                    }
                }
            }
        }
    }
    // each triangle is closed once per centre, i.e. three times
    if triples == 0 {
        0.0
    } else {
        closed as f64 / triples as f64
    }
}

/// Pearson correlation over the list of (deg u, deg v) for both edge
/// orientations, computed with a two-pass formula.
pub fn assortativity(n: usize, und: &BTreeSet<(usize, usize)>) -> Option<f64> {
    let mut deg = vec![0.0; n];
    for &(u, v) in und {
        deg[u] += 1.0;
        deg[v] += 1.0;
    }
    let pairs: Vec<(f64, f64)> = und.iter().flat_map(|&(u, v)| [(deg[u], deg[v]), (deg[v], deg[u])]).collect();
    if pairs.is_empty() {
        return None;
    }
    let m = pairs.len() as f64;
    let mx = pairs.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pairs.iter().map(|p| p.1).sum::<f64>() / m;
    let cov = pairs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>();
    let vx = pairs.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    let vy = pairs.iter().map(|p| (p.1 - my).powi(2)).sum::<f64>();
    if vx < 1e-9 || vy < 1e-9 {
        return None;
    }
    Some(cov / (vx * vy).sqrt())
}

/// Squared coefficient of variation of part sizes.
pub fn squared_cv(sizes: &[f64]) -> f64 {
    let k = sizes.len() as f64;
    let mean = sizes.iter().sum::<f64>() / k;
    let var = sizes.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / k;
    var / (mean * mean)
}

/// Brute-force recomputation of every partition quality measure.
#[derive(Debug, Clone)]
pub struct Quality {
    pub modularity_ratio: f64,
    pub avg_clustering: f64,
    pub file_weighted: f64,
    pub file_average: f64,
    pub package_weighted: f64,
    pub package_average: f64,
    pub variance: f64,
    pub internal: usize,
    pub cut: usize,
}

fn unit_accuracy(units: &BTreeMap<String, Vec<usize>>) -> (f64, f64) {
    if units.is_empty() {
        return (100.0, 100.0);
    }
    let mut hit = 0usize;
    let mut total = 0usize;
    let mut avg = 0.0;
    for parts in units.values() {
        let best = parts.iter().map(|p| parts.iter().filter(|q| *q == p).count()).max().unwrap();
        hit += best;
        total += parts.len();
        avg += best as f64 / parts.len() as f64;
    }
    (100.0 * hit as f64 / total as f64, 100.0 * avg / units.len() as f64)
}

pub fn quality(graph: &SemanticCodeGraph, assignment: &BTreeMap<String, usize>, k: usize) -> Quality {
    let ids: Vec<&String> = assignment.keys().collect();
    let index: HashMap<&str, usize> = ids.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let mut und = BTreeSet::new();
    for e in graph.edges() {
        if let (Some(&a), Some(&b)) = (index.get(e.from.as_str()), index.get(e.to.as_str())) {
            if a != b {
                und.insert((a.min(b), a.max(b)));
            }
        }
    }
    let part: Vec<usize> = ids.iter().map(|id| assignment[*id]).collect();
    let internal = und.iter().filter(|(a, b)| part[*a] == part[*b]).count();
    let cut = und.len() - internal;
    let modularity_ratio = if cut == 0 { f64::INFINITY } else { internal as f64 / cut as f64 };

    let mut clustering = 0.0;
    for p in 0..k {
        let members: Vec<usize> = (0..ids.len()).filter(|&v| part[v] == p).collect();
        let local: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let sub: BTreeSet<(usize, usize)> = und
            .iter()
            .filter_map(|(a, b)| Some((*local.get(a)?, *local.get(b)?)))
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        clustering += transitivity(members.len(), &sub);
    }

    let mut files: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    let mut packages: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (id, &p) in assignment {
        let node = graph.node(id).unwrap();
        if node.location.is_some() {
            files.entry(node.file_uri.clone()).or_default().push(p);
            packages.entry(node.package_name.clone()).or_default().push(p);
        }
    }
    let (file_weighted, file_average) = unit_accuracy(&files);
    let (package_weighted, package_average) = unit_accuracy(&packages);
    let sizes: Vec<f64> = (0..k).map(|p| part.iter().filter(|&&q| q == p).count() as f64).collect();
    Quality {
        modularity_ratio,
        avg_clustering: clustering / k as f64,
        file_weighted,
        file_average,
        package_weighted,
        package_average,
        variance: squared_cv(&sizes),
        internal,
        cut,
    }
}

/// A code graph over random files and packages, with some external stubs.
pub fn random_code_graph(r: &mut ChaCha8Rng, n: usize, p: f64) -> SemanticCodeGraph {
    let mut g = SemanticCodeGraph::new("random");
    let files = 1 + n / 8;
    let mut ids = Vec::new();
    for i in 0..n {
        let id = format!("n{i:03}");
        if r.random_bool(0.15) {
            g.ensure_stub(&id, NodeKind::Class);
        } else {
            let f = r.random_range(0..files);
            let pkg = format!("p{}", f % 3);
            let loc = Location::new(i as u32, 0, i as u32 + r.random_range(0..5), 1);
            g.insert_node(SemanticNode::located(&id, NodeKind::Method, &id, pkg, format!("F{f}.java"), loc)).unwrap();
        }
        ids.push(id);
    }
    for a in &ids {
        for b in &ids {
            if a != b && r.random_bool(p) {
                g.insert_edge(SemanticEdge::new(a.clone(), b.clone(), EdgeKind::Call));
            }
        }
    }
    g
}

/// Two K10 cliques `a0..a9`, `b0..b9` joined by the single edge a0–b0.
pub fn two_cliques() -> SemanticCodeGraph {
    let mut g = SemanticCodeGraph::new("cliques");
    for side in ["a", "b"] {
        for i in 0..10 {
            let id = format!("{side}{i}");
            let loc = Location::new(i, 0, i, 1);
            g.insert_node(SemanticNode::located(&id, NodeKind::Method, &id, side, format!("{side}.java"), loc)).unwrap();
        }
        for i in 0..10 {
            for j in (i + 1)..10 {
                g.insert_edge(SemanticEdge::new(format!("{side}{i}"), format!("{side}{j}"), EdgeKind::Call));
            }
        }
    }
    g.insert_edge(SemanticEdge::new("a0", "b0", EdgeKind::Call));
    g
}

/// Clustered synthetic code graph: `groups` dense clusters of related
/// methods with sparse links between clusters.
pub fn clustered_graph(r: &mut ChaCha8Rng, n: usize, groups: usize) -> SemanticCodeGraph {
    let mut g = SemanticCodeGraph::new("synthetic");
    let group_of = |i: usize| i * groups / n;
    for i in 0..n {
        let id = format!("m{i:05}");
        let grp = group_of(i);
        let loc = Location::new(i as u32, 0, i as u32 + 3, 1);
        g.insert_node(SemanticNode::located(&id, NodeKind::Method, &id, format!("pkg{grp}"), format!("G{grp}.java"), loc))
            .unwrap();
    }
    for i in 0..n {
        for _ in 0..4 {
            let j = if r.random_bool(0.9) {
                let grp = group_of(i);
                r.random_range((grp * n).div_ceil(groups)..((grp + 1) * n).div_ceil(groups))
            } else {
                r.random_range(0..n)
            };
            if i != j {
                g.insert_edge(SemanticEdge::new(format!("m{i:05}"), format!("m{j:05}"), EdgeKind::Call));
            }
        }
    }
    g
}

/// Published commons-io partition rows: distribution percentages and the
/// variance printed next to them.
pub const COMMONS_IO_PARTITIONS: [(&[f64], f64); 18] = [
    (&[4.0, 95.0], 0.844),
    (&[42.0, 57.0], 0.024),
    (&[15.0, 19.0, 64.0], 0.450),
    (&[25.0, 37.0, 37.0], 0.026),
    (&[11.0, 26.0, 12.0, 49.0], 0.372),
    (&[20.0, 21.0, 23.0, 34.0], 0.047),
    (&[4.0, 9.0, 10.0, 38.0, 37.0], 0.547),
    (&[16.0, 16.0, 15.0, 21.0, 28.0], 0.059),
    (&[1.0, 28.0, 22.0, 2.0, 22.0, 23.0], 0.412),
    (&[12.0, 14.0, 18.0, 13.0, 18.0, 22.0], 0.044),
    (&[5.0, 10.0, 26.0, 12.0, 10.0, 15.0, 18.0], 0.186),
    (&[10.0, 15.0, 11.0, 14.0, 12.0, 15.0, 19.0], 0.038),
    (&[12.0, 10.0, 10.0, 14.0, 11.0, 12.0, 9.0, 17.0], 0.038),
    (&[9.0, 11.0, 10.0, 13.0, 13.0, 15.0, 11.0, 14.0], 0.027),
    (&[7.0, 20.0, 11.0, 5.0, 8.0, 7.0, 6.0, 19.0, 13.0], 0.224),
    (&[10.0, 10.0, 10.0, 10.0, 11.0, 9.0, 10.0, 15.0, 12.0], 0.022),
    (&[11.0, 4.0, 3.0, 7.0, 16.0, 11.0, 9.0, 12.0, 11.0, 11.0], 0.142),
    (&[9.0, 9.0, 7.0, 9.0, 11.0, 9.0, 11.0, 8.0, 12.0, 10.0], 0.021),
];

/// Published commons-io top-3 lists for the eight base metrics, in
/// `Metric::BASE` order.
pub const COMMONS_IO_TOP3: [[&str; 3]; 8] = [
    ["o.a.c.i.IOUtils", "o.a.c.i.FileUtils", "o.a.c.i.file.PathUtils"],
    ["o.a.c.i.FileUtils", "o.a.c.i.IOUtils", "o.a.c.i.file.PathUtils"],
    ["o.a.c.i.filefilter.IOFileFilter", "o.a.c.i.CloseableURLConnection?urlConnection", "o.a.c.i.function.IOBaseStream.unwrap()"],
    ["o.a.c.i.filefilter.IOFileFilter", "o.a.c.i.output.NullPrintStream", "o.a.c.i.output.NullPrintStream.NullPrintStream()"],
    ["o.a.c.i.function.IOBaseStream.unwrap()", "o.a.c.i.input.Tailer", "o.a.c.i.function.IOStream.T"],
    ["o.a.c.i.filefilter.IOFileFilter", "o.a.c.i.CloseableURLConnection?urlConnection", "o.a.c.i.function.IOBaseStream.unwrap()"],
    ["o.a.c.i.function.IOStreams.forAll()", "o.a.c.i.function.IOConsumer", "o.a.c.i.function.IOStream.adapt()"],
    ["o.a.c.i.FileUtils", "o.a.c.i.IOUtils", "o.a.c.i.FileUtils.FileUtils()"],
];

/// Scores in the same layout, used to feed rankings.
pub const COMMONS_IO_TOP3_SCORES: [[f64; 3]; 8] = [
    [3608.0, 3434.0, 1682.0],
    [176.0, 171.0, 106.0],
    [131.0, 47.0, 46.0],
    [0.013, 0.011, 0.006],
    [0.307, 0.272, 0.201],
    [2.340, 1.476, 1.467],
    [301648.755, 299069.829, 272351.667],
    [0.092, 0.070, 0.064],
];
