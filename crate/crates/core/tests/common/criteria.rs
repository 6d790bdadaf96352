//! The release checks, one function per criterion. Each returns a short
//! detail line on success and the reason on failure. The `acceptance`
//! target prints them; the other integration targets assert them.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use rand::Rng;

use scg::centrality::{self, EigenvectorConfig, KatzConfig, PageRankConfig};
use scg::crucial::{combined_importance, Metric, MetricRanking};
use scg::digraph::DiGraph;
use scg::export::{self, report, GraphFormat};
use scg::partition::{self, Algorithm, PartitionConfig};
use scg::{EdgeKind, Location, NodeKind, SemanticCodeGraph, SemanticEdge, SemanticNode};

use super::formats::{reparse_dot, shape, validate_graphml};
use super::oracles::{self, Edges};
use super::{diff, edge_set, fixture, load_expected, node_set};

pub type Outcome = Result<String, String>;

fn within_budget(name: &str, started: Instant, budget: Duration) -> Result<Duration, String> {
    let took = started.elapsed();
    if took > budget {
        return Err(format!("{name} took {took:.2?}, budget {budget:?}"));
    }
    Ok(took)
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn digraph(g: &Edges) -> DiGraph {
    DiGraph::from_edges(g.n, g.set.iter().copied())
}

// ---- variance ----

pub fn variance_reproduction() -> Outcome {
    let started = Instant::now();
    let mut worst = 0.0f64;
    for (dist, printed) in oracles::COMMONS_IO_PARTITIONS {
        let v = partition::partition_variance(dist);
        let reference = oracles::squared_cv(dist);
        if (v - reference).abs() > 1e-12 {
            return Err(format!("{dist:?}: library {v} disagrees with reference {reference}"));
        }
        let err = (v - printed).abs();
        if err > 0.03 {
            return Err(format!("{dist:?}: {v:.4} vs printed {printed} (off by {err:.4})"));
        }
        worst = worst.max(err);
    }
    let took = within_budget("variance", started, Duration::from_secs(1))?;
    Ok(format!("18/18 rows within 0.03 (worst {worst:.4}) in {took:.2?}"))
}

// ---- combined importance ----

pub fn combined_importance_reproduction() -> Outcome {
    let started = Instant::now();
    let base: Vec<MetricRanking> = Metric::BASE
        .iter()
        .zip(oracles::COMMONS_IO_TOP3.iter().zip(oracles::COMMONS_IO_TOP3_SCORES.iter()))
        .map(|(&m, (ids, scores))| MetricRanking::top(m, ids.iter().map(|s| s.to_string()).zip(scores.iter().copied()), 3))
        .collect();
    let combined = combined_importance(&base, 3);
    let got: BTreeMap<&str, f64> = combined.entries.iter().map(|e| (e.id.as_str(), e.score)).collect();
    let want: BTreeMap<&str, f64> =
        [("o.a.c.i.FileUtils", 3.0), ("o.a.c.i.IOUtils", 3.0), ("o.a.c.i.filefilter.IOFileFilter", 3.0)].into();
    if got != want {
        return Err(format!("combined top-3 {got:?}, expected {want:?}"));
    }
    let took = within_budget("combined importance", started, Duration::from_secs(1))?;
    Ok(format!("top-3 = FileUtils, IOUtils, IOFileFilter with 3 each in {took:.2?}"))
}

// ---- centrality ----

pub const CENTRALITY_GRAPHS: usize = 240;

/// Compares every centrality with its oracle on one graph; returns the
/// worst deviation per measure.
pub fn centrality_case(g: &Edges, strongly_connected: bool) -> Result<[f64; 5], String> {
    let dg = digraph(g);
    // the default 100-iteration cap can stop just short of the 1e-8 L1
    // threshold; accuracy against the exact solve is what is checked
    let pr = centrality::pagerank(&dg, &PageRankConfig::default());
    let dpr = max_abs_diff(&pr.values, &oracles::pagerank(g, 0.85));

    let katz = centrality::katz(&dg, &KatzConfig::default());
    if !katz.scores.converged {
        return Err("katz did not converge".into());
    }
    let dkatz = if g.n == 0 { 0.0 } else { max_abs_diff(&katz.scores.values, &oracles::katz(g, katz.alpha, 1.0)) };

    let deig = if strongly_connected && g.n > 1 {
        let ev = centrality::eigenvector(&dg, &EigenvectorConfig::default());
        if !ev.converged {
            return Err("eigenvector did not converge".into());
        }
        max_abs_diff(&ev.values, &oracles::eigenvector(g))
    } else {
        0.0
    };

    let dbc = max_abs_diff(&centrality::betweenness(&dg).values, &oracles::betweenness(g));
    let dhc = max_abs_diff(&centrality::harmonic(&dg).values, &oracles::harmonic(g));
    Ok([dpr, deig, dkatz, dbc, dhc])
}

pub fn centrality_suite(seed: u64) -> Outcome {
    let started = Instant::now();
    let mut r = oracles::rng(seed);
    let mut worst = [0.0f64; 5];
    let mut eig_checked = 0;
    for i in 0..CENTRALITY_GRAPHS {
        let n = r.random_range(1..=60);
        let p = r.random_range(0.01..0.25);
        let strongly = i % 2 == 1;
        let g = if strongly { oracles::random_strongly_connected(&mut r, n, p) } else { oracles::random_digraph(&mut r, n, p) };
        let d = centrality_case(&g, strongly).map_err(|e| format!("graph {i} (n={n}): {e}"))?;
        let names = ["pagerank", "eigenvector", "katz", "betweenness", "harmonic"];
        let tol = [1e-6, 1e-6, 1e-6, 1e-6, 1e-9];
        for j in 0..5 {
            if d[j] > tol[j] || d[j].is_nan() {
                return Err(format!("graph {i} (n={n}, p={p:.3}): {} off by {:e}", names[j], d[j]));
            }
            worst[j] = worst[j].max(d[j]);
        }
        if strongly && n > 1 {
            eig_checked += 1;
        }
    }
    let took = within_budget("centrality suite", started, Duration::from_secs(60))?;
    Ok(format!(
        "{CENTRALITY_GRAPHS} graphs ({eig_checked} strongly connected for eigenvector); worst pr {:.1e}, eig {:.1e}, katz {:.1e}, bc {:.1e}, hc {:.1e} in {took:.2?}",
        worst[0], worst[1], worst[2], worst[3], worst[4]
    ))
}

// ---- summary ----

/// Builds a code graph with one METHOD node per vertex so the same
/// structure can be fed through `summarize`.
pub fn as_code_graph(g: &Edges) -> SemanticCodeGraph {
    let mut scg = SemanticCodeGraph::new("oracle");
    let id = |v: usize| format!("v{v:04}");
    for v in 0..g.n {
        let loc = Location::new(v as u32, 0, v as u32, 1);
        scg.insert_node(SemanticNode::located(id(v), NodeKind::Method, id(v), "p", "P.java", loc)).unwrap();
    }
    for &(u, v) in &g.set {
        scg.insert_edge(SemanticEdge::new(id(u), id(v), EdgeKind::Call));
    }
    scg
}

pub fn summary_suite(seed: u64) -> Outcome {
    let started = Instant::now();
    let mut r = oracles::rng(seed);
    let cases = 60;
    let mut worst = 0.0f64;
    let mut undefined = 0;
    for i in 0..cases {
        let n = if i < 4 { i } else { r.random_range(2..=200) };
        let p = r.random_range(0.0..0.12);
        let g = oracles::random_digraph(&mut r, n, p);
        let stats = scg::summary::summarize(&as_code_graph(&g));
        let und = oracles::undirected(&g);
        let checks = [
            ("density", stats.density, oracles::density(&g)),
            ("transitivity", stats.global_clustering_coefficient, oracles::transitivity(n, &und)),
            ("avg degree", stats.avg_in_degree, if n == 0 { 0.0 } else { g.set.len() as f64 / n as f64 }),
        ];
        for (name, got, want) in checks {
            let d = (got - want).abs();
            if d > 1e-9 || got.is_nan() {
                return Err(format!("case {i} (n={n}): {name} {got} vs {want}"));
            }
            worst = worst.max(d);
        }
        match (stats.degree_assortativity, oracles::assortativity(n, &und)) {
            (Some(a), Some(b)) => {
                let d = (a - b).abs();
                if d > 1e-9 {
                    return Err(format!("case {i} (n={n}): assortativity {a} vs {b}"));
                }
                worst = worst.max(d);
            }
            (None, None) => undefined += 1,
            (a, b) => return Err(format!("case {i} (n={n}): assortativity {a:?} vs {b:?}")),
        }
    }
    let took = within_budget("summary suite", started, Duration::from_secs(30))?;
    Ok(format!("{cases} graphs, worst deviation {worst:.1e} ({undefined} with undefined assortativity) in {took:.2?}"))
}

// ---- partitioning ----

fn quality_matches(
    graph: &SemanticCodeGraph,
    assignment: &BTreeMap<String, usize>,
    k: usize,
) -> Result<f64, String> {
    let got = partition::score_partition(graph, assignment, k);
    let want = oracles::quality(graph, assignment, k);
    if (got.internal_edges, got.cut_edges) != (want.internal, want.cut) {
        return Err(format!("edge counts {:?} vs {:?}", (got.internal_edges, got.cut_edges), (want.internal, want.cut)));
    }
    let pairs = [
        ("modularity", got.modularity_ratio, want.modularity_ratio),
        ("clustering", got.avg_clustering_coefficient, want.avg_clustering),
        ("file weighted", got.file_weighted_accuracy, want.file_weighted),
        ("file average", got.file_average_accuracy, want.file_average),
        ("package weighted", got.package_weighted_accuracy, want.package_weighted),
        ("package average", got.package_average_accuracy, want.package_average),
        ("variance", got.partition_variance, want.variance),
    ];
    let mut worst = 0.0f64;
    for (name, a, b) in pairs {
        if a.is_infinite() || b.is_infinite() {
            if a != b {
                return Err(format!("{name}: {a} vs {b}"));
            }
            continue;
        }
        let d = (a - b).abs();
        if d > 1e-9 || a.is_nan() {
            return Err(format!("{name}: {a} vs {b}"));
        }
        worst = worst.max(d);
    }
    Ok(worst)
}

pub fn bridge_fixture() -> Result<(), String> {
    let g = oracles::two_cliques();
    for alg in Algorithm::ALL {
        let res = partition::partition(&g, 2, alg, &PartitionConfig::default()).map_err(|e| e.to_string())?;
        if res.cut != 1 {
            return Err(format!("{alg}: cut {} on the bridged cliques", res.cut));
        }
        let side = |prefix: &str| -> BTreeSet<usize> {
            res.assignment.iter().filter(|(id, _)| id.starts_with(prefix)).map(|(_, &p)| p).collect()
        };
        let (a, b) = (side("a"), side("b"));
        if a.len() != 1 || b.len() != 1 || a == b {
            return Err(format!("{alg}: assignment not clique-aligned: a→{a:?}, b→{b:?}"));
        }
    }
    Ok(())
}

pub fn quality_scorer(seed: u64, cases: usize) -> Result<f64, String> {
    let mut r = oracles::rng(seed);
    let mut worst = 0.0f64;
    for i in 0..cases {
        let n = r.random_range(2..=100);
        let k = r.random_range(2..=5usize.min(n));
        let p = r.random_range(0.0..0.15);
        let g = oracles::random_code_graph(&mut r, n, p);
        // alternate between arbitrary assignments and the partitioner's own
        let assignment: BTreeMap<String, usize> = if i % 2 == 0 {
            g.nodes().map(|node| (node.id.clone(), r.random_range(0..k))).collect()
        } else {
            partition::partition(&g, k, Algorithm::MlvFm, &PartitionConfig { seed: i as u64, ..Default::default() })
                .map_err(|e| e.to_string())?
                .assignment
        };
        worst = worst.max(quality_matches(&g, &assignment, k).map_err(|e| format!("case {i} (n={n}, k={k}): {e}"))?);
    }
    Ok(worst)
}

pub fn sweep_2000(seed: u64) -> Result<Duration, String> {
    let mut r = oracles::rng(seed);
    let g = oracles::clustered_graph(&mut r, 2000, 10);
    let started = Instant::now();
    let results = partition::partition_sweep(&g, 10, &PartitionConfig::default()).map_err(|e| e.to_string())?;
    let took = within_budget("2000-node sweep", started, Duration::from_secs(10))?;
    if results.len() != 18 {
        return Err(format!("sweep produced {} results, expected 18", results.len()));
    }
    for res in &results {
        if res.assignment.len() != 2000 || res.assignment.values().any(|&p| p >= res.k) {
            return Err(format!("{} k={}: incomplete or out-of-range assignment", res.algorithm, res.k));
        }
    }
    Ok(took)
}

pub fn partitioner_sanity(seed: u64) -> Outcome {
    bridge_fixture()?;
    let worst = quality_scorer(seed, 60)?;
    let took = sweep_2000(seed)?;
    Ok(format!("bridge cut 1 and clique-aligned; scorer worst {worst:.1e} over 60 cases; sweep 2..10 on 2000 nodes in {took:.2?}"))
}

// ---- extractor ----

/// Environment variable naming a commons-io checkout for the optional
/// real-project check.
pub const COMMONS_IO_ENV: &str = "SCG_COMMONS_IO";

pub fn corpus_exact() -> Result<usize, String> {
    let exp = load_expected();
    let (g, report) = scg::java::extract_project(&fixture("corpus")).map_err(|e| e.to_string())?;
    if (report.files_parsed, report.files_failed) != (exp.parsed, exp.failed) {
        return Err(format!("parsed {} failed {}, expected {} / {}", report.files_parsed, report.files_failed, exp.parsed, exp.failed));
    }
    let mut problems = diff("node", &exp.nodes, &node_set(&g));
    problems.extend(diff("edge", &exp.edges, &edge_set(&g)));
    if !problems.is_empty() {
        return Err(format!("{} differences, first: {}", problems.len(), problems[0]));
    }
    Ok(report.files_parsed + report.files_failed)
}

/// Shape check on a real commons-io tree: METHOD is the most numerous kind
/// apart from variables and parameters, and IOFileFilter is among the
/// three nodes with the highest in-degree.
pub fn commons_io_shape(root: &Path) -> Result<String, String> {
    let (g, report) = scg::java::extract_project(root).map_err(|e| e.to_string())?;
    let mut kinds: BTreeMap<&str, usize> = BTreeMap::new();
    for n in g.nodes() {
        *kinds.entry(n.kind.as_str()).or_default() += 1;
    }
    let top_kind = kinds
        .iter()
        .filter(|(k, _)| !matches!(**k, "LOCAL_VARIABLE" | "PARAMETER" | "VALUE" | "VARIABLE"))
        .max_by_key(|(_, c)| **c)
        .map(|(k, _)| *k);
    if top_kind != Some("METHOD") {
        return Err(format!("most numerous non-variable kind is {top_kind:?}: {kinds:?}"));
    }
    let report_c = scg::crucial::crucial(&g, 3, &Default::default());
    let indeg = report_c.ranking(Metric::InDegree).ok_or("no in-degree ranking")?;
    if !indeg.entries.iter().any(|e| e.id.ends_with("filefilter.IOFileFilter")) {
        let ids: Vec<&str> = indeg.entries.iter().map(|e| e.id.as_str()).collect();
        return Err(format!("IOFileFilter not in the in-degree top-3: {ids:?}"));
    }
    Ok(format!("commons-io: {} files, METHOD leads, IOFileFilter in in-degree top-3", report.files_parsed))
}

pub fn extractor_corpus() -> Outcome {
    let files = corpus_exact()?;
    let real = match std::env::var_os(COMMONS_IO_ENV) {
        Some(dir) => commons_io_shape(Path::new(&dir))?,
        None => format!("commons-io check not run (set {COMMONS_IO_ENV} to a checkout)"),
    };
    Ok(format!("{files}-file corpus matches exactly; {real}"))
}

// ---- formats ----

pub fn three_node_fixture() -> SemanticCodeGraph {
    let mut g = SemanticCodeGraph::new("three");
    let loc = Location::new(0, 0, 4, 1);
    g.insert_node(SemanticNode::located("A.java", NodeKind::File, "A.java", "", "A.java", loc)).unwrap();
    g.insert_node(SemanticNode::located("A", NodeKind::Class, "A", "", "A.java", loc)).unwrap();
    g.insert_node(SemanticNode::located("A.m().", NodeKind::Method, "m", "", "A.java", Location::new(1, 2, 1, 16)))
        .unwrap();
    g.insert_edge(SemanticEdge::new("A.java", "A", EdgeKind::Declaration));
    g.insert_edge(SemanticEdge::new("A", "A.m().", EdgeKind::Declaration));
    g
}

fn corpus_graph() -> Result<SemanticCodeGraph, String> {
    Ok(scg::java::extract_project(&fixture("corpus")).map_err(|e| e.to_string())?.0)
}

fn dir_bytes(dir: &Path) -> Result<BTreeMap<String, Vec<u8>>, String> {
    let mut out = BTreeMap::new();
    for entry in walk_files(dir)? {
        let rel = entry.strip_prefix(dir).unwrap().to_string_lossy().replace('\\', "/");
        out.insert(rel, std::fs::read(&entry).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

/// Regular files under `dir`, sorted.
pub fn walk_files(dir: &Path) -> Result<Vec<std::path::PathBuf>, String> {
    let mut files = Vec::new();
    for entry in walkdir::WalkDir::new(dir).sort_by_file_name() {
        let entry = entry.map_err(|e| e.to_string())?;
        if entry.file_type().is_file() {
            files.push(entry.into_path());
        }
    }
    Ok(files)
}

pub fn save_load_determinism(g: &SemanticCodeGraph) -> Result<usize, String> {
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    scg::store::save_graph(g, a.path()).map_err(|e| e.to_string())?;
    let loaded = scg::store::load_graph(a.path()).map_err(|e| e.to_string())?;
    if node_set(&loaded) != node_set(g) || edge_set(&loaded) != edge_set(g) {
        return Err("load(save(g)) differs from g".into());
    }
    for (x, y) in g.nodes().zip(loaded.nodes()) {
        if x != y {
            return Err(format!("node {} changed: {x:?} vs {y:?}", x.id));
        }
    }
    // the reloaded graph must serialize to the same bytes
    scg::store::save_graph(&loaded, b.path()).map_err(|e| e.to_string())?;
    let (ba, bb) = (dir_bytes(a.path())?, dir_bytes(b.path())?);
    if ba != bb {
        return Err("save(load(save(g))) is not byte-identical to save(g)".into());
    }
    Ok(ba.len())
}

pub fn graphml_valid(g: &SemanticCodeGraph) -> Result<(), String> {
    let columns = export::partition_columns(&[]);
    let text = GraphFormat::Graphml.render(g, &columns);
    let reloaded = validate_graphml(&text)?;
    let (nodes, edges) = shape(&reloaded, "type");
    let want_nodes: BTreeSet<String> = g.nodes().map(|n| n.id.clone()).collect();
    let want_edges: BTreeSet<(String, String, String)> =
        g.edges().iter().map(|e| (e.from.clone(), e.to.clone(), e.kind.as_str().to_string())).collect();
    if nodes != want_nodes || edges != want_edges || reloaded.edges.len() != g.edge_count() {
        return Err(format!("GraphML reload: {} nodes / {} edges, expected {} / {}", nodes.len(), edges.len(), want_nodes.len(), g.edge_count()));
    }
    Ok(())
}

pub fn dot_reparses(g: &SemanticCodeGraph) -> Result<(), String> {
    let text = GraphFormat::Dot.render(g, &[]);
    let reloaded = reparse_dot(&text)?;
    let (nodes, edges) = shape(&reloaded, "type");
    let want_nodes: BTreeSet<String> = g.nodes().map(|n| n.id.clone()).collect();
    let want_edges: BTreeSet<(String, String, String)> =
        g.edges().iter().map(|e| (e.from.clone(), e.to.clone(), e.kind.as_str().to_string())).collect();
    if nodes != want_nodes || edges != want_edges {
        return Err(format!("DOT reparse: {} nodes / {} edges, expected {} / {}", nodes.len(), edges.len(), want_nodes.len(), want_edges.len()));
    }
    for n in g.nodes() {
        let attrs = &reloaded.nodes[&n.id];
        if attrs.get("kind").map(String::as_str) != Some(n.kind.as_str()) || attrs.get("loc") != Some(&n.loc.to_string()) {
            return Err(format!("DOT attributes of {} lost: {attrs:?}", n.id));
        }
    }
    Ok(())
}

/// Parses a partition CSV and checks it lists exactly the assigned nodes.
pub fn csv_matches(text: &str, assignment: &BTreeMap<String, usize>) -> Result<usize, String> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| e.to_string())?.clone();
    if headers.iter().collect::<Vec<_>>() != ["id", "npart"] {
        return Err(format!("unexpected header {headers:?}"));
    }
    let mut rows = BTreeMap::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        let part: usize = rec[1].parse().map_err(|e| format!("npart `{}`: {e}", &rec[1]))?;
        if rows.insert(rec[0].to_string(), part).is_some() {
            return Err(format!("duplicate row for {}", &rec[0]));
        }
    }
    if &rows != assignment {
        return Err(format!("{} rows, {} assigned nodes", rows.len(), assignment.len()));
    }
    Ok(rows.len())
}

pub fn format_roundtrips() -> Outcome {
    let started = Instant::now();
    let corpus = corpus_graph()?;
    let three = three_node_fixture();
    let files = save_load_determinism(&corpus)?;
    save_load_determinism(&three)?;

    let text = GraphFormat::Graphml.render(&three, &[]);
    let r = validate_graphml(&text)?;
    if (r.nodes.len(), r.edges.len()) != (3, 2) {
        return Err(format!("three-node GraphML reloads as {} / {}", r.nodes.len(), r.edges.len()));
    }
    graphml_valid(&corpus)?;
    dot_reparses(&corpus)?;
    dot_reparses(&three)?;

    let mut rows = 0;
    let results = partition::partition_sweep(&corpus, 4, &PartitionConfig::default()).map_err(|e| e.to_string())?;
    for res in &results {
        rows += csv_matches(&report::partition_csv(res), &res.assignment)?;
    }
    let took = within_budget("format round-trips", started, Duration::from_secs(10))?;
    Ok(format!(
        "{files} record files byte-stable; GraphML valid (3/2 fixture, corpus); DOT reparsed; {} partition CSVs, {rows} rows, all match in {took:.2?}",
        results.len()
    ))
}

// ---- CLI ----

pub const HELP_COMMANDS: [(&str, &str); 6] = [
    ("help", "Display help information about the specified command."),
    ("crucial", "Find crucial code entities."),
    ("generate", "Generate SCG metadata."),
    ("partition", "Suggest project partitioning."),
    ("summary", "Summarize the project."),
    ("export", "Export SCG metadata to various output formats."),
];

pub fn cli(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scg-cli"))
        .args(args)
        .current_dir(cwd)
        .env_remove(scg::cli::SEED_ENV)
        .env("RUST_LOG", "off")
        .output()
        .expect("scg-cli runs")
}

/// Command name and description pairs from the `Commands:` block of help.
pub fn help_listing(text: &str) -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = Vec::new();
    for line in text.lines().skip_while(|l| l.trim() != "Commands:").skip(1) {
        if line.trim().is_empty() {
            break;
        }
        let trimmed = line.trim_start();
        let indent = line.len() - trimmed.len();
        match trimmed.split_once(char::is_whitespace) {
            Some((name, desc)) if indent <= 2 => out.push((name.to_string(), desc.trim().to_string())),
            _ => {
                // wrapped continuation of the previous description
                if let Some(last) = out.last_mut() {
                    last.1 = format!("{} {}", last.1, trimmed);
                }
            }
        }
    }
    out
}

/// Copies the fixture corpus into a fresh workspace.
pub fn corpus_workspace() -> Result<tempfile::TempDir, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let src = fixture("corpus");
    for file in walk_files(&src)? {
        let dest = dir.path().join(file.strip_prefix(&src).unwrap());
        std::fs::create_dir_all(dest.parent().unwrap()).map_err(|e| e.to_string())?;
        std::fs::copy(&file, &dest).map_err(|e| e.to_string())?;
    }
    Ok(dir)
}

fn expect_code(out: &Output, code: i32, what: &str) -> Result<(), String> {
    if out.status.code() != Some(code) {
        return Err(format!(
            "{what}: exit {:?}, expected {code}; stderr: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr).trim()
        ));
    }
    Ok(())
}

pub fn cli_contract() -> Outcome {
    let started = Instant::now();
    let scratch = tempfile::tempdir().map_err(|e| e.to_string())?;
    let here = scratch.path();

    let help = cli(&["help"], here);
    expect_code(&help, 0, "help")?;
    let listing = help_listing(&String::from_utf8_lossy(&help.stdout));
    let want: Vec<(String, String)> = HELP_COMMANDS.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    if listing != want {
        return Err(format!("help listing {listing:?}"));
    }

    expect_code(&cli(&[], here), 1, "no arguments")?;
    expect_code(&cli(&["frobnicate"], here), 1, "unknown command")?;
    expect_code(&cli(&["summary", "--bogus", "."], here), 1, "unknown flag")?;
    expect_code(&cli(&["summary"], here), 1, "missing workspace")?;
    let lang = cli(&["generate", "-l", "cobol", "."], here);
    expect_code(&lang, 1, "unsupported language")?;
    if !String::from_utf8_lossy(&lang.stderr).contains("java") {
        return Err("unsupported-language error does not list java".into());
    }
    let nodata = cli(&["summary", "."], here);
    expect_code(&nodata, 2, "summary without data")?;
    if !String::from_utf8_lossy(&nodata.stderr).contains("generate") {
        return Err("missing-data error does not point at `generate`".into());
    }

    let ws = corpus_workspace()?;
    let wsp = ws.path().to_str().ok_or("non-UTF-8 temp path")?;
    expect_code(&cli(&["generate", "-l", "java", wsp], here), 0, "generate")?;

    let mut runs = Vec::new();
    for run in ["one", "two"] {
        let out_dir = here.join(run);
        let od = out_dir.to_str().unwrap();
        for args in [
            vec!["partition", "-o", "csv", "--seed", "7", "--out-dir", od, wsp, "4"],
            vec!["partition", "-o", "json", "--seed", "7", "--out-dir", od, wsp, "4"],
            vec!["crucial", "-n", "5", "-o", "json", "--out-dir", od, wsp],
            vec!["summary", "-o", "tex", "--out-dir", od, wsp],
            vec!["export", "-o", "gml", "--out-dir", od, wsp],
        ] {
            expect_code(&cli(&args, here), 0, &args.join(" "))?;
        }
        let stdout = cli(&["partition", "--seed", "7", wsp, "3"], here);
        expect_code(&stdout, 0, "partition to stdout")?;
        runs.push((dir_bytes(&out_dir)?, stdout.stdout));
    }
    let npart_csvs = runs[0].0.keys().filter(|k| k.contains("-npart-")).count();
    if npart_csvs != 6 {
        return Err(format!("partition -o csv ... 4 wrote {npart_csvs} npart files, expected 6"));
    }
    if runs[0] != runs[1] {
        return Err("outputs differ between two runs with --seed 7".into());
    }
    let took = started.elapsed();
    Ok(format!(
        "help listing matches; exit codes 0/1/2 as documented; {} output files byte-identical across seeded runs in {took:.2?}",
        runs[0].0.len()
    ))
}
