//! Helpers shared by the integration test targets.
#![allow(dead_code)]

pub mod criteria;
pub mod formats;
pub mod oracles;

use std::collections::BTreeSet;
use std::path::PathBuf;

use scg::model::SemanticCodeGraph;

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(rel)
}

/// Hand-written expectation for the Java corpus.
pub struct Expected {
    pub nodes: BTreeSet<(String, String)>,
    pub edges: BTreeSet<(String, String, String)>,
    pub parsed: usize,
    pub failed: usize,
}

pub fn load_expected() -> Expected {
    let text = std::fs::read_to_string(fixture("corpus.expected")).expect("corpus.expected");
    let mut e = Expected { nodes: BTreeSet::new(), edges: BTreeSet::new(), parsed: 0, failed: 0 };
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        if let Some(rest) = line.strip_prefix("# files:") {
            let w: Vec<&str> = rest.split_whitespace().collect();
            e.parsed = w[1].parse().unwrap();
            e.failed = w[3].parse().unwrap();
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let w: Vec<&str> = line.split_whitespace().collect();
        match w.as_slice() {
            ["N", kind, id] => {
                e.nodes.insert((kind.to_string(), id.to_string()));
            }
            ["E", kind, from, to] => {
                e.edges.insert((kind.to_string(), from.to_string(), to.to_string()));
            }
            _ => panic!("bad expectation line: {line}"),
        }
    }
    e
}

pub fn node_set(g: &SemanticCodeGraph) -> BTreeSet<(String, String)> {
    g.nodes().map(|n| (n.kind.as_str().to_string(), n.id.clone())).collect()
}

pub fn edge_set(g: &SemanticCodeGraph) -> BTreeSet<(String, String, String)> {
    g.edges().iter().map(|e| (e.kind.as_str().to_string(), e.from.clone(), e.to.clone())).collect()
}

/// Lines describing how `actual` differs from `expected`, empty when equal.
pub fn diff<T: Ord + std::fmt::Debug>(what: &str, expected: &BTreeSet<T>, actual: &BTreeSet<T>) -> Vec<String> {
    let mut out: Vec<String> = expected.difference(actual).map(|x| format!("missing {what} {x:?}")).collect();
    out.extend(actual.difference(expected).map(|x| format!("extra {what} {x:?}")));
    out
}
