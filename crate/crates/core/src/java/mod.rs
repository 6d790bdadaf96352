//! Java front end: builds a [`SemanticCodeGraph`] from a source tree.
//!
//! Files are tokenized and parsed in parallel, a project-wide symbol index
//! is built, and each file is then turned into nodes and edges. Output is
//! independent of thread scheduling.
//!
//! Identifier scheme:
//!
//! | entity | id |
//! |---|---|
//! | file | workspace-relative path, `/`-separated |
//! | type | `pkg.Outer.Inner` |
//! | method | `pkg.T.m().`, the k-th later overload `pkg.T.m(+k).` |
//! | constructor | `pkg.T.T().` (overloads as for methods) |
//! | field, enum constant | `pkg.T.f.` |
//! | type parameter | `pkg.T.X`, `pkg.T.m().X` |
//! | parameter | `pkg.T.m().(p)` |
//! | local variable | `pkg.T.m().x?L` with `L` the 1-based line |
//! | local class | `pkg.T.m().Local` |
//!
//! A `#k` suffix disambiguates the rare remaining collisions.

mod body;
mod emit;
pub mod index;
pub mod lexer;
pub mod parser;

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use walkdir::WalkDir;

use crate::error::{Error, IoContext, Result};
use crate::model::SemanticCodeGraph;
use crate::store;
use index::{FileUnit, Index};

/// Directories never descended into.
const SKIP_DIRS: &[&str] = &["target", "build", "out", "node_modules", store::DATA_DIR];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FileFailure {
    pub file: String,
    pub line: u32,
    pub column: u32,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExtractionReport {
    pub files_parsed: usize,
    pub files_failed: usize,
    /// Names that could not be bound to a declaration or external symbol.
    pub unresolved_references: usize,
    pub elapsed_ms: u64,
    pub failures: Vec<FileFailure>,
}

/// Every `.java` file under `root` as workspace-relative `/` paths, sorted.
pub fn find_sources(root: &Path) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let walker = WalkDir::new(root).follow_links(false).into_iter().filter_entry(|e| {
        if e.depth() == 0 || !e.file_type().is_dir() {
            return true;
        }
        let name = e.file_name().to_string_lossy();
        !name.starts_with('.') && !SKIP_DIRS.contains(&name.as_ref())
    });
    for entry in walker {
        let entry = entry.map_err(|e| {
            let path = e.path().map(Path::to_path_buf).unwrap_or_else(|| root.to_path_buf());
            Error::Io { path, source: e.into() }
        })?;
        if entry.file_type().is_file() && entry.path().extension().is_some_and(|x| x == "java") {
            let rel = entry.path().strip_prefix(root).expect("walk stays under root");
            let rel: Vec<String> = rel.components().map(|c| c.as_os_str().to_string_lossy().into_owned()).collect();
            out.push(rel.join("/"));
        }
    }
    out.sort();
    Ok(out)
}

fn parse_unit(rel: &str, text: &str) -> std::result::Result<FileUnit, FileFailure> {
    let fail = |line, column, message: String| FileFailure { file: rel.to_string(), line: line + 1, column: column + 1, message };
    let toks = lexer::tokenize(text).map_err(|e| fail(e.line, e.col, e.message))?;
    let cu = parser::parse(&toks).map_err(|e| fail(e.line, e.col, e.message))?;
    let lines: Vec<&str> = text.lines().collect();
    let line_count = lines.len().max(1) as u32;
    let last_line_len = lines.last().map_or(0, |l| l.trim_end_matches('\r').chars().count()) as u32;
    Ok(FileUnit { rel: rel.to_string(), toks, cu, line_count, last_line_len })
}

/// Extracts a graph from in-memory sources given as (relative path, text).
pub fn extract_sources(project_name: &str, sources: &[(String, String)]) -> (SemanticCodeGraph, ExtractionReport) {
    let start = Instant::now();
    let parsed: Vec<std::result::Result<FileUnit, FileFailure>> =
        sources.par_iter().map(|(rel, text)| parse_unit(rel, text)).collect();
    let mut units = Vec::new();
    let mut failures = Vec::new();
    for p in parsed {
        match p {
            Ok(u) => units.push(u),
            Err(f) => failures.push(f),
        }
    }
    let idx = Index::build(&units);
    let outs: Vec<emit::FileOut> =
        units.par_iter().enumerate().map(|(f, u)| emit::Emitter::new(&idx, u, f).run()).collect();

    let mut graph = SemanticCodeGraph::new(project_name);
    let mut unresolved = 0;
    for out in &outs {
        unresolved += out.unresolved;
        for node in &out.nodes {
            if let Err(e) = graph.insert_node(node.clone()) {
                log::warn!("{}: {e}", out.file_uri);
            }
        }
    }
    for out in &outs {
        for (id, kind) in &out.stubs {
            graph.ensure_stub(id, kind.clone());
        }
        for e in &out.edges {
            graph.insert_edge(e.clone());
        }
    }
    graph.materialize_stubs();
    graph.canonicalize();
    let report = ExtractionReport {
        files_parsed: units.len(),
        files_failed: failures.len(),
        unresolved_references: unresolved,
        elapsed_ms: start.elapsed().as_millis() as u64,
        failures,
    };
    (graph, report)
}

/// Extracts the graph of every Java file under `workspace`. The project is
/// named after the workspace directory.
pub fn extract_project(workspace: &Path) -> Result<(SemanticCodeGraph, ExtractionReport)> {
    let root: PathBuf = workspace.canonicalize().at(workspace)?;
    let files = find_sources(&root)?;
    let sources: Vec<(String, String)> = files
        .into_par_iter()
        .map(|rel| {
            let path = root.join(&rel);
            let bytes = std::fs::read(&path).at(&path)?;
            Ok((rel, String::from_utf8_lossy(&bytes).into_owned()))
        })
        .collect::<Result<_>>()?;
    let name = store::default_project_name(&root);
    let (graph, mut report) = extract_sources(&name, &sources);
    report.elapsed_ms = report.elapsed_ms.max(1);
    Ok((graph, report))
}

/// Extracts `workspace` and writes its records under `.semanticgraphs/`.
pub fn generate(workspace: &Path) -> Result<(SemanticCodeGraph, ExtractionReport)> {
    let (graph, report) = extract_project(workspace)?;
    store::save_graph(&graph, workspace)?;
    Ok((graph, report))
}
