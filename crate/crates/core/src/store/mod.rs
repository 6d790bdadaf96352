//! On-disk persistence of a [`SemanticCodeGraph`] under `<workspace>/.semanticgraphs/`.
//!
//! One record file per source file mirrors the source tree:
//! `src/A.java` is stored as `.semanticgraphs/src/A.java.semanticgraphdb`
//! (binary) or `.semanticgraphs/src/A.java.json` (JSON). A record holds the
//! nodes defined in that file, every edge leaving them, and copies of the
//! external stubs those edges touch. Location-less stubs that no edge
//! mentions, and edges between two stubs, go to `_external.semanticgraphdb`.

pub mod binary;
pub mod json;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Component, Path, PathBuf};

use walkdir::WalkDir;

use crate::error::{Error, IoContext, Result};
use crate::model::{SemanticCodeGraph, SemanticEdge, SemanticNode};

pub const DATA_DIR: &str = ".semanticgraphs";
pub const BINARY_EXT: &str = "semanticgraphdb";
pub const JSON_EXT: &str = "json";
const EXTERNAL_RECORD: &str = "_external";

/// Contents of one record file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FileRecord {
    pub project_name: String,
    /// Source file this record describes; empty for the external record.
    pub file_uri: String,
    pub nodes: Vec<SemanticNode>,
    pub edges: Vec<SemanticEdge>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RecordFormat {
    #[default]
    Binary,
    Json,
}

impl RecordFormat {
    pub fn extension(self) -> &'static str {
        match self {
            RecordFormat::Binary => BINARY_EXT,
            RecordFormat::Json => JSON_EXT,
        }
    }

    pub fn encode(self, record: &FileRecord) -> Vec<u8> {
        match self {
            RecordFormat::Binary => binary::encode(record),
            RecordFormat::Json => json::encode(record),
        }
    }
}

pub fn data_dir(workspace: &Path) -> PathBuf {
    workspace.join(DATA_DIR)
}

/// Splits a graph into per-file records, in deterministic order.
pub fn split_records(graph: &SemanticCodeGraph) -> Result<Vec<FileRecord>> {
    let mut owned: BTreeMap<&str, (BTreeSet<&str>, Vec<&SemanticEdge>)> = BTreeMap::new();
    for node in graph.nodes() {
        if !node.file_uri.is_empty() {
            check_relative(&node.id, &node.file_uri)?;
            owned.entry(node.file_uri.as_str()).or_default().0.insert(&node.id);
        } else if !node.is_stub() {
            return Err(Error::Serialization {
                id: node.id.clone(),
                reason: "located node has an empty fileUri".into(),
            });
        }
    }

    let file_of = |id: &str| graph.node(id).map(|n| n.file_uri.as_str()).filter(|f| !f.is_empty());
    let mut external_edges = Vec::new();
    for edge in graph.sorted_edges() {
        match file_of(&edge.from).or_else(|| file_of(&edge.to)) {
            Some(file) => owned.entry(file).or_default().1.push(edge),
            None => external_edges.push(edge),
        }
    }

    let mut mentioned: BTreeSet<String> = BTreeSet::new();
    let mut records = Vec::new();
    let mut build = |file_uri: &str, own: &BTreeSet<&str>, edges: Vec<&SemanticEdge>| {
        let mut ids: BTreeSet<&str> = own.clone();
        for e in &edges {
            for end in [e.from.as_str(), e.to.as_str()] {
                if file_of(end).is_none() {
                    ids.insert(end);
                }
            }
        }
        mentioned.extend(ids.iter().map(|s| s.to_string()));
        FileRecord {
            project_name: graph.project_name().to_string(),
            file_uri: file_uri.to_string(),
            nodes: ids.iter().filter_map(|id| graph.node(id)).cloned().collect(),
            edges: edges.into_iter().cloned().collect(),
        }
    };
    for (file, (own, edges)) in &owned {
        records.push(build(file, own, edges.clone()));
    }
    let ext_edges = external_edges.clone();
    let mut external = build("", &BTreeSet::new(), ext_edges);
    let orphans: Vec<SemanticNode> = graph
        .nodes()
        .filter(|n| n.file_uri.is_empty() && !mentioned.contains(&n.id))
        .cloned()
        .collect();
    external.nodes.extend(orphans);
    external.nodes.sort_by(|a, b| a.id.cmp(&b.id));
    if !external.nodes.is_empty() || !external.edges.is_empty() {
        records.push(external);
    }
    Ok(records)
}

fn check_relative(id: &str, file_uri: &str) -> Result<()> {
    let p = Path::new(file_uri);
    if p.components().any(|c| !matches!(c, Component::Normal(_))) {
        return Err(Error::Serialization {
            id: id.to_string(),
            reason: format!("fileUri `{file_uri}` is not a workspace-relative path"),
        });
    }
    Ok(())
}

fn record_path(dir: &Path, record: &FileRecord, format: RecordFormat) -> PathBuf {
    let stem = if record.file_uri.is_empty() { EXTERNAL_RECORD } else { record.file_uri.as_str() };
    dir.join(format!("{stem}.{}", format.extension()))
}

/// Writes the graph as binary records. See [`save_graph_as`].
pub fn save_graph(graph: &SemanticCodeGraph, workspace: &Path) -> Result<Vec<PathBuf>> {
    save_graph_as(graph, workspace, RecordFormat::Binary)
}

/// Writes one record file per source file and removes stale record files left
/// by an earlier save. Returns the written paths in sorted order.
pub fn save_graph_as(graph: &SemanticCodeGraph, workspace: &Path, format: RecordFormat) -> Result<Vec<PathBuf>> {
    let records = split_records(graph)?;
    let dir = data_dir(workspace);
    let mut written = Vec::with_capacity(records.len());
    for record in &records {
        let path = record_path(&dir, record, format);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).at(parent)?;
        }
        fs::write(&path, format.encode(record)).at(&path)?;
        written.push(path);
    }
    if dir.is_dir() {
        let keep: BTreeSet<&PathBuf> = written.iter().collect();
        for stale in record_files(&dir)? {
            if !keep.contains(&stale) {
                fs::remove_file(&stale).at(&stale)?;
            }
        }
    }
    written.sort();
    Ok(written)
}

fn record_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for entry in WalkDir::new(dir).sort_by_file_name() {
        let entry = entry.map_err(|e| Error::Io {
            path: e.path().map(Path::to_path_buf).unwrap_or_else(|| dir.to_path_buf()),
            source: e.into_io_error().unwrap_or_else(|| std::io::Error::other("walk failed")),
        })?;
        let path = entry.path();
        let ext = path.extension().and_then(|e| e.to_str());
        if entry.file_type().is_file() && matches!(ext, Some(BINARY_EXT) | Some(JSON_EXT)) {
            out.push(path.to_path_buf());
        }
    }
    Ok(out)
}

/// Reads every record file of a workspace.
pub fn read_records(workspace: &Path) -> Result<Vec<(PathBuf, FileRecord)>> {
    let dir = data_dir(workspace);
    if !dir.is_dir() {
        return Err(Error::MissingData(workspace.to_path_buf()));
    }
    let mut out = Vec::new();
    for path in record_files(&dir)? {
        let bytes = fs::read(&path).at(&path)?;
        let decoded = if path.extension().and_then(|e| e.to_str()) == Some(JSON_EXT) {
            json::decode(&bytes)
        } else {
            binary::decode(&bytes)
        };
        let record = decoded.map_err(|e| Error::Malformed { path: path.clone(), offset: e.offset, message: e.message })?;
        out.push((path, record));
    }
    Ok(out)
}

/// Loads and merges all records. Located nodes win over stubs with the same
/// id; missing edge endpoints become stubs.
pub fn load_graph(workspace: &Path) -> Result<SemanticCodeGraph> {
    let records = read_records(workspace)?;
    let project = records
        .iter()
        .map(|(_, r)| r.project_name.as_str())
        .find(|n| !n.is_empty())
        .map(str::to_string)
        .unwrap_or_else(|| default_project_name(workspace));
    merge_records(project, records.into_iter().map(|(_, r)| r))
}

pub fn merge_records(project: String, records: impl IntoIterator<Item = FileRecord>) -> Result<SemanticCodeGraph> {
    let mut graph = SemanticCodeGraph::new(project);
    let mut edges = Vec::new();
    for record in records {
        for node in record.nodes {
            // two located copies of one id: keep the first in path order
            if graph.node(&node.id).is_some_and(|n| !n.is_stub()) {
                continue;
            }
            graph.insert_node(node)?;
        }
        edges.extend(record.edges);
    }
    for edge in edges {
        graph.insert_edge(edge);
    }
    graph.materialize_stubs();
    graph.canonicalize();
    Ok(graph)
}

pub fn default_project_name(workspace: &Path) -> String {
    let abs = fs::canonicalize(workspace).unwrap_or_else(|_| workspace.to_path_buf());
    abs.file_name().and_then(|n| n.to_str()).unwrap_or("project").to_string()
}
