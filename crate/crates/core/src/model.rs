//! The Semantic Code Graph data model.
//!
//! A [`SemanticCodeGraph`] holds code entities ([`SemanticNode`]) keyed by a
//! globally unique symbol id and typed dependencies ([`SemanticEdge`]) between
//! them. Symbols defined outside the project (`java.io.File`, ...) are kept as
//! location-less stub nodes so every edge endpoint resolves.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Kind of a code entity. Unknown kinds read from disk are kept verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeKind {
    File,
    Class,
    Interface,
    Enum,
    Method,
    Constructor,
    Field,
    Parameter,
    LocalVariable,
    TypeParameter,
    Other(String),
}

impl NodeKind {
    pub const KNOWN: [NodeKind; 10] = [
        NodeKind::File,
        NodeKind::Class,
        NodeKind::Interface,
        NodeKind::Enum,
        NodeKind::Method,
        NodeKind::Constructor,
        NodeKind::Field,
        NodeKind::Parameter,
        NodeKind::LocalVariable,
        NodeKind::TypeParameter,
    ];

    pub fn as_str(&self) -> &str {
        match self {
            NodeKind::File => "FILE",
            NodeKind::Class => "CLASS",
            NodeKind::Interface => "INTERFACE",
            NodeKind::Enum => "ENUM",
            NodeKind::Method => "METHOD",
            NodeKind::Constructor => "CONSTRUCTOR",
            NodeKind::Field => "FIELD",
            NodeKind::Parameter => "PARAMETER",
            NodeKind::LocalVariable => "LOCAL_VARIABLE",
            NodeKind::TypeParameter => "TYPE_PARAMETER",
            NodeKind::Other(s) => s,
        }
    }

    pub fn parse(s: &str) -> NodeKind {
        NodeKind::KNOWN
            .iter()
            .find(|k| k.as_str() == s)
            .cloned()
            .unwrap_or_else(|| NodeKind::Other(s.to_string()))
    }

    pub fn is_type(&self) -> bool {
        matches!(self, NodeKind::Class | NodeKind::Interface | NodeKind::Enum)
    }
}

/// Kind of a dependency between two entities.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeKind {
    /// Lexically enclosing entity declares the target.
    Declaration,
    Call,
    Reference,
    Extend,
    Override,
    Type,
    Other(String),
}

impl EdgeKind {
    pub const KNOWN: [EdgeKind; 6] = [
        EdgeKind::Declaration,
        EdgeKind::Call,
        EdgeKind::Reference,
        EdgeKind::Extend,
        EdgeKind::Override,
        EdgeKind::Type,
    ];

    pub fn as_str(&self) -> &str {
        match self {
            EdgeKind::Declaration => "DECLARATION",
            EdgeKind::Call => "CALL",
            EdgeKind::Reference => "REFERENCE",
            EdgeKind::Extend => "EXTEND",
            EdgeKind::Override => "OVERRIDE",
            EdgeKind::Type => "TYPE",
            EdgeKind::Other(s) => s,
        }
    }

    pub fn parse(s: &str) -> EdgeKind {
        EdgeKind::KNOWN
            .iter()
            .find(|k| k.as_str() == s)
            .cloned()
            .unwrap_or_else(|| EdgeKind::Other(s.to_string()))
    }
}

macro_rules! string_serde {
    ($ty:ty) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl Serialize for $ty {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.serialize_str(self.as_str())
            }
        }

        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                Ok(<$ty>::parse(&s))
            }
        }
    };
}

string_serde!(NodeKind);
string_serde!(EdgeKind);

/// Source span. Lines and columns are 0-based, end column exclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Location {
    pub start_line: u32,
    pub start_col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl Location {
    pub fn new(start_line: u32, start_col: u32, end_line: u32, end_col: u32) -> Self {
        Location { start_line, start_col, end_line, end_col }
    }

    pub fn is_ordered(&self) -> bool {
        self.start_line < self.end_line
            || (self.start_line == self.end_line && self.start_col <= self.end_col)
    }

    /// Number of lines spanned, counting both ends.
    pub fn line_span(&self) -> u32 {
        self.end_line - self.start_line + 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SemanticNode {
    pub id: String,
    pub kind: NodeKind,
    pub display_name: String,
    pub package_name: String,
    pub file_uri: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub location: Option<Location>,
    pub loc: u32,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub properties: BTreeMap<String, String>,
}

impl SemanticNode {
    /// A located node; `loc` is derived from the span.
    pub fn located(
        id: impl Into<String>,
        kind: NodeKind,
        display_name: impl Into<String>,
        package_name: impl Into<String>,
        file_uri: impl Into<String>,
        location: Location,
    ) -> Self {
        SemanticNode {
            id: id.into(),
            kind,
            display_name: display_name.into(),
            package_name: package_name.into(),
            file_uri: file_uri.into(),
            loc: location.line_span(),
            location: Some(location),
            properties: BTreeMap::new(),
        }
    }

    /// A location-less node standing in for a symbol defined outside the project.
    pub fn stub(id: impl Into<String>, kind: NodeKind) -> Self {
        let id = id.into();
        SemanticNode {
            display_name: stub_display_name(&id),
            package_name: stub_package(&id),
            id,
            kind,
            file_uri: String::new(),
            location: None,
            loc: 0,
            properties: BTreeMap::new(),
        }
    }

    pub fn is_stub(&self) -> bool {
        self.location.is_none()
    }

    pub fn is_file(&self) -> bool {
        self.kind == NodeKind::File
    }
}

/// Infers the kind of an external symbol from its id shape.
pub fn infer_stub_kind(id: &str) -> NodeKind {
    if id.ends_with(").") {
        NodeKind::Method
    } else if id.ends_with('.') {
        NodeKind::Field
    } else {
        NodeKind::Class
    }
}

fn stub_display_name(id: &str) -> String {
    let trimmed = id.trim_end_matches('.');
    let trimmed = trimmed.strip_suffix("()").unwrap_or(trimmed);
    trimmed.rsplit('.').next().unwrap_or(trimmed).to_string()
}

// Package = leading lowercase segments (`java.io` for `java.io.File.exists().`).
fn stub_package(id: &str) -> String {
    let segs: Vec<&str> = id
        .split('.')
        .take_while(|s| s.chars().next().is_some_and(|c| c.is_lowercase()))
        .collect();
    let total = id.split('.').filter(|s| !s.is_empty()).count();
    if segs.len() >= total {
        return String::new();
    }
    segs.join(".")
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SemanticEdge {
    pub from: String,
    pub to: String,
    #[serde(rename = "type")]
    pub kind: EdgeKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub location: Option<Location>,
}

impl SemanticEdge {
    pub fn new(from: impl Into<String>, to: impl Into<String>, kind: EdgeKind) -> Self {
        SemanticEdge { from: from.into(), to: to.into(), kind, location: None }
    }

    pub fn with_location(mut self, location: Location) -> Self {
        self.location = Some(location);
        self
    }

    pub fn key(&self) -> (&str, &str, &EdgeKind) {
        (&self.from, &self.to, &self.kind)
    }
}

type EdgeKey = (String, String, EdgeKind);

/// Whole-project graph. Immutable once built; share freely across threads.
#[derive(Debug, Clone, Default)]
pub struct SemanticCodeGraph {
    project_name: String,
    nodes: BTreeMap<String, SemanticNode>,
    edges: Vec<SemanticEdge>,
    edge_keys: HashSet<EdgeKey>,
}

impl SemanticCodeGraph {
    pub fn new(project_name: impl Into<String>) -> Self {
        SemanticCodeGraph { project_name: project_name.into(), ..Default::default() }
    }

    pub fn project_name(&self) -> &str {
        &self.project_name
    }

    pub fn set_project_name(&mut self, name: impl Into<String>) {
        self.project_name = name.into();
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = &SemanticNode> + Clone {
        self.nodes.values()
    }

    pub fn node(&self, id: &str) -> Option<&SemanticNode> {
        self.nodes.get(id)
    }

    pub fn contains_node(&self, id: &str) -> bool {
        self.nodes.contains_key(id)
    }

    pub fn edges(&self) -> &[SemanticEdge] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty() && self.edges.is_empty()
    }

    /// Inserts a node. A located node replaces a stub with the same id; any
    /// other duplicate is rejected.
    pub fn insert_node(&mut self, node: SemanticNode) -> Result<()> {
        match self.nodes.get(&node.id) {
            None => {
                self.nodes.insert(node.id.clone(), node);
                Ok(())
            }
            Some(existing) if existing.is_stub() && !node.is_stub() => {
                self.nodes.insert(node.id.clone(), node);
                Ok(())
            }
            Some(existing) if node.is_stub() || existing == &node => Ok(()),
            Some(_) => Err(Error::InvalidGraph(format!("duplicate node id `{}`", node.id))),
        }
    }

    /// Adds a stub for `id` unless some node already carries it.
    pub fn ensure_stub(&mut self, id: &str, kind: NodeKind) {
        if !self.nodes.contains_key(id) {
            self.nodes.insert(id.to_string(), SemanticNode::stub(id, kind));
        }
    }

    /// Adds an edge; returns false when the (from, to, type) triple is already present.
    pub fn insert_edge(&mut self, edge: SemanticEdge) -> bool {
        let key = (edge.from.clone(), edge.to.clone(), edge.kind.clone());
        if self.edge_keys.insert(key) {
            self.edges.push(edge);
            true
        } else {
            false
        }
    }

    /// Materializes stubs for every edge endpoint missing from `nodes`.
    pub fn materialize_stubs(&mut self) {
        let missing: Vec<String> = self
            .edges
            .iter()
            .flat_map(|e| [&e.from, &e.to])
            .filter(|id| !self.nodes.contains_key(id.as_str()))
            .cloned()
            .collect();
        for id in missing {
            let kind = infer_stub_kind(&id);
            self.ensure_stub(&id, kind);
        }
    }

    /// Sorts edges by (from, to, type). Node order is already canonical.
    pub fn canonicalize(&mut self) {
        self.edges.sort_by(|a, b| a.key().cmp(&b.key()));
    }

    pub fn sorted_edges(&self) -> Vec<&SemanticEdge> {
        let mut edges: Vec<&SemanticEdge> = self.edges.iter().collect();
        edges.sort_by(|a, b| a.key().cmp(&b.key()));
        edges
    }

    /// Checks the structural invariants of the model.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidGraph(msg));
        for node in self.nodes.values() {
            if let Some(loc) = node.location {
                if !loc.is_ordered() {
                    return bad(format!("node `{}` has an inverted location", node.id));
                }
                if node.loc != loc.line_span() {
                    return bad(format!(
                        "node `{}` has loc {} but spans {} lines",
                        node.id,
                        node.loc,
                        loc.line_span()
                    ));
                }
            } else if node.loc != 0 {
                return bad(format!("location-less node `{}` has loc {}", node.id, node.loc));
            }
            if node.is_file() != (node.id == node.file_uri) {
                return bad(format!("node `{}`: FILE kind must coincide with id == fileUri", node.id));
            }
        }
        let mut declared_by: BTreeMap<&str, usize> = BTreeMap::new();
        for edge in &self.edges {
            for end in [&edge.from, &edge.to] {
                if !self.nodes.contains_key(end.as_str()) {
                    return bad(format!("edge endpoint `{end}` is not a node"));
                }
            }
            if edge.kind == EdgeKind::Declaration {
                if edge.from == edge.to {
                    return bad(format!("`{}` declares itself", edge.from));
                }
                *declared_by.entry(edge.to.as_str()).or_default() += 1;
            }
        }
        for node in self.nodes.values() {
            if node.is_file() || node.is_stub() {
                continue;
            }
            let parents = declared_by.get(node.id.as_str()).copied().unwrap_or(0);
            if parents != 1 {
                return bad(format!("node `{}` has {parents} DECLARATION parents", node.id));
            }
        }
        Ok(())
    }
}

impl PartialEq for SemanticCodeGraph {
    /// Set equality over nodes and edges; project names must match too.
    fn eq(&self, other: &Self) -> bool {
        self.project_name == other.project_name
            && self.nodes == other.nodes
            && self.sorted_edges() == other.sorted_edges()
    }
}
