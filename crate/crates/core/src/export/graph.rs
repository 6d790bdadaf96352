//! Graph interchange writers: GDF, DOT, GraphML and GML.
//!
//! Nodes are written in id order and edges in (from, to, type) order, so
//! the output depends only on the graph contents. Ids are emitted verbatim
//! inside quoted strings; only the characters each syntax reserves are
//! escaped.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::model::{SemanticCodeGraph, SemanticNode};

/// An integer node attribute such as a partition number. Nodes missing from
/// `values` carry no value for it.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeColumn {
    /// Attribute name; must be a valid GML key (letter first, then letters,
    /// digits or `_`).
    pub name: String,
    pub values: BTreeMap<String, usize>,
}

fn columns_for<'a>(node: &SemanticNode, columns: &'a [NodeColumn]) -> impl Iterator<Item = (&'a str, Option<usize>)> {
    let id = node.id.clone();
    columns.iter().map(move |c| (c.name.as_str(), c.values.get(&id).copied()))
}

/// GDF with every field quoted; a literal `"` is doubled.
pub fn write_gdf(graph: &SemanticCodeGraph, columns: &[NodeColumn]) -> String {
    let q = |s: &str| format!("\"{}\"", s.replace('"', "\"\""));
    let mut out = String::from("nodedef>name VARCHAR,label VARCHAR,kind VARCHAR,loc INTEGER,package VARCHAR,file VARCHAR");
    for c in columns {
        let _ = write!(out, ",{} INTEGER", c.name);
    }
    out.push('\n');
    for n in graph.nodes() {
        let loc = n.loc.to_string();
        let mut fields =
            vec![q(&n.id), q(&n.display_name), q(n.kind.as_str()), q(&loc), q(&n.package_name), q(&n.file_uri)];
        fields.extend(columns_for(n, columns).map(|(_, v)| q(&v.map(|v| v.to_string()).unwrap_or_default())));
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out.push_str("edgedef>node1 VARCHAR,node2 VARCHAR,type VARCHAR,directed BOOLEAN\n");
    for e in graph.sorted_edges() {
        let _ = writeln!(out, "{},{},{},\"true\"", q(&e.from), q(&e.to), q(e.kind.as_str()));
    }
    out
}

fn dot_str(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

pub fn write_dot(graph: &SemanticCodeGraph, columns: &[NodeColumn]) -> String {
    let mut out = format!("digraph {} {{\n", dot_str(graph.project_name()));
    for n in graph.nodes() {
        let _ = write!(
            out,
            "  {} [label={}, kind={}, loc={}, package={}, file={}",
            dot_str(&n.id),
            dot_str(&n.display_name),
            dot_str(n.kind.as_str()),
            n.loc,
            dot_str(&n.package_name),
            dot_str(&n.file_uri)
        );
        for (name, v) in columns_for(n, columns) {
            if let Some(v) = v {
                let _ = write!(out, ", {name}={v}");
            }
        }
        out.push_str("];\n");
    }
    for e in graph.sorted_edges() {
        let kind = dot_str(e.kind.as_str());
        let _ = writeln!(out, "  {} -> {} [label={kind}, type={kind}];", dot_str(&e.from), dot_str(&e.to));
    }
    out.push_str("}\n");
    out
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

const GRAPHML_HEADER: &str = r#"<?xml version="1.0" encoding="UTF-8"?>
<graphml xmlns="http://graphml.graphdrawing.org/xmlns"
    xmlns:xsi="http://www.w3.org/2001/XMLSchema-instance"
    xsi:schemaLocation="http://graphml.graphdrawing.org/xmlns http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd">
"#;

pub fn write_graphml(graph: &SemanticCodeGraph, columns: &[NodeColumn]) -> String {
    let mut out = String::from(GRAPHML_HEADER);
    let keys = [("label", "string"), ("kind", "string"), ("loc", "int"), ("package", "string"), ("file", "string")];
    for (k, ty) in keys {
        let _ = writeln!(out, "  <key id=\"{k}\" for=\"node\" attr.name=\"{k}\" attr.type=\"{ty}\"/>");
    }
    for c in columns {
        let name = xml_escape(&c.name);
        let _ = writeln!(out, "  <key id=\"{name}\" for=\"node\" attr.name=\"{name}\" attr.type=\"int\"/>");
    }
    out.push_str("  <key id=\"type\" for=\"edge\" attr.name=\"type\" attr.type=\"string\"/>\n");
    let _ = writeln!(out, "  <graph id=\"{}\" edgedefault=\"directed\">", xml_escape(graph.project_name()));
    for n in graph.nodes() {
        let _ = writeln!(out, "    <node id=\"{}\">", xml_escape(&n.id));
        let loc = n.loc.to_string();
        for (k, v) in [
            ("label", n.display_name.as_str()),
            ("kind", n.kind.as_str()),
            ("loc", loc.as_str()),
            ("package", n.package_name.as_str()),
            ("file", n.file_uri.as_str()),
        ] {
            let _ = writeln!(out, "      <data key=\"{k}\">{}</data>", xml_escape(v));
        }
        for (name, v) in columns_for(n, columns) {
            if let Some(v) = v {
                let _ = writeln!(out, "      <data key=\"{}\">{v}</data>", xml_escape(name));
            }
        }
        out.push_str("    </node>\n");
    }
    for (i, e) in graph.sorted_edges().into_iter().enumerate() {
        let _ = writeln!(
            out,
            "    <edge id=\"e{i}\" source=\"{}\" target=\"{}\">\n      <data key=\"type\">{}</data>\n    </edge>",
            xml_escape(&e.from),
            xml_escape(&e.to),
            e.kind.as_str()
        );
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

// GML strings cannot hold `"`; the usual workaround is an HTML entity.
fn gml_str(s: &str) -> String {
    format!("\"{}\"", s.replace('&', "&amp;").replace('"', "&quot;"))
}

/// GML with integer node ids in id order; the symbol id is the `name` field.
pub fn write_gml(graph: &SemanticCodeGraph, columns: &[NodeColumn]) -> String {
    let mut out = String::from("graph [\n  directed 1\n");
    let _ = writeln!(out, "  label {}", gml_str(graph.project_name()));
    let mut index = BTreeMap::new();
    for (i, n) in graph.nodes().enumerate() {
        index.insert(n.id.as_str(), i);
        let _ = write!(
            out,
            "  node [\n    id {i}\n    label {}\n    name {}\n    kind {}\n    loc {}\n    package {}\n    file {}\n",
            gml_str(&n.display_name),
            gml_str(&n.id),
            gml_str(n.kind.as_str()),
            n.loc,
            gml_str(&n.package_name),
            gml_str(&n.file_uri)
        );
        for (name, v) in columns_for(n, columns) {
            if let Some(v) = v {
                let _ = writeln!(out, "    {name} {v}");
            }
        }
        out.push_str("  ]\n");
    }
    for e in graph.sorted_edges() {
        let _ = writeln!(
            out,
            "  edge [\n    source {}\n    target {}\n    type {}\n  ]",
            index[e.from.as_str()],
            index[e.to.as_str()],
            gml_str(e.kind.as_str())
        );
    }
    out.push_str("]\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{EdgeKind, Location, NodeKind, SemanticEdge};

    fn tiny() -> SemanticCodeGraph {
        let mut g = SemanticCodeGraph::new("t");
        let loc = Location::new(0, 0, 2, 1);
        g.insert_node(SemanticNode::located("A.java", NodeKind::File, "A.java", "", "A.java", loc)).unwrap();
        g.insert_node(SemanticNode::located("A", NodeKind::Class, "A", "", "A.java", loc)).unwrap();
        g.insert_node(SemanticNode::located("A.m().x?2", NodeKind::LocalVariable, "x", "", "A.java", loc)).unwrap();
        g.insert_edge(SemanticEdge::new("A.java", "A", EdgeKind::Declaration));
        g.insert_edge(SemanticEdge::new("A", "A.m().x?2", EdgeKind::Declaration));
        g
    }

    #[test]
    fn gdf_quotes_everything() {
        let text = write_gdf(&tiny(), &[]);
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("nodedef>name VARCHAR,label VARCHAR,kind VARCHAR,loc INTEGER"));
        assert_eq!(lines[1], r#""A","A","CLASS","3","","A.java""#);
        assert!(lines.contains(&r#""A","A.m().x?2","DECLARATION","true""#));
    }

    #[test]
    fn gml_carries_columns() {
        let col = NodeColumn { name: "npart_2_mlv_fm".into(), values: [("A".to_string(), 1)].into() };
        let text = write_gml(&tiny(), &[col]);
        assert_eq!(text.matches("npart_2_mlv_fm 1").count(), 1);
        assert!(text.contains("name \"A.m().x?2\""));
    }

    #[test]
    fn escaping() {
        assert_eq!(dot_str("a\"b\\c"), "\"a\\\"b\\\\c\"");
        assert_eq!(xml_escape("<a&'\">"), "&lt;a&amp;&apos;&quot;&gt;");
        assert_eq!(gml_str("x\"y"), "\"x&quot;y\"");
    }

    #[test]
    fn empty_graph_documents() {
        let g = SemanticCodeGraph::new("e");
        assert_eq!(write_dot(&g, &[]), "digraph \"e\" {\n}\n");
        assert!(write_graphml(&g, &[]).ends_with("  <graph id=\"e\" edgedefault=\"directed\">\n  </graph>\n</graphml>\n"));
        assert_eq!(write_gml(&g, &[]), "graph [\n  directed 1\n  label \"e\"\n]\n");
        assert_eq!(write_gdf(&g, &[]).lines().count(), 2);
    }
}
