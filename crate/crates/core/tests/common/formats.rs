//! Reloading oracles for the exported graph formats.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use graphviz_rust::dot_structures::{Attribute, EdgeTy, Graph, Id, Stmt, Vertex};

const GRAPHML_NS: &str = "http://graphml.graphdrawing.org/xmlns";
const KEY_DOMAINS: &[&str] = &["all", "graphml", "graph", "node", "edge", "hyperedge", "port", "endpoint"];
const KEY_TYPES: &[&str] = &["boolean", "int", "long", "float", "double", "string"];

/// Node id → (key → value) and edges as (source, target, key → value).
#[derive(Debug, Default)]
pub struct Reloaded {
    pub nodes: BTreeMap<String, BTreeMap<String, String>>,
    pub edges: Vec<(String, String, BTreeMap<String, String>)>,
}

fn children<'a>(n: roxmltree::Node<'a, 'a>) -> impl Iterator<Item = roxmltree::Node<'a, 'a>> {
    n.children().filter(|c| c.is_element())
}

/// Checks a GraphML document against the content model and identity
/// constraints of the GraphML 1.0 schema and reloads it.
///
/// Enforced: root element and namespace; element order `desc?, key*,
/// (data|graph)*` under `graphml` and `desc?, (data|node|edge)*` under
/// `graph`; required attributes and their enumerations (`for`,
/// `attr.type`, `edgedefault`); unique key ids and node ids; every edge
/// endpoint and data key reference resolves; data values parse under the
/// key's declared type and the key's domain admits the element.
pub fn validate_graphml(text: &str) -> Result<Reloaded, String> {
    let doc = roxmltree::Document::parse(text).map_err(|e| format!("not well-formed XML: {e}"))?;
    let root = doc.root_element();
    if root.tag_name().name() != "graphml" || root.tag_name().namespace() != Some(GRAPHML_NS) {
        return Err("root must be graphml in the GraphML namespace".into());
    }
    let mut keys: BTreeMap<String, (String, String)> = BTreeMap::new();
    let mut stage = 0; // 0: desc allowed, 1: keys, 2: graph/data
    let mut graphs = Vec::new();
    for c in children(root) {
        match c.tag_name().name() {
            "desc" if stage == 0 => stage = 1,
            "key" if stage <= 1 => {
                stage = 1;
                let id = c.attribute("id").ok_or("key without id")?;
                let domain = c.attribute("for").unwrap_or("all");
                if !KEY_DOMAINS.contains(&domain) {
                    return Err(format!("key {id}: bad for=\"{domain}\""));
                }
                let ty = c.attribute("attr.type").unwrap_or("string");
                if !KEY_TYPES.contains(&ty) {
                    return Err(format!("key {id}: bad attr.type=\"{ty}\""));
                }
                if keys.insert(id.to_string(), (domain.to_string(), ty.to_string())).is_some() {
                    return Err(format!("duplicate key id {id}"));
                }
            }
            "graph" => {
                stage = 2;
                graphs.push(c);
            }
            "data" => stage = 2,
            other => return Err(format!("unexpected <{other}> under graphml")),
        }
    }
    let check_data = |d: roxmltree::Node, domain: &str| -> Result<(String, String), String> {
        let key = d.attribute("key").ok_or("data without key")?;
        let (dom, ty) = keys.get(key).ok_or_else(|| format!("data refers to undeclared key {key}"))?;
        if dom != "all" && dom != domain {
            return Err(format!("key {key} is for {dom}, used on {domain}"));
        }
        let value = d.text().unwrap_or("").to_string();
        let ok = match ty.as_str() {
            "int" | "long" => value.trim().parse::<i64>().is_ok(),
            "float" | "double" => value.trim().parse::<f64>().is_ok(),
            "boolean" => matches!(value.trim(), "true" | "false"),
            _ => true,
        };
        if !ok {
            return Err(format!("value `{value}` is not a valid {ty} for key {key}"));
        }
        Ok((key.to_string(), value))
    };
    let mut out = Reloaded::default();
    let mut node_ids: HashSet<String> = HashSet::new();
    let mut pending_edges = Vec::new();
    for g in graphs {
        match g.attribute("edgedefault") {
            Some("directed" | "undirected") => {}
            other => return Err(format!("graph edgedefault must be directed or undirected, got {other:?}")),
        }
        let mut seen_content = false;
        for c in children(g) {
            match c.tag_name().name() {
                "desc" if !seen_content => {}
                "data" => {
                    seen_content = true;
                    check_data(c, "graph")?;
                }
                "node" => {
                    seen_content = true;
                    let id = c.attribute("id").ok_or("node without id")?.to_string();
                    if !node_ids.insert(id.clone()) {
                        return Err(format!("duplicate node id {id}"));
                    }
                    let mut attrs = BTreeMap::new();
                    for d in children(c) {
                        if d.tag_name().name() != "data" {
                            return Err(format!("unexpected <{}> in node", d.tag_name().name()));
                        }
                        let (k, v) = check_data(d, "node")?;
                        attrs.insert(k, v);
                    }
                    out.nodes.insert(id, attrs);
                }
                "edge" => {
                    seen_content = true;
                    let s = c.attribute("source").ok_or("edge without source")?.to_string();
                    let t = c.attribute("target").ok_or("edge without target")?.to_string();
                    let mut attrs = BTreeMap::new();
                    for d in children(c) {
                        if d.tag_name().name() != "data" {
                            return Err(format!("unexpected <{}> in edge", d.tag_name().name()));
                        }
                        let (k, v) = check_data(d, "edge")?;
                        attrs.insert(k, v);
                    }
                    pending_edges.push((s, t, attrs));
                }
                other => return Err(format!("unexpected <{other}> under graph")),
            }
        }
    }
    for (s, t, _) in &pending_edges {
        if !node_ids.contains(s) || !node_ids.contains(t) {
            return Err(format!("edge {s} -> {t} refers to an undeclared node"));
        }
    }
    out.edges = pending_edges;
    Ok(out)
}

fn id_text(id: &Id) -> String {
    match id {
        Id::Escaped(s) => {
            let inner = &s[1..s.len() - 1];
            let mut out = String::new();
            let mut chars = inner.chars();
            while let Some(c) = chars.next() {
                if c == '\\' {
                    match chars.next() {
                        Some('"') => out.push('"'),
                        Some('\\') => out.push('\\'),
                        Some('n') => out.push('\n'),
                        Some(o) => {
                            out.push('\\');
                            out.push(o);
                        }
                        None => out.push('\\'),
                    }
                } else {
                    out.push(c);
                }
            }
            out
        }
        Id::Html(s) | Id::Plain(s) | Id::Anonymous(s) => s.clone(),
    }
}

fn attrs(list: &[Attribute]) -> BTreeMap<String, String> {
    list.iter().map(|Attribute(k, v)| (id_text(k), id_text(v))).collect()
}

/// Parses DOT text with an independent grammar implementation.
pub fn reparse_dot(text: &str) -> Result<Reloaded, String> {
    let graph = graphviz_rust::parse(text)?;
    let Graph::DiGraph { stmts, .. } = graph else {
        return Err("expected a digraph".into());
    };
    let mut out = Reloaded::default();
    for st in stmts {
        match st {
            Stmt::Node(n) => {
                out.nodes.insert(id_text(&n.id.0), attrs(&n.attributes));
            }
            Stmt::Edge(e) => match e.ty {
                EdgeTy::Pair(Vertex::N(a), Vertex::N(b)) => {
                    out.edges.push((id_text(&a.0), id_text(&b.0), attrs(&e.attributes)))
                }
                other => return Err(format!("unexpected edge form {other:?}")),
            },
            other => return Err(format!("unexpected statement {other:?}")),
        }
    }
    Ok(out)
}

/// Ids and typed edges of a reload, for comparison with the source graph.
pub fn shape(r: &Reloaded, type_key: &str) -> (BTreeSet<String>, BTreeSet<(String, String, String)>) {
    let nodes = r.nodes.keys().cloned().collect();
    let edges = r.edges.iter().map(|(s, t, a)| (s.clone(), t.clone(), a.get(type_key).cloned().unwrap_or_default())).collect();
    (nodes, edges)
}
