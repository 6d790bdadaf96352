//! Export of graphs and analysis results to interchange formats.

pub mod graph;
pub mod jupyter;
pub mod report;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

pub use graph::NodeColumn;
pub use jupyter::export_jupyter_bundle;

use crate::error::{IoContext, Result};
use crate::model::SemanticCodeGraph;
use crate::partition::PartitionResult;

/// Graph serializations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphFormat {
    Gdf,
    Dot,
    Graphml,
    Gml,
}

/// Renderings of analysis results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReportFormat {
    Txt,
    Html,
    Tex,
    Csv,
    Json,
}

impl GraphFormat {
    pub const ALL: [GraphFormat; 4] = [GraphFormat::Gdf, GraphFormat::Dot, GraphFormat::Graphml, GraphFormat::Gml];

    pub fn extension(self) -> &'static str {
        match self {
            GraphFormat::Gdf => "gdf",
            GraphFormat::Dot => "dot",
            GraphFormat::Graphml => "graphml",
            GraphFormat::Gml => "gml",
        }
    }

    pub fn render(self, graph: &SemanticCodeGraph, columns: &[NodeColumn]) -> String {
        match self {
            GraphFormat::Gdf => graph::write_gdf(graph, columns),
            GraphFormat::Dot => graph::write_dot(graph, columns),
            GraphFormat::Graphml => graph::write_graphml(graph, columns),
            GraphFormat::Gml => graph::write_gml(graph, columns),
        }
    }
}

impl ReportFormat {
    pub const ALL: [ReportFormat; 5] =
        [ReportFormat::Txt, ReportFormat::Html, ReportFormat::Tex, ReportFormat::Csv, ReportFormat::Json];

    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Txt => "txt",
            ReportFormat::Html => "html",
            ReportFormat::Tex => "tex",
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
        }
    }
}

impl FromStr for GraphFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        GraphFormat::ALL
            .into_iter()
            .find(|f| f.extension().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown graph format `{s}` (expected gdf, dot, graphml or gml)"))
    }
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        ReportFormat::ALL
            .into_iter()
            .find(|f| f.extension().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown report format `{s}` (expected txt, html, tex, csv or json)"))
    }
}

impl fmt::Display for GraphFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

/// Node attribute name for one partitioning, e.g. `npart_6_mlv_fm`.
pub fn partition_attribute(result: &PartitionResult) -> String {
    format!("npart_{}_{}", result.k, result.algorithm.label().replace('-', "_"))
}

/// File name of the `id,npart` table, e.g. `commons-io-npart-6-mlv-fm.csv`.
pub fn partition_csv_name(project: &str, result: &PartitionResult) -> String {
    format!("{project}-npart-{}-{}.csv", result.k, result.algorithm.label())
}

/// One integer node column per partitioning.
pub fn partition_columns(results: &[PartitionResult]) -> Vec<NodeColumn> {
    results.iter().map(|r| NodeColumn { name: partition_attribute(r), values: r.assignment.clone() }).collect()
}

/// Writes `contents` to `path`, creating parent directories.
pub fn write_output(path: &Path, contents: &str) -> Result<PathBuf> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).at(parent)?;
    }
    fs::write(path, contents).at(path)?;
    Ok(path.to_path_buf())
}

/// `project` made safe for use as a file name stem.
pub fn file_stem(project: &str) -> String {
    let s: String = project.chars().map(|c| if matches!(c, '/' | '\\' | ':') { '_' } else { c }).collect();
    if s.is_empty() || s == "." || s == ".." {
        "project".into()
    } else {
        s
    }
}

/// Writes `<out_dir>/<project>.<ext>` and returns its path.
pub fn export_graph(graph: &SemanticCodeGraph, format: GraphFormat, out_dir: &Path) -> Result<PathBuf> {
    let path = out_dir.join(format!("{}.{}", file_stem(graph.project_name()), format.extension()));
    write_output(&path, &format.render(graph, &[]))
}
