//! Text renderings of analysis results: txt, html, tex, csv and json.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::ReportFormat;
use crate::crucial::{CrucialReport, MetricRanking};
use crate::model::SemanticCodeGraph;
use crate::partition::PartitionResult;
use crate::summary::SummaryStats;

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialization is infallible");
    s.push('\n');
    s
}

fn real(x: f64, digits: usize) -> String {
    if x.is_infinite() {
        "inf".into()
    } else {
        format!("{x:.digits$}")
    }
}

fn opt_real(x: Option<f64>, digits: usize) -> String {
    x.map_or_else(|| "n/a".into(), |v| real(v, digits))
}

pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn html_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

pub fn tex_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\textbackslash{}"),
            '~' => out.push_str("\\textasciitilde{}"),
            '^' => out.push_str("\\textasciicircum{}"),
            '#' | '$' | '%' | '&' | '_' | '{' | '}' => {
                out.push('\\');
                out.push(c);
            }
            c => out.push(c),
        }
    }
    out
}

fn html_page(title: &str, body: &str) -> String {
    format!(
        "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>{t}</title>\n<style>\n\
         body {{ font-family: sans-serif; margin: 2em; }}\n\
         table {{ border-collapse: collapse; margin-bottom: 1.5em; }}\n\
         th, td {{ border: 1px solid #bbb; padding: 0.2em 0.6em; text-align: left; }}\n\
         th {{ background: #ddd; }}\n\
         .bar {{ background: #4a7ebb; height: 0.9em; display: inline-block; }}\n\
         </style>\n</head>\n<body>\n<h1>{t}</h1>\n{body}</body>\n</html>\n",
        t = html_escape(title)
    )
}

// ---- summary ----

fn summary_rows(s: &SummaryStats) -> Vec<(&'static str, String)> {
    vec![
        ("Nodes", s.node_count.to_string()),
        ("Edges", s.edge_count.to_string()),
        ("Total lines of code", s.total_loc.to_string()),
        ("Density", real(s.density, 6)),
        ("Average in-degree", real(s.avg_in_degree, 3)),
        ("Average out-degree", real(s.avg_out_degree, 3)),
        ("Global clustering coefficient", real(s.global_clustering_coefficient, 6)),
        ("Degree assortativity", opt_real(s.degree_assortativity, 6)),
    ]
}

pub fn render_summary(project: &str, s: &SummaryStats, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => json(s),
        ReportFormat::Txt => {
            let mut out = format!("Project: {project}\n");
            for (k, v) in summary_rows(s) {
                let _ = writeln!(out, "{:<31} {v}", format!("{k}:"));
            }
            for (title, dist) in [("Node kinds", &s.node_kind_distribution), ("Edge kinds", &s.edge_kind_distribution)] {
                let _ = writeln!(out, "{title}:");
                for (kind, count) in dist {
                    let _ = writeln!(out, "  {kind:<16} {count}");
                }
            }
            out
        }
        ReportFormat::Csv => {
            let mut out = String::from("metric,value\n");
            let _ = writeln!(out, "nodeCount,{}", s.node_count);
            let _ = writeln!(out, "edgeCount,{}", s.edge_count);
            let _ = writeln!(out, "totalLoc,{}", s.total_loc);
            let _ = writeln!(out, "density,{}", s.density);
            let _ = writeln!(out, "avgInDegree,{}", s.avg_in_degree);
            let _ = writeln!(out, "avgOutDegree,{}", s.avg_out_degree);
            let _ = writeln!(out, "globalClusteringCoefficient,{}", s.global_clustering_coefficient);
            let assort = s.degree_assortativity.map_or_else(|| "n/a".to_string(), |v| v.to_string());
            let _ = writeln!(out, "degreeAssortativity,{assort}");
            for (kind, c) in &s.node_kind_distribution {
                let _ = writeln!(out, "{},{c}", csv_field(&format!("nodeKind.{kind}")));
            }
            for (kind, c) in &s.edge_kind_distribution {
                let _ = writeln!(out, "{},{c}", csv_field(&format!("edgeKind.{kind}")));
            }
            out
        }
        ReportFormat::Tex => {
            let mut out = String::from("\\begin{tabular}{l|r}\n\\hline\nMetric & Value \\\\\n\\hline\n");
            for (k, v) in summary_rows(s) {
                let _ = writeln!(out, "{k} & {v} \\\\");
            }
            for (title, dist) in [("nodes", &s.node_kind_distribution), ("edges", &s.edge_kind_distribution)] {
                out.push_str("\\hline\n");
                for (kind, count) in dist {
                    let _ = writeln!(out, "{} {title} & {count} \\\\", tex_escape(kind));
                }
            }
            out.push_str("\\hline\n\\end{tabular}\n");
            out
        }
        ReportFormat::Html => {
            let mut body = String::from("<h2>Graph parameters</h2>\n<table>\n<tr><th>Parameter</th><th>Value</th></tr>\n");
            for (k, v) in summary_rows(s) {
                let _ = writeln!(body, "<tr><td>{k}</td><td>{v}</td></tr>");
            }
            body.push_str("</table>\n");
            for (title, dist) in [("Node kinds", &s.node_kind_distribution), ("Edge kinds", &s.edge_kind_distribution)] {
                let max = dist.values().copied().max().unwrap_or(0).max(1);
                let _ = writeln!(body, "<h2>{title}</h2>\n<table>\n<tr><th>Kind</th><th>Count</th><th></th></tr>");
                for (kind, &count) in dist {
                    let width = 300 * count / max;
                    let _ = writeln!(
                        body,
                        "<tr><td>{}</td><td>{count}</td><td><span class=\"bar\" style=\"width: {width}px\"></span></td></tr>",
                        html_escape(kind)
                    );
                }
                body.push_str("</table>\n");
            }
            html_page(&format!("{project} summary"), &body)
        }
    }
}

// ---- crucial ----

fn score(r: &MetricRanking, x: f64) -> String {
    if r.metric.is_count() {
        format!("{x:.0}")
    } else {
        real(x, 3)
    }
}

pub fn render_crucial(project: &str, report: &CrucialReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => json(report),
        ReportFormat::Txt => {
            let mut out = format!("Project: {project}\n");
            for r in &report.rankings {
                let _ = writeln!(out, "\n{}", r.metric.title());
                for (i, e) in r.entries.iter().enumerate() {
                    let _ = writeln!(out, "  {:>2}. {}  {}", i + 1, e.id, score(r, e.score));
                }
            }
            out
        }
        ReportFormat::Csv => {
            let mut out = String::from("metric,rank,id,score\n");
            for r in &report.rankings {
                for (i, e) in r.entries.iter().enumerate() {
                    let _ = writeln!(out, "{},{},{},{}", r.metric.key(), i + 1, csv_field(&e.id), e.score);
                }
            }
            out
        }
        ReportFormat::Tex => {
            let mut out = String::from("\\begin{tabular}{l|l}\n");
            for (i, r) in report.rankings.iter().enumerate() {
                if i == 0 {
                    out.push_str("\\hline\n");
                }
                let _ = writeln!(out, "\\rowcolor{{gray!30}}\n{} & Score \\\\\n\\hline", r.metric.title());
                for e in &r.entries {
                    let _ = writeln!(out, "{} & {} \\\\", tex_escape(&e.id), score(r, e.score));
                }
                if i + 1 < report.rankings.len() {
                    out.push_str("\\hline\n");
                }
            }
            out.push_str("\\end{tabular}\n");
            out
        }
        ReportFormat::Html => {
            let mut body = String::new();
            for r in &report.rankings {
                let _ = writeln!(
                    body,
                    "<h2>{}</h2>\n<table>\n<tr><th>#</th><th>Entity</th><th>Score</th></tr>",
                    r.metric.title()
                );
                for (i, e) in r.entries.iter().enumerate() {
                    let _ =
                        writeln!(body, "<tr><td>{}</td><td>{}</td><td>{}</td></tr>", i + 1, html_escape(&e.id), score(r, e.score));
                }
                body.push_str("</table>\n");
            }
            html_page(&format!("{project} crucial entities"), &body)
        }
    }
}

// ---- partition ----

pub const PARTITION_COLUMNS: [&str; 10] =
    ["Algorithm", "NPart", "Modularity", "ACC", "F. W.", "F. A.", "P. W.", "P. A.", "Variance", "Distribution %"];

fn partition_row(r: &PartitionResult) -> [String; 10] {
    let q = &r.quality;
    let dist: Vec<String> = q.distribution_percent.iter().map(u32::to_string).collect();
    [
        r.algorithm.label().to_string(),
        r.k.to_string(),
        real(q.modularity_ratio, 3),
        real(q.avg_clustering_coefficient, 3),
        format!("{:.0}", q.file_weighted_accuracy),
        format!("{:.0}", q.file_average_accuracy),
        format!("{:.0}", q.package_weighted_accuracy),
        format!("{:.0}", q.package_average_accuracy),
        real(q.partition_variance, 3),
        format!("[{}]", dist.join(",")),
    ]
}

/// `id,npart` rows, one per assigned node, in id order.
pub fn partition_csv(r: &PartitionResult) -> String {
    let mut out = String::from("id,npart\n");
    for (id, p) in &r.assignment {
        let _ = writeln!(out, "{},{p}", csv_field(id));
    }
    out
}

/// Modal partition and its share (%) for each unit; ties go to the lower index.
fn dominant(units: BTreeMap<&str, Vec<usize>>) -> Vec<(String, usize, f64)> {
    units
        .into_iter()
        .map(|(unit, parts)| {
            let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
            for p in &parts {
                *counts.entry(*p).or_default() += 1;
            }
            let (best, n) = counts.iter().fold((0, 0), |acc, (&p, &c)| if c > acc.1 { (p, c) } else { acc });
            (unit.to_string(), best, 100.0 * n as f64 / parts.len() as f64)
        })
        .collect()
}

/// Summary of a partition sweep. `Csv` renders the summary table; the
/// per-split assignments come from [`partition_csv`].
pub fn render_partition(
    project: &str,
    graph: &SemanticCodeGraph,
    results: &[PartitionResult],
    format: ReportFormat,
) -> String {
    match format {
        ReportFormat::Json => json(results),
        ReportFormat::Txt => {
            let rows: Vec<[String; 10]> = results.iter().map(partition_row).collect();
            let mut widths: Vec<usize> = PARTITION_COLUMNS.iter().map(|c| c.len()).collect();
            for row in &rows {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.len());
                }
            }
            let line = |cells: Vec<&str>| {
                let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                padded.join("  ").trim_end().to_string() + "\n"
            };
            let mut out = format!("Project: {project}\n");
            out.push_str(&line(PARTITION_COLUMNS.to_vec()));
            for row in &rows {
                out.push_str(&line(row.iter().map(String::as_str).collect()));
            }
            out
        }
        ReportFormat::Csv => {
            let mut out = String::from("algorithm,npart,modularity,acc,fileWeighted,fileAverage,packageWeighted,packageAverage,variance,distribution\n");
            for r in results {
                let q = &r.quality;
                let dist: Vec<String> = q.distribution_percent.iter().map(u32::to_string).collect();
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},\"[{}]\"",
                    r.algorithm.label(),
                    r.k,
                    q.modularity_ratio,
                    q.avg_clustering_coefficient,
                    q.file_weighted_accuracy,
                    q.file_average_accuracy,
                    q.package_weighted_accuracy,
                    q.package_average_accuracy,
                    q.partition_variance,
                    dist.join(",")
                );
            }
            out
        }
        ReportFormat::Tex => {
            let mut out = String::from("\\begin{tabular}{|r|r|r|r|r|r|r|r|r|l|}\n\\hline\n");
            let _ = writeln!(out, "{} \\\\\n\\hline", PARTITION_COLUMNS.join(" & ").replace('%', "\\%"));
            for (i, r) in results.iter().enumerate() {
                if i % 2 == 1 {
                    out.push_str("\\rowcolor{gray!30}\n");
                }
                let _ = writeln!(out, "{} \\\\", partition_row(r).join(" & "));
            }
            out.push_str("\\hline\n\\end{tabular}\n");
            out
        }
        ReportFormat::Html => {
            let mut body = String::from("<h2>Partitionings</h2>\n<table>\n<tr>");
            for c in PARTITION_COLUMNS {
                let _ = write!(body, "<th>{c}</th>");
            }
            body.push_str("</tr>\n");
            for r in results {
                body.push_str("<tr>");
                for cell in partition_row(r) {
                    let _ = write!(body, "<td>{cell}</td>");
                }
                body.push_str("</tr>\n");
            }
            body.push_str("</table>\n");
            for r in results {
                let mut files: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
                let mut packages: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
                for (id, &p) in &r.assignment {
                    if let Some(n) = graph.node(id).filter(|n| !n.is_stub()) {
                        files.entry(&n.file_uri).or_default().push(p);
                        packages.entry(&n.package_name).or_default().push(p);
                    }
                }
                let _ = writeln!(body, "<details>\n<summary>{} {} partitions</summary>", r.algorithm.label(), r.k);
                for (title, units) in [("Package", packages), ("File", files)] {
                    let _ = writeln!(
                        body,
                        "<table>\n<tr><th>{title}</th><th>Dominant partition</th><th>Share %</th></tr>"
                    );
                    for (unit, p, share) in dominant(units) {
                        let name = if unit.is_empty() { "(default)".to_string() } else { html_escape(&unit) };
                        let _ = writeln!(body, "<tr><td>{name}</td><td>{p}</td><td>{share:.0}</td></tr>");
                    }
                    body.push_str("</table>\n");
                }
                body.push_str("</details>\n");
            }
            html_page(&format!("{project} partitioning"), &body)
        }
    }
}
