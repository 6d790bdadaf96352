//! Prints the project summary as text and JSON.
//!
//!     cargo run --example summary

use std::path::PathBuf;

use scg::export::{report, ReportFormat};

fn main() -> scg::Result<()> {
    let root = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/corpus"));
    let (graph, _) = scg::java::extract_project(&root)?;
    let stats = scg::summary::summarize(&graph);
    print!("{}", report::render_summary(graph.project_name(), &stats, ReportFormat::Txt));
    println!("{}", report::render_summary(graph.project_name(), &stats, ReportFormat::Json));
    Ok(())
}
