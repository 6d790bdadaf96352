//! Extracts a Java project and stores its graph records.
//!
//!     cargo run --example generate [-- <workspace>]
//!
//! Without an argument the bundled fixture corpus is extracted and the
//! records are written to a temporary directory instead.

use std::path::PathBuf;

fn main() -> scg::Result<()> {
    let (graph, report, data) = match std::env::args_os().nth(1) {
        Some(ws) => {
            let ws = PathBuf::from(ws);
            let (g, r) = scg::java::generate(&ws)?;
            (g, r, scg::store::data_dir(&ws))
        }
        None => {
            let corpus = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/corpus");
            let (g, r) = scg::java::extract_project(&corpus)?;
            let tmp = std::env::temp_dir().join("scg-generate-example");
            scg::store::save_graph(&g, &tmp)?;
            (g, r, scg::store::data_dir(&tmp))
        }
    };
    println!(
        "{}: {} nodes, {} edges from {} files ({} failed)",
        graph.project_name(),
        graph.node_count(),
        graph.edge_count(),
        report.files_parsed,
        report.files_failed
    );
    for f in &report.failures {
        println!("  {}:{}:{} {}", f.file, f.line, f.column, f.message);
    }

    // the records load back into the same graph
    let reloaded = scg::store::load_graph(data.parent().unwrap())?;
    assert_eq!(reloaded.node_count(), graph.node_count());
    println!("records in {}", data.display());
    Ok(())
}
