//! Sweeps k = 2..=n with both partitioners and prints the quality table.
//!
//!     cargo run --example partition [-- <java-root> [n]]

use std::path::PathBuf;

use scg::export::{report, ReportFormat};
use scg::partition::{partition_sweep, PartitionConfig};

fn main() -> scg::Result<()> {
    let mut args = std::env::args_os().skip(1);
    let root = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/corpus"));
    let n = args.next().and_then(|s| s.to_str()?.parse().ok()).unwrap_or(4);
    let (graph, _) = scg::java::extract_project(&root)?;
    let results = partition_sweep(&graph, n, &PartitionConfig::default())?;
    print!("{}", report::render_partition(graph.project_name(), &graph, &results, ReportFormat::Txt));

    let best = results
        .iter()
        .max_by(|a, b| a.quality.package_weighted_accuracy.total_cmp(&b.quality.package_weighted_accuracy))
        .expect("sweep is non-empty");
    println!("\nbest package agreement: {} with k = {}, cut {}", best.algorithm, best.k, best.cut);
    Ok(())
}
