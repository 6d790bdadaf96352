//! Writes the graph as GDF, DOT, GraphML and GML, with a partition column.
//!
//!     cargo run --example export_graph [-- <java-root> <out-dir>]

use std::path::PathBuf;

use scg::export::{self, GraphFormat};
use scg::partition::{partition, Algorithm, PartitionConfig};

fn main() -> scg::Result<()> {
    let mut args = std::env::args_os().skip(1);
    let root = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/corpus"));
    let out = args.next().map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("scg-export-example"));
    let (graph, _) = scg::java::extract_project(&root)?;

    for format in GraphFormat::ALL {
        println!("{}", export::export_graph(&graph, format, &out)?.display());
    }

    // the partition export carries one integer attribute per split
    let split = partition(&graph, 3, Algorithm::MlvFm, &PartitionConfig::default())?;
    let columns = export::partition_columns(std::slice::from_ref(&split));
    let path = out.join(format!("{}-partition.gml", export::file_stem(graph.project_name())));
    export::write_output(&path, &GraphFormat::Gml.render(&graph, &columns))?;
    println!("{} (attribute {})", path.display(), export::partition_attribute(&split));
    Ok(())
}
