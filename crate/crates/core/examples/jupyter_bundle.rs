//! Builds a notebook bundle from a workspace with stored records.
//!
//!     cargo run --example jupyter_bundle [-- <workspace> <out-dir>]
//!
//! Without arguments the fixture corpus is generated into a temporary
//! workspace first.

use std::path::PathBuf;

fn main() -> scg::Result<()> {
    let mut args = std::env::args_os().skip(1);
    let tmp = std::env::temp_dir().join("scg-jupyter-example");
    let ws = match args.next() {
        Some(ws) => PathBuf::from(ws),
        None => {
            let corpus = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/corpus");
            let (graph, _) = scg::java::extract_project(&corpus)?;
            let ws = tmp.join("workspace");
            scg::store::save_graph(&graph, &ws)?;
            ws
        }
    };
    let out = args.next().map(PathBuf::from).unwrap_or_else(|| tmp.join("out"));
    let bundle = scg::export::export_jupyter_bundle(&ws, &out)?;
    println!("bundle written to {}", bundle.display());
    println!("open it with: cd {} && jupyter notebook starter.ipynb", bundle.display());
    Ok(())
}
