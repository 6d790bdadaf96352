//! Ranks the most important code entities under every metric.
//!
//!     cargo run --example crucial [-- <java-root> [n]]

use std::path::PathBuf;

use scg::crucial::{crucial, CrucialConfig, Metric};

fn main() -> scg::Result<()> {
    let mut args = std::env::args_os().skip(1);
    let root = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/corpus"));
    let n = args.next().and_then(|s| s.to_str()?.parse().ok()).unwrap_or(3);
    let (graph, _) = scg::java::extract_project(&root)?;
    let report = crucial(&graph, n, &CrucialConfig::default());
    for metric in Metric::ALL {
        let ranking = report.ranking(metric).expect("every metric is reported");
        println!("{}", metric.title());
        for e in &ranking.entries {
            println!("  {:<50} {:.4}", e.id, e.score);
        }
    }
    if report.katz_alpha != CrucialConfig::default().katz.alpha {
        println!("Katz alpha reduced to {}", report.katz_alpha);
    }
    Ok(())
}
