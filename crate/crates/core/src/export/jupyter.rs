//! Self-contained notebook bundle: SCG data, helper package, starter notebook.
//!
//! Layout of `<out>/<project>-jupyter/`:
//!
//! ```text
//! README.md
//! starter.ipynb
//! scg/__init__.py
//! <project>/.semanticgraphs/...   verbatim copy of the workspace records
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::error::{IoContext, Result};
use crate::store;

const HELPER: &str = include_str!("assets/scg/__init__.py");
const README: &str = include_str!("assets/README.md");
const CELLS: [&str; 3] = [
    include_str!("assets/notebook/01_load.py"),
    include_str!("assets/notebook/02_partition.py"),
    include_str!("assets/notebook/03_outstanding.py"),
];

/// Directory name of the bundle for `project`.
pub fn bundle_dir_name(project: &str) -> String {
    format!("{project}-jupyter")
}

fn code_cell(source: &str) -> Value {
    let mut lines: Vec<String> = source.split_inclusive('\n').map(str::to_string).collect();
    if let Some(last) = lines.last_mut() {
        *last = last.trim_end_matches('\n').to_string();
    }
    json!({
        "cell_type": "code",
        "execution_count": null,
        "metadata": {},
        "outputs": [],
        "source": lines,
    })
}

/// The starter notebook as nbformat 4 JSON.
pub fn starter_notebook(project: &str) -> String {
    let mut cells = vec![json!({
        "cell_type": "markdown",
        "metadata": {},
        "source": [format!("# {project}\n"), "\n", "Load the Semantic Code Graph, join a partitioning and find methods placed apart from their declaring type."],
    })];
    cells.extend(CELLS.iter().map(|c| code_cell(&c.replace("{{PROJECT}}", project))));
    let doc = json!({
        "cells": cells,
        "metadata": {
            "kernelspec": {"display_name": "Python 3", "language": "python", "name": "python3"},
            "language_info": {"name": "python"},
        },
        "nbformat": 4,
        "nbformat_minor": 5,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("notebook serialization is infallible");
    s.push('\n');
    s
}

fn write(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).at(parent)?;
    }
    fs::write(path, contents).at(path)
}

/// Writes the bundle for `workspace` under `out_dir` and returns its path.
/// Fails with [`crate::Error::MissingData`] when the workspace has no SCG data.
pub fn export_jupyter_bundle(workspace: &Path, out_dir: &Path) -> Result<PathBuf> {
    let records = store::read_records(workspace)?;
    let project = records
        .iter()
        .map(|(_, r)| r.project_name.as_str())
        .find(|n| !n.is_empty())
        .map(str::to_string)
        .unwrap_or_else(|| store::default_project_name(workspace));
    // the notebook opens the data by name, so both use the sanitized stem
    let stem = super::file_stem(&project);
    let bundle = out_dir.join(bundle_dir_name(&stem));
    let data = bundle.join(&stem).join(store::DATA_DIR);
    if data.exists() {
        fs::remove_dir_all(&data).at(&data)?;
    }
    let src = store::data_dir(workspace);
    for (path, _) in &records {
        let rel = path.strip_prefix(&src).expect("record paths stay under the data dir");
        let bytes = fs::read(path).at(path)?;
        write(&data.join(rel), &bytes)?;
    }
    write(&bundle.join("scg/__init__.py"), HELPER.as_bytes())?;
    write(&bundle.join("starter.ipynb"), starter_notebook(&stem).as_bytes())?;
    let readme = README.replace("{{PROJECT}}", &stem).replace("{{BUNDLE}}", &bundle_dir_name(&stem));
    write(&bundle.join("README.md"), readme.as_bytes())?;
    Ok(bundle)
}
