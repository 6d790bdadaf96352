//! Lossless JSON variant of a record file.

use serde::{Deserialize, Serialize};

use super::binary::DecodeError;
use super::FileRecord;
use crate::model::{SemanticEdge, SemanticNode};

const FORMAT_TAG: &str = "scg-json";

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct JsonRecord {
    format: String,
    version: u32,
    project_name: String,
    file_uri: String,
    nodes: Vec<SemanticNode>,
    edges: Vec<SemanticEdge>,
}

pub fn encode(record: &FileRecord) -> Vec<u8> {
    let doc = JsonRecord {
        format: FORMAT_TAG.into(),
        version: 1,
        project_name: record.project_name.clone(),
        file_uri: record.file_uri.clone(),
        nodes: record.nodes.clone(),
        edges: record.edges.clone(),
    };
    let mut out = serde_json::to_vec_pretty(&doc).expect("record serialization is infallible");
    out.push(b'\n');
    out
}

pub fn decode(buf: &[u8]) -> Result<FileRecord, DecodeError> {
    let doc: JsonRecord = serde_json::from_slice(buf).map_err(|e| DecodeError {
        offset: byte_offset(buf, e.line(), e.column()),
        message: e.to_string(),
    })?;
    if doc.format != FORMAT_TAG {
        return Err(DecodeError { offset: 0, message: format!("unexpected format tag `{}`", doc.format) });
    }
    Ok(FileRecord { project_name: doc.project_name, file_uri: doc.file_uri, nodes: doc.nodes, edges: doc.edges })
}

// serde_json reports 1-based line/column; convert back to a byte offset.
fn byte_offset(buf: &[u8], line: usize, column: usize) -> u64 {
    let mut start = 0usize;
    for _ in 1..line {
        match buf[start..].iter().position(|&b| b == b'\n') {
            Some(p) => start += p + 1,
            None => break,
        }
    }
    (start + column.saturating_sub(1)).min(buf.len()) as u64
}
