//! Length-prefixed binary record codec (`.semanticgraphdb`).
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! file    := "SCGB" version:u16 flags:u16 record*
//! record  := len:u32 payload[len]
//! payload := 0x01 project:str file_uri:str                              (header, first)
//!          | 0x02 id:str kind:str display:str package:str file_uri:str
//!                 location loc:u32 nprops:u32 (key:str value:str)*      (node)
//!          | 0x03 from:str to:str type:str location                     (edge)
//! str      := len:u32 utf8[len]
//! location := 0x00 | 0x01 start_line:u32 start_col:u32 end_line:u32 end_col:u32
//! ```

use super::FileRecord;
use crate::model::{EdgeKind, Location, NodeKind, SemanticEdge, SemanticNode};

pub const MAGIC: &[u8; 4] = b"SCGB";
pub const VERSION: u16 = 1;

const TAG_HEADER: u8 = 0x01;
const TAG_NODE: u8 = 0x02;
const TAG_EDGE: u8 = 0x03;

pub fn encode(record: &FileRecord) -> Vec<u8> {
    let mut out = Vec::with_capacity(64 + record.nodes.len() * 96);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&0u16.to_le_bytes());

    let mut payload = Vec::new();
    payload.push(TAG_HEADER);
    put_str(&mut payload, &record.project_name);
    put_str(&mut payload, &record.file_uri);
    flush(&mut out, &mut payload);

    for node in &record.nodes {
        payload.push(TAG_NODE);
        put_str(&mut payload, &node.id);
        put_str(&mut payload, node.kind.as_str());
        put_str(&mut payload, &node.display_name);
        put_str(&mut payload, &node.package_name);
        put_str(&mut payload, &node.file_uri);
        put_location(&mut payload, node.location);
        payload.extend_from_slice(&node.loc.to_le_bytes());
        payload.extend_from_slice(&(node.properties.len() as u32).to_le_bytes());
        for (k, v) in &node.properties {
            put_str(&mut payload, k);
            put_str(&mut payload, v);
        }
        flush(&mut out, &mut payload);
    }
    for edge in &record.edges {
        payload.push(TAG_EDGE);
        put_str(&mut payload, &edge.from);
        put_str(&mut payload, &edge.to);
        put_str(&mut payload, edge.kind.as_str());
        put_location(&mut payload, edge.location);
        flush(&mut out, &mut payload);
    }
    out
}

fn flush(out: &mut Vec<u8>, payload: &mut Vec<u8>) {
    out.extend_from_slice(&(payload.len() as u32).to_le_bytes());
    out.append(payload);
}

fn put_str(buf: &mut Vec<u8>, s: &str) {
    buf.extend_from_slice(&(s.len() as u32).to_le_bytes());
    buf.extend_from_slice(s.as_bytes());
}

fn put_location(buf: &mut Vec<u8>, loc: Option<Location>) {
    match loc {
        None => buf.push(0),
        Some(l) => {
            buf.push(1);
            for v in [l.start_line, l.start_col, l.end_line, l.end_col] {
                buf.extend_from_slice(&v.to_le_bytes());
            }
        }
    }
}

/// Decode failure with the absolute byte offset where it was detected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeError {
    pub offset: u64,
    pub message: String,
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, DecodeError> {
        Err(DecodeError { offset: self.pos as u64, message: message.into() })
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8], DecodeError> {
        if self.buf.len() - self.pos < n {
            return self.err(format!("unexpected end of data (wanted {n} bytes)"));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8, DecodeError> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<u16, DecodeError> {
        let b = self.take(2)?;
        Ok(u16::from_le_bytes([b[0], b[1]]))
    }

    fn u32(&mut self) -> Result<u32, DecodeError> {
        let b = self.take(4)?;
        Ok(u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
    }

    fn string(&mut self) -> Result<String, DecodeError> {
        let len = self.u32()? as usize;
        let start = self.pos;
        let bytes = self.take(len)?;
        match std::str::from_utf8(bytes) {
            Ok(s) => Ok(s.to_string()),
            Err(e) => Err(DecodeError {
                offset: (start + e.valid_up_to()) as u64,
                message: "invalid UTF-8 in string".into(),
            }),
        }
    }

    fn location(&mut self) -> Result<Option<Location>, DecodeError> {
        match self.u8()? {
            0 => Ok(None),
            1 => Ok(Some(Location::new(self.u32()?, self.u32()?, self.u32()?, self.u32()?))),
            other => {
                self.pos -= 1;
                self.err(format!("bad location marker {other:#04x}"))
            }
        }
    }
}

pub fn decode(buf: &[u8]) -> Result<FileRecord, DecodeError> {
    let mut cur = Cursor { buf, pos: 0 };
    if cur.take(4)? != MAGIC {
        return Err(DecodeError { offset: 0, message: "bad magic, expected SCGB".into() });
    }
    let version = cur.u16()?;
    if version != VERSION {
        return Err(DecodeError { offset: 4, message: format!("unsupported version {version}") });
    }
    let _flags = cur.u16()?;

    let mut record = FileRecord::default();
    let mut saw_header = false;
    while cur.pos < buf.len() {
        let record_start = cur.pos;
        let len = cur.u32()? as usize;
        let body_start = cur.pos;
        if buf.len() - body_start < len {
            return Err(DecodeError {
                offset: record_start as u64,
                message: format!("record length {len} runs past end of file"),
            });
        }
        let mut inner = Cursor { buf: &buf[..body_start + len], pos: body_start };
        let tag = inner.u8()?;
        match tag {
            TAG_HEADER if !saw_header => {
                record.project_name = inner.string()?;
                record.file_uri = inner.string()?;
                saw_header = true;
            }
            TAG_HEADER => return Err(DecodeError { offset: body_start as u64, message: "duplicate header".into() }),
            _ if !saw_header => {
                return Err(DecodeError { offset: body_start as u64, message: "missing header record".into() })
            }
            TAG_NODE => {
                let id = inner.string()?;
                let kind = NodeKind::parse(&inner.string()?);
                let display_name = inner.string()?;
                let package_name = inner.string()?;
                let file_uri = inner.string()?;
                let location = inner.location()?;
                let loc = inner.u32()?;
                let nprops = inner.u32()?;
                let mut properties = std::collections::BTreeMap::new();
                for _ in 0..nprops {
                    let k = inner.string()?;
                    let v = inner.string()?;
                    properties.insert(k, v);
                }
                record.nodes.push(SemanticNode {
                    id,
                    kind,
                    display_name,
                    package_name,
                    file_uri,
                    location,
                    loc,
                    properties,
                });
            }
            TAG_EDGE => {
                let from = inner.string()?;
                let to = inner.string()?;
                let kind = EdgeKind::parse(&inner.string()?);
                let location = inner.location()?;
                record.edges.push(SemanticEdge { from, to, kind, location });
            }
            other => {
                return Err(DecodeError { offset: body_start as u64, message: format!("unknown record tag {other:#04x}") })
            }
        }
        if inner.pos != body_start + len {
            return Err(DecodeError {
                offset: inner.pos as u64,
                message: format!("{} trailing bytes in record", body_start + len - inner.pos),
            });
        }
        cur.pos = body_start + len;
    }
    if !saw_header {
        return Err(DecodeError { offset: cur.pos as u64, message: "missing header record".into() });
    }
    Ok(record)
}
