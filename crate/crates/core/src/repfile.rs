//! Binary container for per-class representative packets.
//!
//! All integers are little-endian. Layout (version 1):
//!
//! ```text
//! magic        8 bytes   "CIDREPS\0"
//! version      u16       1
//! packet_len   u32
//! seed         u64
//! class_count  u32
//! per class:
//!   label_len  u16, label (UTF-8)
//!   rep_count  u32
//!   per representative:
//!     id_len   u16, source_id (UTF-8)
//!     offset   u64
//!     blob_len u32, blob bytes
//! ```
//!
//! Classes appear in sorted label order, representatives in selection order.

use std::fs;
use std::path::Path;

use crate::corpus::{RepSample, RepresentativeSet};
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 8] = b"CIDREPS\0";
pub const VERSION: u16 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepFile {
    pub packet_len: usize,
    pub seed: u64,
    pub sets: Vec<RepresentativeSet>,
}

impl RepFile {
    pub fn classes(&self) -> Vec<String> {
        self.sets.iter().map(|s| s.class_label.clone()).collect()
    }

    pub fn source_ids(&self) -> impl Iterator<Item = &str> {
        self.sets
            .iter()
            .flat_map(|s| s.samples.iter().map(|r| r.source_id.as_str()))
    }

    pub fn encode(&self) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&to_u32(self.packet_len, "packet length")?.to_le_bytes());
        out.extend_from_slice(&self.seed.to_le_bytes());
        out.extend_from_slice(&to_u32(self.sets.len(), "class count")?.to_le_bytes());
        for set in &self.sets {
            put_str(&mut out, &set.class_label)?;
            out.extend_from_slice(&to_u32(set.samples.len(), "representative count")?.to_le_bytes());
            for r in &set.samples {
                put_str(&mut out, &r.source_id)?;
                out.extend_from_slice(&r.offset.to_le_bytes());
                out.extend_from_slice(&to_u32(r.bytes.len(), "blob length")?.to_le_bytes());
                out.extend_from_slice(&r.bytes);
            }
        }
        Ok(out)
    }

    pub fn decode(data: &[u8]) -> Result<Self> {
        let mut r = Reader { data, pos: 0 };
        if r.take(8)? != MAGIC {
            return Err(Error::Format("not a representative file (bad magic)".into()));
        }
        let version = r.u16()?;
        if version != VERSION {
            return Err(Error::Format(format!("unsupported representative file version {version}")));
        }
        let packet_len = r.u32()? as usize;
        let seed = r.u64()?;
        let n_classes = r.u32()?;
        let mut sets = Vec::new();
        for _ in 0..n_classes {
            let class_label = r.string()?;
            let n = r.u32()?;
            let mut samples = Vec::new();
            for _ in 0..n {
                let source_id = r.string()?;
                let offset = r.u64()?;
                let len = r.u32()? as usize;
                samples.push(RepSample {
                    source_id,
                    offset,
                    bytes: r.take(len)?.to_vec(),
                });
            }
            sets.push(RepresentativeSet {
                class_label,
                samples,
            });
        }
        if r.pos != data.len() {
            return Err(Error::Format(format!(
                "{} trailing bytes after representative data",
                data.len() - r.pos
            )));
        }
        Ok(RepFile {
            packet_len,
            seed,
            sets,
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.encode()?).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let data = fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::decode(&data)
    }
}

fn to_u32(v: usize, what: &str) -> Result<u32> {
    u32::try_from(v).map_err(|_| Error::Format(format!("{what} {v} exceeds u32")))
}

fn put_str(out: &mut Vec<u8>, s: &str) -> Result<()> {
    let len = u16::try_from(s.len()).map_err(|_| Error::Format(format!("string too long: {s}")))?;
    out.extend_from_slice(&len.to_le_bytes());
    out.extend_from_slice(s.as_bytes());
    Ok(())
}

struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.data.len())
            .ok_or_else(|| Error::Format("truncated representative file".into()))?;
        let s = &self.data[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn string(&mut self) -> Result<String> {
        let n = self.u16()? as usize;
        String::from_utf8(self.take(n)?.to_vec())
            .map_err(|_| Error::Format("invalid UTF-8 in representative file".into()))
    }
}
