//! Binary and JSON forms of stored trees.
//!
//! Binary layout, all integers little-endian:
//!
//! ```text
//! magic      b"SPARCMT1"
//! spec_len   u32, then spec_len bytes of CmtSpec as JSON
//! pad_len    u64   zero bytes appended to the block before splitting
//! layers     u32
//!   per layer: n u32, symbol_len u32, then n entries of
//!              tag u8 (0 = erased, 1 = known) followed by symbol_len bytes if known
//! root_len   u32, then root_len digests of 32 bytes
//! ```

use serde::{Deserialize, Serialize};

use super::hash::{Digest, DIGEST_BYTES};
use super::{CmtError, CmtSpec};
use crate::codes::{LayerWord, Symbol};

const MAGIC: &[u8; 8] = b"SPARCMT1";

/// A possibly partial tree as exchanged on disk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeFile {
    pub spec: CmtSpec,
    pub pad_len: u64,
    pub layers: Vec<LayerWord>,
    pub root: Vec<Digest>,
}

pub(crate) struct Reader<'a> {
    buf: &'a [u8],
}

impl<'a> Reader<'a> {
    pub(crate) fn new(buf: &'a [u8]) -> Self {
        Self { buf }
    }

    pub(crate) fn take(&mut self, n: usize) -> Result<&'a [u8], CmtError> {
        if self.buf.len() < n {
            return Err(CmtError::Format("unexpected end of input".into()));
        }
        let (h, t) = self.buf.split_at(n);
        self.buf = t;
        Ok(h)
    }

    pub(crate) fn u8(&mut self) -> Result<u8, CmtError> {
        Ok(self.take(1)?[0])
    }

    pub(crate) fn u32(&mut self) -> Result<u32, CmtError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    pub(crate) fn u64(&mut self) -> Result<u64, CmtError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    pub(crate) fn digest(&mut self) -> Result<Digest, CmtError> {
        Ok(Digest::from_slice(self.take(DIGEST_BYTES)?).unwrap())
    }

    pub(crate) fn finish(&self) -> Result<(), CmtError> {
        if self.buf.is_empty() {
            Ok(())
        } else {
            Err(CmtError::Format(format!("{} trailing bytes", self.buf.len())))
        }
    }
}

pub(crate) fn put_u32(out: &mut Vec<u8>, x: usize) {
    out.extend_from_slice(&u32::try_from(x).expect("fits in u32").to_le_bytes());
}

impl TreeFile {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = MAGIC.to_vec();
        let spec = serde_json::to_vec(&self.spec).expect("spec serializes");
        put_u32(&mut out, spec.len());
        out.extend_from_slice(&spec);
        out.extend_from_slice(&self.pad_len.to_le_bytes());
        put_u32(&mut out, self.layers.len());
        for w in &self.layers {
            put_u32(&mut out, w.len());
            put_u32(&mut out, w.symbol_len());
            for e in w.entries() {
                match e {
                    None => out.push(0),
                    Some(s) => {
                        out.push(1);
                        out.extend_from_slice(s.as_bytes());
                    }
                }
            }
        }
        put_u32(&mut out, self.root.len());
        for d in &self.root {
            out.extend_from_slice(&d.0);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, CmtError> {
        let mut r = Reader::new(bytes);
        if r.take(MAGIC.len())? != MAGIC {
            return Err(CmtError::Format("bad magic".into()));
        }
        let spec_len = r.u32()? as usize;
        let spec: CmtSpec =
            serde_json::from_slice(r.take(spec_len)?).map_err(|e| CmtError::Format(format!("spec: {e}")))?;
        let pad_len = r.u64()?;
        let n_layers = r.u32()? as usize;
        let mut layers = Vec::with_capacity(n_layers.min(64));
        for _ in 0..n_layers {
            let n = r.u32()? as usize;
            let len = r.u32()? as usize;
            let mut entries = Vec::with_capacity(n.min(bytes.len()));
            for _ in 0..n {
                entries.push(match r.u8()? {
                    0 => None,
                    1 => Some(Symbol(r.take(len)?.to_vec())),
                    t => return Err(CmtError::Format(format!("bad entry tag {t}"))),
                });
            }
            layers.push(LayerWord::new(len, entries)?);
        }
        let root_len = r.u32()? as usize;
        let root = (0..root_len).map(|_| r.digest()).collect::<Result<_, _>>()?;
        r.finish()?;
        Ok(Self {
            spec,
            pad_len,
            layers,
            root,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tree serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, CmtError> {
        serde_json::from_str(s).map_err(|e| CmtError::Format(e.to_string()))
    }
}
