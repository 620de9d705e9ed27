//! Shared layout for the binary artifact files (embeddings, graph cache,
//! checkpoints):
//!
//! ```text
//! magic[4] | version u32 | header_len u32 | header (JSON, UTF-8) | sections...
//! ```
//!
//! Each section is a `u64` element count followed by little-endian `f32` or
//! `u32` values. Readers know the section order from the header.

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};

pub(crate) struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    pub(crate) fn new(magic: &[u8; 4], version: u32, header: &impl Serialize) -> Self {
        let json = serde_json::to_vec(header).expect("header serializes");
        let mut buf = Vec::with_capacity(16 + json.len());
        buf.extend_from_slice(magic);
        buf.extend_from_slice(&version.to_le_bytes());
        buf.extend_from_slice(&(json.len() as u32).to_le_bytes());
        buf.extend_from_slice(&json);
        Writer { buf }
    }

    pub(crate) fn f32s(&mut self, values: impl ExactSizeIterator<Item = f32>) -> &mut Self {
        self.buf.extend_from_slice(&(values.len() as u64).to_le_bytes());
        for v in values {
            self.buf.extend_from_slice(&v.to_le_bytes());
        }
        self
    }

    pub(crate) fn u32s(&mut self, values: impl ExactSizeIterator<Item = u32>) -> &mut Self {
        self.buf.extend_from_slice(&(values.len() as u64).to_le_bytes());
        for v in values {
            self.buf.extend_from_slice(&v.to_le_bytes());
        }
        self
    }

    pub(crate) fn finish(self) -> Vec<u8> {
        self.buf
    }
}

pub(crate) struct Reader<'a> {
    what: &'static str,
    rest: &'a [u8],
}

impl<'a> Reader<'a> {
    /// Checks magic and version and parses the JSON header.
    pub(crate) fn open<H: DeserializeOwned>(
        bytes: &'a [u8],
        magic: &[u8; 4],
        version: u32,
        what: &'static str,
    ) -> Result<(H, Self)> {
        let mut r = Reader { what, rest: bytes };
        if r.take(4)? != magic {
            return Err(r.corrupt("bad magic"));
        }
        let found = r.u32()?;
        if found != version {
            return Err(Error::Version {
                what,
                found,
                expected: version,
            });
        }
        let len = r.u32()? as usize;
        let header = serde_json::from_slice(r.take(len)?)?;
        Ok((header, r))
    }

    fn corrupt(&self, reason: impl Into<String>) -> Error {
        Error::Corrupt {
            what: self.what,
            reason: reason.into(),
        }
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.rest.len() < n {
            return Err(self.corrupt("unexpected end of file"));
        }
        let (head, tail) = self.rest.split_at(n);
        self.rest = tail;
        Ok(head)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn section_len(&mut self, expected: usize) -> Result<usize> {
        let n = u64::from_le_bytes(self.take(8)?.try_into().unwrap()) as usize;
        if n != expected {
            return Err(self.corrupt(format!("section has {n} values, header implies {expected}")));
        }
        Ok(n)
    }

    pub(crate) fn f32s(&mut self, expected: usize) -> Result<Vec<f32>> {
        let n = self.section_len(expected)?;
        let raw = self.take(n.checked_mul(4).ok_or_else(|| self.corrupt("overflow"))?)?;
        Ok(raw
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
            .collect())
    }

    pub(crate) fn u32s(&mut self, expected: usize) -> Result<Vec<u32>> {
        let n = self.section_len(expected)?;
        let raw = self.take(n.checked_mul(4).ok_or_else(|| self.corrupt("overflow"))?)?;
        Ok(raw
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
            .collect())
    }

    pub(crate) fn finish(self) -> Result<()> {
        if self.rest.is_empty() {
            Ok(())
        } else {
            Err(self.corrupt(format!("{} trailing bytes", self.rest.len())))
        }
    }
}
