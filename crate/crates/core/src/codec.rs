//! Little-endian byte buffers with a trailing CRC-32, shared by the network
//! and index file formats.

use std::io::{Read, Write};

use crate::error::{Error, Result};

#[derive(Default)]
pub(crate) struct ByteWriter {
    buf: Vec<u8>,
}

impl ByteWriter {
    pub fn new() -> Self {
        ByteWriter::default()
    }

    pub fn bytes(&mut self, b: &[u8]) {
        self.buf.extend_from_slice(b);
    }

    pub fn u8(&mut self, x: u8) {
        self.buf.push(x);
    }

    pub fn u16(&mut self, x: u16) {
        self.bytes(&x.to_le_bytes());
    }

    pub fn u32(&mut self, x: u32) {
        self.bytes(&x.to_le_bytes());
    }

    pub fn u64(&mut self, x: u64) {
        self.bytes(&x.to_le_bytes());
    }

    pub fn f64(&mut self, x: f64) {
        self.bytes(&x.to_le_bytes());
    }

    pub fn str(&mut self, s: &str) {
        self.u32(s.len() as u32);
        self.bytes(s.as_bytes());
    }

    /// Appends the checksum and writes everything out.
    pub fn finish<W: Write>(mut self, mut w: W) -> Result<()> {
        let crc = crc32fast::hash(&self.buf);
        self.u32(crc);
        w.write_all(&self.buf)?;
        w.flush()?;
        Ok(())
    }
}

pub(crate) struct ByteReader {
    buf: Vec<u8>,
    pos: usize,
}

impl ByteReader {
    /// Reads the whole source and verifies the trailing checksum.
    pub fn load<R: Read>(mut r: R) -> Result<Self> {
        let mut buf = Vec::new();
        r.read_to_end(&mut buf)?;
        if buf.len() < 4 {
            return Err(Error::Checksum);
        }
        let body = buf.len() - 4;
        let stored = u32::from_le_bytes(buf[body..].try_into().unwrap());
        if crc32fast::hash(&buf[..body]) != stored {
            return Err(Error::Checksum);
        }
        buf.truncate(body);
        Ok(ByteReader { buf, pos: 0 })
    }

    fn take(&mut self, n: usize) -> Result<&[u8]> {
        if self.pos + n > self.buf.len() {
            return Err(Error::Corrupt(format!(
                "unexpected end of data at byte {}",
                self.pos
            )));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    pub fn bytes<const N: usize>(&mut self) -> Result<[u8; N]> {
        Ok(self.take(N)?.try_into().unwrap())
    }

    pub fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    pub fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.bytes()?))
    }

    pub fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.bytes()?))
    }

    pub fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.bytes()?))
    }

    pub fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.bytes()?))
    }

    pub fn str(&mut self) -> Result<String> {
        let n = self.u32()? as usize;
        let raw = self.take(n)?.to_vec();
        String::from_utf8(raw).map_err(|_| Error::Corrupt("label is not UTF-8".into()))
    }

    /// Guards length prefixes against absurd allocations.
    pub fn count(&mut self, per_item: usize) -> Result<usize> {
        let n = self.u32()? as usize;
        if n.saturating_mul(per_item.max(1)) > self.buf.len() - self.pos {
            return Err(Error::Corrupt(format!("length prefix {n} exceeds remaining data")));
        }
        Ok(n)
    }

    pub fn finish(&self) -> Result<()> {
        if self.pos != self.buf.len() {
            return Err(Error::Corrupt(format!(
                "{} trailing bytes",
                self.buf.len() - self.pos
            )));
        }
        Ok(())
    }
}

pub(crate) fn check_header<const N: usize>(
    r: &mut ByteReader,
    magic: &[u8; N],
    what: &'static str,
    version: u16,
) -> Result<()> {
    if &r.bytes::<N>()? != magic {
        return Err(Error::Magic(what));
    }
    let found = r.u16()?;
    if found != version {
        return Err(Error::Version {
            found,
            expected: version,
        });
    }
    Ok(())
}
