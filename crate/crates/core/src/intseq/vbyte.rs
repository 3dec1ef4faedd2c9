//! Variable-byte coding in blocks of [`BLOCK_LEN`] integers.
//!
//! Every block keeps a skip entry (its first value and the byte offset of the
//! rest of the block), so `access` and `find` decode at most one block. When
//! the whole sequence is non-decreasing the block bodies hold d-gaps,
//! otherwise they hold the values themselves.
//!
//! Payload: sorted flag (8 bits) | body byte count (64 bits) |
//! per block: first value (`width_for(universe)` bits), body offset
//! (bit length of the body byte count) | body bytes.

use super::compact::width_for;
use crate::bits::BitVec;
use crate::error::{Error, Result};

pub const BLOCK_LEN: usize = 128;

#[derive(Debug, Clone)]
pub struct VByte {
    firsts: Vec<u64>,
    offsets: Vec<usize>,
    body: Vec<u8>,
    sorted: bool,
    len: usize,
    universe: u64,
}

fn put_varint(out: &mut Vec<u8>, mut v: u64) {
    while v >= 0x80 {
        out.push((v as u8) | 0x80);
        v >>= 7;
    }
    out.push(v as u8);
}

#[inline]
fn get_varint(bytes: &[u8], pos: &mut usize) -> u64 {
    let mut v = 0u64;
    let mut shift = 0;
    loop {
        let b = bytes[*pos];
        *pos += 1;
        v |= ((b & 0x7f) as u64) << shift;
        if b < 0x80 {
            return v;
        }
        shift += 7;
    }
}

fn offset_width(body_len: usize) -> usize {
    width_for(body_len as u64 + 1)
}

impl VByte {
    pub fn encode(values: &[u64], universe: u64) -> Self {
        let sorted = values.windows(2).all(|w| w[0] <= w[1]);
        let mut firsts = Vec::with_capacity(values.len().div_ceil(BLOCK_LEN));
        let mut offsets = Vec::with_capacity(firsts.capacity());
        let mut body = Vec::new();
        for block in values.chunks(BLOCK_LEN) {
            firsts.push(block[0]);
            offsets.push(body.len());
            for w in block.windows(2) {
                put_varint(&mut body, if sorted { w[1] - w[0] } else { w[1] });
            }
        }
        Self {
            firsts,
            offsets,
            body,
            sorted,
            len: values.len(),
            universe,
        }
    }

    pub fn from_payload(len: usize, universe: u64, payload: &BitVec) -> Result<Self> {
        let corrupt = |what: &str| Error::CorruptContainer(format!("vbyte {what}"));
        if payload.len() < 72 {
            return Err(corrupt("header truncated"));
        }
        let sorted = match payload.get_bits(0, 8) {
            0 => false,
            1 => true,
            _ => return Err(corrupt("bad sorted flag")),
        };
        let body_len = payload.get_bits(8, 64) as usize;
        let blocks = len.div_ceil(BLOCK_LEN);
        let vw = width_for(universe);
        let ow = offset_width(body_len);
        let skip_bits = blocks
            .checked_mul(vw + ow)
            .ok_or_else(|| corrupt("length overflow"))?;
        let expected = body_len
            .checked_mul(8)
            .and_then(|b| b.checked_add(72 + skip_bits));
        if expected != Some(payload.len()) {
            return Err(corrupt("payload size mismatch"));
        }
        let mut pos = 72;
        let mut firsts = Vec::with_capacity(blocks);
        let mut offsets = Vec::with_capacity(blocks);
        for _ in 0..blocks {
            firsts.push(payload.get_bits(pos, vw));
            offsets.push(payload.get_bits(pos + vw, ow) as usize);
            pos += vw + ow;
        }
        let body: Vec<u8> = (0..body_len)
            .map(|k| payload.get_bits(pos + 8 * k, 8) as u8)
            .collect();
        let seq = Self {
            firsts,
            offsets,
            body,
            sorted,
            len,
            universe,
        };
        seq.validate().map_err(|_| corrupt("body does not decode"))?;
        Ok(seq)
    }

    /// Checks that every block body decodes within bounds.
    fn validate(&self) -> std::result::Result<(), ()> {
        let mut pos = 0;
        for b in 0..self.firsts.len() {
            if self.offsets[b] != pos || self.firsts[b] >= self.universe.max(1) {
                return Err(());
            }
            let n = BLOCK_LEN.min(self.len - b * BLOCK_LEN);
            for _ in 1..n {
                loop {
                    let byte = *self.body.get(pos).ok_or(())?;
                    pos += 1;
                    if byte < 0x80 {
                        break;
                    }
                }
            }
        }
        if pos == self.body.len() {
            Ok(())
        } else {
            Err(())
        }
    }

    pub fn payload_bits(&self) -> usize {
        72 + self.firsts.len() * (width_for(self.universe) + offset_width(self.body.len()))
            + 8 * self.body.len()
    }

    pub fn write_payload(&self, out: &mut BitVec) {
        out.push_bits(self.sorted as u64, 8);
        out.push_bits(self.body.len() as u64, 64);
        let vw = width_for(self.universe);
        let ow = offset_width(self.body.len());
        for (&first, &offset) in self.firsts.iter().zip(&self.offsets) {
            out.push_bits(first, vw);
            out.push_bits(offset as u64, ow);
        }
        for &b in &self.body {
            out.push_bits(b as u64, 8);
        }
    }

    pub fn access(&self, i: usize) -> u64 {
        self.cursor(i).next().expect("position checked by caller")
    }

    /// Position of `x` in the sorted range `[i, j)`. Blocks starting inside
    /// the range are skipped by their first value; one block is decoded.
    pub fn find(&self, i: usize, j: usize, x: u64) -> Option<usize> {
        if i >= j {
            return None;
        }
        let bi = i / BLOCK_LEN;
        let bj = (j - 1) / BLOCK_LEN;
        let inner = &self.firsts[bi + 1..=bj];
        let q = bi + inner.partition_point(|&f| f <= x);
        let start = if q == bi { i } else { q * BLOCK_LEN };
        for (p, v) in (start..j).zip(self.cursor(start)) {
            if v == x {
                return Some(p);
            }
            if v > x {
                break;
            }
        }
        None
    }

    pub fn cursor(&self, i: usize) -> VByteCursor<'_> {
        let mut cursor = VByteCursor {
            seq: self,
            pos: i,
            byte: 0,
            value: 0,
        };
        if i < self.len {
            let b = i / BLOCK_LEN;
            cursor.pos = b * BLOCK_LEN;
            for _ in 0..i % BLOCK_LEN {
                cursor.next();
            }
        }
        cursor
    }
}

#[derive(Debug, Clone)]
pub struct VByteCursor<'a> {
    seq: &'a VByte,
    pos: usize,
    byte: usize,
    value: u64,
}

impl Iterator for VByteCursor<'_> {
    type Item = u64;

    #[inline]
    fn next(&mut self) -> Option<u64> {
        if self.pos >= self.seq.len {
            return None;
        }
        if self.pos.is_multiple_of(BLOCK_LEN) {
            let b = self.pos / BLOCK_LEN;
            self.value = self.seq.firsts[b];
            self.byte = self.seq.offsets[b];
        } else {
            let v = get_varint(&self.seq.body, &mut self.byte);
            self.value = if self.seq.sorted { self.value + v } else { v };
        }
        self.pos += 1;
        Some(self.value)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.seq.len - self.pos.min(self.seq.len);
        (n, Some(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn varint_roundtrip() {
        let mut buf = Vec::new();
        for v in [0, 1, 127, 128, 300, u64::MAX] {
            put_varint(&mut buf, v);
        }
        let mut pos = 0;
        for v in [0, 1, 127, 128, 300, u64::MAX] {
            assert_eq!(get_varint(&buf, &mut pos), v);
        }
        assert_eq!(pos, buf.len());
    }

    #[test]
    fn sorted_and_unsorted_blocks() {
        let sorted: Vec<u64> = (0..1000).map(|i| i * 5).collect();
        let vb = VByte::encode(&sorted, 5000);
        assert!(vb.sorted);
        assert_eq!(vb.access(777), 3885);
        assert_eq!(vb.find(100, 900, 3885), Some(777));
        assert_eq!(vb.find(100, 900, 3886), None);

        let unsorted: Vec<u64> = (0..1000).map(|i| (i * 7919) % 1000).collect();
        let vb = VByte::encode(&unsorted, 1000);
        assert!(!vb.sorted);
        assert!(unsorted.iter().enumerate().all(|(i, &v)| vb.access(i) == v));
    }
}
