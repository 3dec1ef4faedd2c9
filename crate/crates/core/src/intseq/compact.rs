use crate::bits::BitVec;
use crate::error::{Error, Result};

/// Fixed-width bit packing at the bit length of the largest representable
/// value (`universe - 1`).
#[derive(Debug, Clone)]
pub struct Compact {
    bits: BitVec,
    width: usize,
    len: usize,
}

/// Bits per value for a universe: the bit length of `universe - 1`, at least 1.
pub fn width_for(universe: u64) -> usize {
    let max = universe.saturating_sub(1);
    (64 - max.leading_zeros() as usize).max(1)
}

impl Compact {
    pub fn encode(values: &[u64], universe: u64) -> Self {
        let width = width_for(universe);
        let mut bits = BitVec::with_capacity(values.len() * width);
        for &v in values {
            bits.push_bits(v, width);
        }
        Self {
            bits,
            width,
            len: values.len(),
        }
    }

    pub fn from_payload(len: usize, universe: u64, bits: BitVec) -> Result<Self> {
        let width = width_for(universe);
        let expected = len.checked_mul(width);
        if expected != Some(bits.len()) {
            return Err(Error::CorruptContainer(format!(
                "compact payload has {} bits, expected {} x {}",
                bits.len(),
                len,
                width
            )));
        }
        Ok(Self { bits, width, len })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn payload(&self) -> &BitVec {
        &self.bits
    }

    #[inline]
    pub fn access(&self, i: usize) -> u64 {
        self.bits.get_bits(i * self.width, self.width)
    }

    pub fn cursor(&self, i: usize) -> CompactCursor<'_> {
        CompactCursor { seq: self, pos: i }
    }
}

#[derive(Debug, Clone)]
pub struct CompactCursor<'a> {
    seq: &'a Compact,
    pos: usize,
}

impl Iterator for CompactCursor<'_> {
    type Item = u64;

    #[inline]
    fn next(&mut self) -> Option<u64> {
        if self.pos >= self.seq.len {
            return None;
        }
        let v = self.seq.access(self.pos);
        self.pos += 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.seq.len - self.pos.min(self.seq.len);
        (n, Some(n))
    }
}
