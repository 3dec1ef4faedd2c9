//! Elias-Fano encoding of non-decreasing sequences.
//!
//! Each value is split into `low_width` low bits, stored verbatim, and the
//! remaining high part, stored in unary in a bit vector of
//! `len + ((universe - 1) >> low_width) + 1` bits: value `i` sets bit
//! `high(i) + i`. Random access is a `select1` on the high bits.
//!
//! The payload layout is the low-bits array followed by the high-bits array.

use crate::bits::{BitVec, SelectIndex};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct EliasFano {
    low: BitVec,
    high: BitVec,
    select: SelectIndex,
    low_width: usize,
    len: usize,
}

fn low_width_for(len: usize, universe: u64) -> usize {
    if len == 0 || universe <= len as u64 {
        0
    } else {
        63 - (universe / len as u64).leading_zeros() as usize
    }
}

fn high_len_for(len: usize, universe: u64, low_width: usize) -> usize {
    if len == 0 {
        0
    } else {
        len + (universe.saturating_sub(1) >> low_width) as usize + 1
    }
}

/// Payload size in bits for `len` values below `universe`.
pub fn payload_bits_for(len: usize, universe: u64) -> usize {
    let l = low_width_for(len, universe);
    len * l + high_len_for(len, universe, l)
}

impl EliasFano {
    /// `values` must be non-decreasing and below `universe`.
    pub fn encode(values: &[u64], universe: u64) -> Self {
        let len = values.len();
        let low_width = low_width_for(len, universe);
        let mut low = BitVec::with_capacity(len * low_width);
        let mut high = BitVec::zeros(high_len_for(len, universe, low_width));
        for (i, &v) in values.iter().enumerate() {
            low.push_bits(v, low_width);
            high.set((v >> low_width) as usize + i);
        }
        let select = SelectIndex::build(&high);
        Self {
            low,
            high,
            select,
            low_width,
            len,
        }
    }

    pub fn from_payload(len: usize, universe: u64, payload: &BitVec) -> Result<Self> {
        let low_width = low_width_for(len, universe);
        let low_bits = len
            .checked_mul(low_width)
            .ok_or_else(|| Error::CorruptContainer("Elias-Fano length overflow".into()))?;
        let high_bits = high_len_for(len, universe, low_width);
        if low_bits.checked_add(high_bits) != Some(payload.len()) {
            return Err(Error::CorruptContainer(format!(
                "Elias-Fano payload has {} bits, expected {}",
                payload.len(),
                low_bits.saturating_add(high_bits)
            )));
        }
        let low = payload.slice(0, low_bits);
        let high = payload.slice(low_bits, high_bits);
        if high.count_ones() != len {
            return Err(Error::CorruptContainer(
                "Elias-Fano high bits do not match length".into(),
            ));
        }
        let select = SelectIndex::build(&high);
        Ok(Self {
            low,
            high,
            select,
            low_width,
            len,
        })
    }

    pub fn payload_bits(&self) -> usize {
        self.low.len() + self.high.len()
    }

    pub fn write_payload(&self, out: &mut BitVec) {
        out.extend_from(&self.low);
        out.extend_from(&self.high);
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn access(&self, i: usize) -> u64 {
        let high = (self.select.select1(&self.high, i) - i) as u64;
        (high << self.low_width) | self.low.get_bits(i * self.low_width, self.low_width)
    }

    pub fn cursor(&self, i: usize) -> EfCursor<'_> {
        let mut cursor = EfCursor {
            seq: self,
            pos: i,
            word_idx: 0,
            word: 0,
        };
        if i < self.len {
            let bit = self.select.select1(&self.high, i);
            cursor.word_idx = bit / 64;
            cursor.word = self.high.words()[cursor.word_idx] & (u64::MAX << (bit % 64));
        }
        cursor
    }
}

#[derive(Debug, Clone)]
pub struct EfCursor<'a> {
    seq: &'a EliasFano,
    pos: usize,
    word_idx: usize,
    word: u64,
}

impl Iterator for EfCursor<'_> {
    type Item = u64;

    #[inline]
    fn next(&mut self) -> Option<u64> {
        if self.pos >= self.seq.len {
            return None;
        }
        while self.word == 0 {
            self.word_idx += 1;
            self.word = self.seq.high.words()[self.word_idx];
        }
        let bit = self.word_idx * 64 + self.word.trailing_zeros() as usize;
        self.word &= self.word - 1;
        let high = (bit - self.pos) as u64;
        let w = self.seq.low_width;
        let value = (high << w) | self.seq.low.get_bits(self.pos * w, w);
        self.pos += 1;
        Some(value)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.seq.len - self.pos.min(self.seq.len);
        (n, Some(n))
    }
}
