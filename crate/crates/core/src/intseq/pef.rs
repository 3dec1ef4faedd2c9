//! Partitioned Elias-Fano with fixed-size partitions.
//!
//! The sequence is cut into chunks of [`PARTITION_LEN`] values. Each chunk is
//! Elias-Fano coded relative to its first value, with a local universe of
//! `last - first + 1`, so dense runs inside a chunk cost few bits no matter
//! how large the global universe grows.
//!
//! Payload: for every partition its first and last value at
//! `width_for(universe)` bits each, then the partitions' Elias-Fano payloads
//! back to back.

use super::compact::width_for;
use super::ef::{payload_bits_for, EfCursor, EliasFano};
use crate::bits::BitVec;
use crate::error::{Error, Result};

pub const PARTITION_LEN: usize = 256;

#[derive(Debug, Clone)]
pub struct PartitionedEliasFano {
    firsts: Vec<u64>,
    lasts: Vec<u64>,
    parts: Vec<EliasFano>,
    len: usize,
    universe: u64,
}

impl PartitionedEliasFano {
    /// `values` must be non-decreasing and below `universe`.
    pub fn encode(values: &[u64], universe: u64) -> Self {
        let mut firsts = Vec::new();
        let mut lasts = Vec::new();
        let mut parts = Vec::new();
        let mut local = Vec::with_capacity(PARTITION_LEN);
        for chunk in values.chunks(PARTITION_LEN) {
            let first = chunk[0];
            let last = chunk[chunk.len() - 1];
            local.clear();
            local.extend(chunk.iter().map(|&v| v - first));
            firsts.push(first);
            lasts.push(last);
            parts.push(EliasFano::encode(&local, last - first + 1));
        }
        Self {
            firsts,
            lasts,
            parts,
            len: values.len(),
            universe,
        }
    }

    pub fn from_payload(len: usize, universe: u64, payload: &BitVec) -> Result<Self> {
        let corrupt = |what: &str| Error::CorruptContainer(format!("partitioned Elias-Fano {what}"));
        let width = width_for(universe);
        let count = len.div_ceil(PARTITION_LEN);
        let meta_bits = count
            .checked_mul(2 * width)
            .filter(|&b| b <= payload.len())
            .ok_or_else(|| corrupt("metadata truncated"))?;
        let mut firsts = Vec::with_capacity(count);
        let mut lasts = Vec::with_capacity(count);
        for k in 0..count {
            let first = payload.get_bits(2 * width * k, width);
            let last = payload.get_bits(2 * width * k + width, width);
            if last < first || last >= universe || firsts.last().is_some_and(|&p| first < p) {
                return Err(corrupt("metadata out of order"));
            }
            firsts.push(first);
            lasts.push(last);
        }
        let mut parts = Vec::with_capacity(count);
        let mut offset = meta_bits;
        for k in 0..count {
            let n = PARTITION_LEN.min(len - k * PARTITION_LEN);
            let local_universe = lasts[k] - firsts[k] + 1;
            let bits = payload_bits_for(n, local_universe);
            if offset + bits > payload.len() {
                return Err(corrupt("partition truncated"));
            }
            let slice = payload.slice(offset, bits);
            parts.push(EliasFano::from_payload(n, local_universe, &slice)?);
            offset += bits;
        }
        if offset != payload.len() {
            return Err(corrupt("payload has trailing bits"));
        }
        Ok(Self {
            firsts,
            lasts,
            parts,
            len,
            universe,
        })
    }

    pub fn payload_bits(&self) -> usize {
        let meta = self.parts.len() * 2 * width_for(self.universe);
        meta + self.parts.iter().map(EliasFano::payload_bits).sum::<usize>()
    }

    pub fn write_payload(&self, out: &mut BitVec) {
        let width = width_for(self.universe);
        for (&first, &last) in self.firsts.iter().zip(&self.lasts) {
            out.push_bits(first, width);
            out.push_bits(last, width);
        }
        for part in &self.parts {
            part.write_payload(out);
        }
    }

    #[inline]
    pub fn access(&self, i: usize) -> u64 {
        let k = i / PARTITION_LEN;
        self.firsts[k] + self.parts[k].access(i % PARTITION_LEN)
    }

    /// Position of `x` in the sorted range `[i, j)`, searching only inside
    /// the one partition that can hold it.
    pub fn find(&self, i: usize, j: usize, x: u64, threshold: usize) -> Option<usize> {
        if i >= j {
            return None;
        }
        let first_part = i / PARTITION_LEN;
        let last_part = (j - 1) / PARTITION_LEN;
        let lasts = &self.lasts[first_part..=last_part];
        let k = first_part + lasts.partition_point(|&last| last < x);
        if k > last_part {
            return None;
        }
        let start = k * PARTITION_LEN;
        let lo = i.max(start);
        let hi = j.min(start + self.parts[k].len());
        let base = self.firsts[k];
        if x < base {
            return None;
        }
        let part = &self.parts[k];
        super::search_sorted(
            lo - start,
            hi - start,
            x - base,
            threshold,
            |p| part.access(p),
            |p| part.cursor(p),
        )
        .map(|p| p + start)
    }

    pub fn cursor(&self, i: usize) -> PefCursor<'_> {
        let k = i / PARTITION_LEN;
        let inner = self.parts.get(k).map(|p| p.cursor(i % PARTITION_LEN));
        PefCursor {
            seq: self,
            part: k,
            inner,
            remaining: self.len.saturating_sub(i),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PefCursor<'a> {
    seq: &'a PartitionedEliasFano,
    part: usize,
    inner: Option<EfCursor<'a>>,
    remaining: usize,
}

impl Iterator for PefCursor<'_> {
    type Item = u64;

    #[inline]
    fn next(&mut self) -> Option<u64> {
        if self.remaining == 0 {
            return None;
        }
        loop {
            if let Some(v) = self.inner.as_mut().and_then(Iterator::next) {
                self.remaining -= 1;
                return Some(self.seq.firsts[self.part] + v);
            }
            self.part += 1;
            self.inner = Some(self.seq.parts[self.part].cursor(0));
        }
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining, Some(self.remaining))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partitions_cover_sequence() {
        let values: Vec<u64> = (0..1000u64).map(|i| i * 3 + (i / 300) * 100_000).collect();
        let u = values.last().unwrap() + 1;
        let pef = PartitionedEliasFano::encode(&values, u);
        assert_eq!(pef.parts.len(), 4);
        for (i, &v) in values.iter().enumerate() {
            assert_eq!(pef.access(i), v);
        }
        assert_eq!(pef.cursor(250).collect::<Vec<_>>(), values[250..]);
        let mut payload = BitVec::new();
        pef.write_payload(&mut payload);
        assert_eq!(payload.len(), pef.payload_bits());
        let back = PartitionedEliasFano::from_payload(1000, u, &payload).unwrap();
        assert_eq!(back.cursor(0).collect::<Vec<_>>(), values);
    }

    #[test]
    fn find_across_partition_boundary() {
        // One sorted range straddling partitions 0 and 1.
        let mut values: Vec<u64> = vec![5; 200];
        values.extend(6..106);
        let pef = PartitionedEliasFano::encode(&values, 106);
        // [199, 300) holds 5, 6, ..., 105.
        for x in 5..106u64 {
            let want = Some(199 + (x - 5) as usize);
            assert_eq!(pef.find(199, 300, x, 16), want, "x = {x}");
            assert_eq!(pef.find(199, 300, x, 0), want, "x = {x}");
        }
        assert_eq!(pef.find(199, 300, 4, 16), None);
        assert_eq!(pef.find(199, 300, 200, 16), None);
    }
}
