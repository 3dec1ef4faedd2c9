//! Compressed integer sequences.
//!
//! An [`EncodedSequence`] wraps one of four codecs behind a uniform surface:
//! random `access`, `find` inside a sorted sub-range, and sequential cursors.
//! Elias-Fano based codecs need non-decreasing input; trie node levels are
//! made non-decreasing with [`make_monotone`] before encoding.

mod compact;
mod ef;
mod pef;
mod vbyte;

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

pub use compact::{width_for, Compact};
pub use ef::EliasFano;
pub use pef::{PartitionedEliasFano, PARTITION_LEN};
pub use vbyte::{VByte, BLOCK_LEN};

use crate::bits::BitVec;
use crate::error::{Error, Result};

/// Ranges at most this long are searched by a linear scan.
pub const DEFAULT_FIND_THRESHOLD: usize = 16;

/// Serialized record header: tag, length, universe and payload bit count.
pub const HEADER_BITS: usize = 8 * (1 + 8 + 8 + 8);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Codec {
    Compact = 0,
    EliasFano = 1,
    PartitionedEliasFano = 2,
    VByte = 3,
}

impl Codec {
    pub const ALL: [Codec; 4] = [
        Codec::Compact,
        Codec::EliasFano,
        Codec::PartitionedEliasFano,
        Codec::VByte,
    ];

    /// Whether the codec only accepts non-decreasing sequences.
    pub fn requires_monotone(self) -> bool {
        matches!(self, Codec::EliasFano | Codec::PartitionedEliasFano)
    }

    pub fn tag(self) -> u8 {
        self as u8
    }

    pub fn from_tag(tag: u8) -> Option<Self> {
        Self::ALL.get(tag as usize).copied()
    }
}

impl fmt::Display for Codec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Codec::Compact => "compact",
            Codec::EliasFano => "ef",
            Codec::PartitionedEliasFano => "pef",
            Codec::VByte => "vbyte",
        })
    }
}

impl FromStr for Codec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "compact" => Ok(Codec::Compact),
            "ef" => Ok(Codec::EliasFano),
            "pef" => Ok(Codec::PartitionedEliasFano),
            "vbyte" => Ok(Codec::VByte),
            other => Err(format!("unknown codec `{other}`")),
        }
    }
}

/// An uncompressed sequence together with its universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlainSequence {
    pub values: Vec<u64>,
    pub universe: u64,
}

impl PlainSequence {
    /// Uses the smallest universe holding every value: `max + 1`, or 0 when empty.
    pub fn new(values: Vec<u64>) -> Self {
        let universe = values.iter().max().map_or(0, |&m| m + 1);
        Self { values, universe }
    }

    /// Explicit universe; checked when encoding.
    pub fn with_universe(values: Vec<u64>, universe: u64) -> Self {
        Self { values, universe }
    }
}

/// Boundaries delimiting consecutive sibling ranges of a sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeLayout {
    boundaries: Vec<u64>,
}

impl RangeLayout {
    pub fn new(boundaries: Vec<u64>) -> Result<Self> {
        if boundaries.first() != Some(&0) {
            return Err(Error::InvalidRanges("first boundary must be 0".into()));
        }
        if let Some(k) = boundaries.windows(2).position(|w| w[0] > w[1]) {
            return Err(Error::InvalidRanges(format!(
                "boundary {} decreases",
                k + 1
            )));
        }
        Ok(Self { boundaries })
    }

    /// A single range covering `len` values.
    pub fn single(len: usize) -> Self {
        Self {
            boundaries: vec![0, len as u64],
        }
    }

    pub fn boundaries(&self) -> &[u64] {
        &self.boundaries
    }

    /// Total covered length, i.e. the last boundary.
    pub fn total(&self) -> u64 {
        *self.boundaries.last().unwrap_or(&0)
    }

    pub fn ranges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.boundaries
            .windows(2)
            .map(|w| (w[0] as usize, w[1] as usize))
    }
}

/// Shifts every sibling range by the last stored value of the previous one,
/// turning a concatenation of sorted ranges into a non-decreasing sequence.
pub fn make_monotone(values: &PlainSequence, ranges: &RangeLayout) -> Result<PlainSequence> {
    if ranges.total() != values.values.len() as u64 {
        return Err(Error::InvalidRanges(format!(
            "ranges cover {} values, sequence has {}",
            ranges.total(),
            values.values.len()
        )));
    }
    let mut out = Vec::with_capacity(values.values.len());
    for (begin, end) in ranges.ranges() {
        let range = &values.values[begin..end];
        if range.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::RangeNotSorted {
                begin: begin as u64,
                end: end as u64,
            });
        }
        let offset = out.last().copied().unwrap_or(0);
        out.extend(range.iter().map(|&v| v + offset));
    }
    Ok(PlainSequence::new(out))
}

/// Inverse of [`make_monotone`].
pub fn recover_monotone(stored: &[u64], ranges: &RangeLayout) -> Vec<u64> {
    let mut out = Vec::with_capacity(stored.len());
    for (begin, end) in ranges.ranges() {
        let offset = if begin == 0 { 0 } else { stored[begin - 1] };
        out.extend(stored[begin..end].iter().map(|&v| v - offset));
    }
    out
}

/// Locates `x` in the sorted range `[lo, hi)`: binary search while the
/// window is wider than `threshold`, then a linear scan.
pub(crate) fn search_sorted<C: Iterator<Item = u64>>(
    mut lo: usize,
    mut hi: usize,
    x: u64,
    threshold: usize,
    access: impl Fn(usize) -> u64,
    cursor: impl FnOnce(usize) -> C,
) -> Option<usize> {
    while hi - lo > threshold.max(1) {
        let mid = lo + (hi - lo) / 2;
        let v = access(mid);
        if v < x {
            lo = mid + 1;
        } else if v > x {
            hi = mid;
        } else {
            return Some(mid);
        }
    }
    if lo >= hi {
        return None;
    }
    for (p, v) in (lo..hi).zip(cursor(lo)) {
        if v >= x {
            return (v == x).then_some(p);
        }
    }
    None
}

#[derive(Debug, Clone)]
enum Repr {
    Compact(Compact),
    Ef(EliasFano),
    Pef(PartitionedEliasFano),
    VByte(VByte),
}

/// An immutable compressed integer sequence.
#[derive(Debug, Clone)]
pub struct EncodedSequence {
    repr: Repr,
    len: usize,
    universe: u64,
}

impl EncodedSequence {
    pub fn encode(seq: &PlainSequence, codec: Codec) -> Result<Self> {
        let values = &seq.values;
        if let Some(&v) = values.iter().find(|&&v| v >= seq.universe) {
            return Err(Error::UniverseOverflow {
                value: v,
                universe: seq.universe,
            });
        }
        if codec.requires_monotone() {
            if let Some(k) = values.windows(2).position(|w| w[0] > w[1]) {
                return Err(Error::NonMonotoneInput { position: k + 1 });
            }
        }
        let repr = match codec {
            Codec::Compact => Repr::Compact(Compact::encode(values, seq.universe)),
            Codec::EliasFano => Repr::Ef(EliasFano::encode(values, seq.universe)),
            Codec::PartitionedEliasFano => {
                Repr::Pef(PartitionedEliasFano::encode(values, seq.universe))
            }
            Codec::VByte => Repr::VByte(VByte::encode(values, seq.universe)),
        };
        Ok(Self {
            repr,
            len: values.len(),
            universe: seq.universe,
        })
    }

    pub fn codec(&self) -> Codec {
        match self.repr {
            Repr::Compact(_) => Codec::Compact,
            Repr::Ef(_) => Codec::EliasFano,
            Repr::Pef(_) => Codec::PartitionedEliasFano,
            Repr::VByte(_) => Codec::VByte,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn universe(&self) -> u64 {
        self.universe
    }

    pub fn payload_bits(&self) -> usize {
        match &self.repr {
            Repr::Compact(c) => c.payload().len(),
            Repr::Ef(e) => e.payload_bits(),
            Repr::Pef(p) => p.payload_bits(),
            Repr::VByte(v) => v.payload_bits(),
        }
    }

    /// Header plus payload bits.
    pub fn size_bits(&self) -> usize {
        HEADER_BITS + self.payload_bits()
    }

    pub fn access(&self, i: usize) -> Result<u64> {
        if i >= self.len {
            return Err(Error::OutOfBounds {
                index: i as u64,
                len: self.len as u64,
            });
        }
        Ok(self.get(i))
    }

    /// Unchecked counterpart of [`access`](Self::access); panics past the end.
    #[inline]
    pub fn get(&self, i: usize) -> u64 {
        match &self.repr {
            Repr::Compact(c) => c.access(i),
            Repr::Ef(e) => e.access(i),
            Repr::Pef(p) => p.access(i),
            Repr::VByte(v) => v.access(i),
        }
    }

    /// Absolute position of `x` inside the sorted range `[i, j)`.
    pub fn find(&self, i: usize, j: usize, x: u64) -> Result<Option<usize>> {
        if i > j || j > self.len {
            return Err(Error::OutOfBounds {
                index: j.max(i) as u64,
                len: self.len as u64,
            });
        }
        Ok(self.find_in(i, j, x, DEFAULT_FIND_THRESHOLD))
    }

    #[inline]
    pub(crate) fn find_in(&self, i: usize, j: usize, x: u64, threshold: usize) -> Option<usize> {
        if i >= j {
            return None;
        }
        match &self.repr {
            Repr::Pef(p) => p.find(i, j, x, threshold),
            Repr::VByte(v) => v.find(i, j, x),
            _ => search_sorted(i, j, x, threshold, |p| self.get(p), |p| self.cursor(p)),
        }
    }

    pub fn cursor_at(&self, i: usize) -> Result<Cursor<'_>> {
        if i > self.len {
            return Err(Error::OutOfBounds {
                index: i as u64,
                len: self.len as u64,
            });
        }
        Ok(self.cursor(i))
    }

    #[inline]
    pub(crate) fn cursor(&self, i: usize) -> Cursor<'_> {
        match &self.repr {
            Repr::Compact(c) => Cursor::Compact(c.cursor(i)),
            Repr::Ef(e) => Cursor::Ef(e.cursor(i)),
            Repr::Pef(p) => Cursor::Pef(p.cursor(i)),
            Repr::VByte(v) => Cursor::VByte(v.cursor(i)),
        }
    }

    pub fn decode(&self) -> Vec<u64> {
        self.cursor(0).collect()
    }

    fn payload(&self) -> BitVec {
        match &self.repr {
            Repr::Compact(c) => c.payload().clone(),
            Repr::Ef(e) => {
                let mut out = BitVec::with_capacity(e.payload_bits());
                e.write_payload(&mut out);
                out
            }
            Repr::Pef(p) => {
                let mut out = BitVec::with_capacity(p.payload_bits());
                p.write_payload(&mut out);
                out
            }
            Repr::VByte(v) => {
                let mut out = BitVec::with_capacity(v.payload_bits());
                v.write_payload(&mut out);
                out
            }
        }
    }

    /// Writes the little-endian record: tag, length, universe, payload bit
    /// count, payload words.
    pub fn write_to<W: Write>(&self, out: &mut W) -> Result<()> {
        let payload = self.payload();
        out.write_all(&[self.codec().tag()])?;
        out.write_all(&(self.len as u64).to_le_bytes())?;
        out.write_all(&self.universe.to_le_bytes())?;
        out.write_all(&(payload.len() as u64).to_le_bytes())?;
        for w in payload.words() {
            out.write_all(&w.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_from<R: Read>(input: &mut R) -> Result<Self> {
        let tag = read_u8(input)?;
        let codec = Codec::from_tag(tag)
            .ok_or_else(|| Error::CorruptContainer(format!("unknown codec tag {tag}")))?;
        let len = read_u64(input)?;
        let universe = read_u64(input)?;
        let bits = read_u64(input)?;
        let len = usize::try_from(len)
            .map_err(|_| Error::CorruptContainer("sequence length overflow".into()))?;
        let bits = usize::try_from(bits)
            .map_err(|_| Error::CorruptContainer("payload size overflow".into()))?;
        let mut raw = Vec::new();
        input
            .by_ref()
            .take(bits.div_ceil(64) as u64 * 8)
            .read_to_end(&mut raw)?;
        if raw.len() != bits.div_ceil(64) * 8 {
            return Err(Error::CorruptContainer("sequence payload truncated".into()));
        }
        let words: Vec<u64> = raw
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        let canonical = BitVec::from_words(words.clone(), bits);
        if canonical.words() != words.as_slice() {
            return Err(Error::CorruptContainer("non-zero padding bits".into()));
        }
        if len > 0 && universe == 0 {
            return Err(Error::CorruptContainer("empty universe".into()));
        }
        let repr = match codec {
            Codec::Compact => Repr::Compact(Compact::from_payload(len, universe, canonical)?),
            Codec::EliasFano => Repr::Ef(EliasFano::from_payload(len, universe, &canonical)?),
            Codec::PartitionedEliasFano => {
                Repr::Pef(PartitionedEliasFano::from_payload(len, universe, &canonical)?)
            }
            Codec::VByte => Repr::VByte(VByte::from_payload(len, universe, &canonical)?),
        };
        Ok(Self {
            repr,
            len,
            universe,
        })
    }
}

pub(crate) fn read_u8<R: Read>(input: &mut R) -> Result<u8> {
    let mut b = [0u8; 1];
    input.read_exact(&mut b).map_err(truncated)?;
    Ok(b[0])
}

pub(crate) fn read_u64<R: Read>(input: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    input.read_exact(&mut b).map_err(truncated)?;
    Ok(u64::from_le_bytes(b))
}

fn truncated(e: std::io::Error) -> Error {
    if e.kind() == std::io::ErrorKind::UnexpectedEof {
        Error::CorruptContainer("unexpected end of data".into())
    } else {
        Error::Io(e)
    }
}

/// Sequential reader over an [`EncodedSequence`]; `None` once exhausted.
#[derive(Debug, Clone)]
pub enum Cursor<'a> {
    Compact(compact::CompactCursor<'a>),
    Ef(ef::EfCursor<'a>),
    Pef(pef::PefCursor<'a>),
    VByte(vbyte::VByteCursor<'a>),
}

impl Iterator for Cursor<'_> {
    type Item = u64;

    #[inline]
    fn next(&mut self) -> Option<u64> {
        match self {
            Cursor::Compact(c) => c.next(),
            Cursor::Ef(c) => c.next(),
            Cursor::Pef(c) => c.next(),
            Cursor::VByte(c) => c.next(),
        }
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        match self {
            Cursor::Compact(c) => c.size_hint(),
            Cursor::Ef(c) => c.size_hint(),
            Cursor::Pef(c) => c.size_hint(),
            Cursor::VByte(c) => c.size_hint(),
        }
    }
}
