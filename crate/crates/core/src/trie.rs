//! Three-level tries over one permutation of the triple set.
//!
//! Level 0 holds the dense first components implicitly: only its pointer
//! sequence is stored, with `pointers[i]..pointers[i + 1]` delimiting the
//! children of first component `i` in the level 1 node sequence. Level 1
//! stores second components and pointers into level 2, which stores third
//! components. Nodes inside one sibling range are strictly increasing.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::intseq::{
    make_monotone, read_u64, read_u8, Codec, Cursor, EncodedSequence, PlainSequence, RangeLayout,
    DEFAULT_FIND_THRESHOLD,
};
use crate::triple::{Permutation, TripleId, TriplePattern, WILDCARD};

/// Codecs for the sequences of one trie.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodecPlan {
    pub pointers: Codec,
    pub level1_nodes: Codec,
    pub level2_nodes: Codec,
}

impl CodecPlan {
    /// Partitioned Elias-Fano node levels and Elias-Fano pointers, except
    /// for the objects of SPO which are packed with Compact.
    pub fn default_for(permutation: Permutation) -> Self {
        let level2_nodes = match permutation {
            Permutation::Spo => Codec::Compact,
            _ => Codec::PartitionedEliasFano,
        };
        Self {
            pointers: Codec::EliasFano,
            level1_nodes: Codec::PartitionedEliasFano,
            level2_nodes,
        }
    }

    pub fn uniform(codec: Codec) -> Self {
        Self {
            pointers: codec,
            level1_nodes: codec,
            level2_nodes: codec,
        }
    }
}

/// A node sequence. Codecs that need monotone input store the sequence
/// shifted by [`make_monotone`]; values are recovered relative to the start
/// of their sibling range.
#[derive(Debug, Clone)]
pub(crate) struct NodeLevel {
    pub(crate) seq: EncodedSequence,
}

impl NodeLevel {
    pub(crate) fn encode(values: Vec<u64>, ranges: &[u64], codec: Codec) -> Result<Self> {
        let plain = PlainSequence::new(values);
        let seq = if codec.requires_monotone() {
            let ranges = RangeLayout::new(ranges.to_vec())?;
            EncodedSequence::encode(&make_monotone(&plain, &ranges)?, codec)?
        } else {
            EncodedSequence::encode(&plain, codec)?
        };
        Ok(Self { seq })
    }

    #[inline]
    pub(crate) fn monotone(&self) -> bool {
        self.seq.codec().requires_monotone()
    }

    #[inline]
    pub(crate) fn offset(&self, begin: usize) -> u64 {
        if self.monotone() && begin > 0 {
            self.seq.get(begin - 1)
        } else {
            0
        }
    }

    #[inline]
    pub(crate) fn value_at(&self, begin: usize, pos: usize) -> u64 {
        self.seq.get(pos) - self.offset(begin)
    }

    #[inline]
    pub(crate) fn find(&self, begin: usize, end: usize, x: u64, threshold: usize) -> Option<usize> {
        if begin >= end {
            return None;
        }
        let target = x.checked_add(self.offset(begin))?;
        self.seq.find_in(begin, end, target, threshold)
    }

    pub(crate) fn cursor(&self, range_begin: usize, pos: usize) -> NodeCursor<'_> {
        let monotone = self.monotone();
        NodeCursor {
            inner: self.seq.cursor(pos),
            monotone,
            offset: self.offset(range_begin),
            last: if monotone && pos > 0 {
                self.seq.get(pos - 1)
            } else {
                0
            },
        }
    }

    pub(crate) fn values(&self, ranges: &[u64]) -> Vec<u64> {
        let stored = self.seq.decode();
        if !self.monotone() {
            return stored;
        }
        let mut out = Vec::with_capacity(stored.len());
        for w in ranges.windows(2) {
            let (b, e) = (w[0] as usize, w[1] as usize);
            let off = if b == 0 { 0 } else { stored[b - 1] };
            out.extend(stored[b..e].iter().map(|&v| v - off));
        }
        out
    }
}

/// Sequential reader over a node level that undoes the monotone shift.
#[derive(Debug, Clone)]
pub(crate) struct NodeCursor<'a> {
    inner: Cursor<'a>,
    monotone: bool,
    offset: u64,
    last: u64,
}

impl NodeCursor<'_> {
    /// Next node; `range_start` marks the first node of a sibling range.
    #[inline]
    pub(crate) fn next(&mut self, range_start: bool) -> u64 {
        let stored = self.inner.next().expect("node cursor within bounds");
        if !self.monotone {
            return stored;
        }
        if range_start {
            self.offset = self.last;
        }
        self.last = stored;
        stored - self.offset
    }
}

/// Average and maximum number of children per node at one level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelStats {
    pub level: u8,
    pub avg_children: f64,
    pub max_children: u64,
    pub parents: u64,
}

/// Decoded level arrays, mostly for inspection and tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelArrays {
    pub level0_pointers: Vec<u64>,
    pub level1_nodes: Vec<u64>,
    pub level1_pointers: Vec<u64>,
    pub level2_nodes: Vec<u64>,
}

/// A trie over one permutation of a triple set.
#[derive(Debug, Clone)]
pub struct PermutedTrie {
    permutation: Permutation,
    first_level_count: u64,
    level0_pointers: EncodedSequence,
    level1_nodes: NodeLevel,
    level1_pointers: EncodedSequence,
    level2_nodes: NodeLevel,
    find_threshold: usize,
}

impl PermutedTrie {
    /// Builds a trie from triples sorted in the permutation's component
    /// order, whose first components are exactly `0..n`.
    pub fn build(triples: &[TripleId], permutation: Permutation, plan: CodecPlan) -> Result<Self> {
        if let Some(t) = triples.first() {
            if t.first != 0 {
                return Err(Error::NonDenseFirstLevel {
                    expected: 0,
                    found: t.first,
                });
            }
        }
        for (k, w) in triples.windows(2).enumerate() {
            match w[0].cmp(&w[1]) {
                std::cmp::Ordering::Less => {}
                std::cmp::Ordering::Equal => return Err(Error::DuplicateTriple { position: k + 1 }),
                std::cmp::Ordering::Greater => return Err(Error::UnsortedInput { position: k + 1 }),
            }
            if w[1].first > w[0].first + 1 {
                return Err(Error::NonDenseFirstLevel {
                    expected: w[0].first + 1,
                    found: w[1].first,
                });
            }
        }

        let mut level0 = vec![0u64];
        let mut level1 = Vec::new();
        let mut level1_ptrs = vec![0u64];
        let mut level2 = Vec::with_capacity(triples.len());
        for (k, t) in triples.iter().enumerate() {
            let new_first = k == 0 || t.first != triples[k - 1].first;
            let new_second = new_first || t.second != triples[k - 1].second;
            if new_first && k > 0 {
                level0.push(level1.len() as u64);
            }
            if new_second {
                if k > 0 {
                    level1_ptrs.push(level2.len() as u64);
                }
                level1.push(t.second);
            }
            level2.push(t.third);
        }
        if !triples.is_empty() {
            level0.push(level1.len() as u64);
            level1_ptrs.push(level2.len() as u64);
        }
        let first_level_count = level0.len() as u64 - 1;

        let level1_nodes = NodeLevel::encode(level1, &level0, plan.level1_nodes)?;
        let level2_nodes = NodeLevel::encode(level2, &level1_ptrs, plan.level2_nodes)?;
        Ok(Self {
            permutation,
            first_level_count,
            level0_pointers: EncodedSequence::encode(&PlainSequence::new(level0), plan.pointers)?,
            level1_nodes,
            level1_pointers: EncodedSequence::encode(
                &PlainSequence::new(level1_ptrs),
                plan.pointers,
            )?,
            level2_nodes,
            find_threshold: DEFAULT_FIND_THRESHOLD,
        })
    }

    pub fn permutation(&self) -> Permutation {
        self.permutation
    }

    pub fn first_level_count(&self) -> u64 {
        self.first_level_count
    }

    pub fn num_triples(&self) -> u64 {
        self.level2_nodes.seq.len() as u64
    }

    /// Number of distinct (first, second) pairs.
    pub fn num_pairs(&self) -> u64 {
        self.level1_nodes.seq.len() as u64
    }

    pub fn find_threshold(&self) -> usize {
        self.find_threshold
    }

    /// Ranges up to `threshold` long are searched linearly, longer ones by
    /// binary search.
    pub fn set_find_threshold(&mut self, threshold: usize) {
        self.find_threshold = threshold;
    }

    pub fn codec_plan(&self) -> CodecPlan {
        CodecPlan {
            pointers: self.level0_pointers.codec(),
            level1_nodes: self.level1_nodes.seq.codec(),
            level2_nodes: self.level2_nodes.seq.codec(),
        }
    }

    /// The four stored sequences with their names.
    pub fn sequences(&self) -> [(&'static str, &EncodedSequence); 4] {
        [
            ("level0.pointers", &self.level0_pointers),
            ("level1.nodes", &self.level1_nodes.seq),
            ("level1.pointers", &self.level1_pointers),
            ("level2.nodes", &self.level2_nodes.seq),
        ]
    }

    /// Serialized size in bits.
    pub fn size_bits(&self) -> usize {
        8 + 64
            + self
                .sequences()
                .iter()
                .map(|(_, s)| s.size_bits())
                .sum::<usize>()
    }

    pub fn arrays(&self) -> LevelArrays {
        let level0_pointers = self.level0_pointers.decode();
        let level1_pointers = self.level1_pointers.decode();
        LevelArrays {
            level1_nodes: self.level1_nodes.values(&level0_pointers),
            level2_nodes: self.level2_nodes.values(&level1_pointers),
            level0_pointers,
            level1_pointers,
        }
    }

    #[inline]
    fn pointer_pair(seq: &EncodedSequence, i: usize) -> (usize, usize) {
        let mut c = seq.cursor(i);
        let begin = c.next().expect("pointer in bounds") as usize;
        let end = c.next().expect("pointer in bounds") as usize;
        (begin, end)
    }

    /// Level 1 range holding the children of a first component.
    #[inline]
    pub fn children(&self, first: u64) -> Option<(usize, usize)> {
        (first < self.first_level_count)
            .then(|| Self::pointer_pair(&self.level0_pointers, first as usize))
    }

    pub fn fan_out(&self, first: u64) -> Option<u64> {
        self.children(first).map(|(b, e)| (e - b) as u64)
    }

    /// Matches a pattern given in this trie's component order. The first
    /// component must be bound; when the second is a wildcard the third
    /// must be too. `(?, ?, ?)` scans the whole trie.
    pub fn select(&self, pattern: TriplePattern) -> Result<TrieIter<'_>> {
        let TriplePattern {
            first,
            second,
            third,
        } = pattern;
        if first == WILDCARD {
            if second == WILDCARD && third == WILDCARD {
                return Ok(self.scan_all());
            }
            return Err(Error::UnsupportedShape(pattern.to_string()));
        }
        if second == WILDCARD && third != WILDCARD {
            return Err(Error::UnsupportedShape(pattern.to_string()));
        }
        let (begin, end) = self.children(first).ok_or(Error::PrefixNotFound)?;
        if second == WILDCARD {
            return Ok(self.scan(first, begin, end, None));
        }
        let j = self
            .level1_nodes
            .find(begin, end, second, self.find_threshold)
            .ok_or(Error::PrefixNotFound)?;
        if third == WILDCARD {
            return Ok(self.scan(first, begin, end, Some((j, second))));
        }
        let (b, e) = Self::pointer_pair(&self.level1_pointers, j);
        let hit = self
            .level2_nodes
            .find(b, e, third, self.find_threshold)
            .map(|_| TripleId::new(first, second, third));
        Ok(TrieIter(Inner::Single(hit)))
    }

    /// Every triple in sorted order.
    pub fn iter(&self) -> TrieIter<'_> {
        self.scan_all()
    }

    fn scan_all(&self) -> TrieIter<'_> {
        if self.first_level_count == 0 {
            return TrieIter::empty();
        }
        let (begin, end) = Self::pointer_pair(&self.level0_pointers, 0);
        let mut it = self.scan(0, begin, end, None);
        if let Inner::Scan(s) = &mut it.0 {
            s.level1_end = self.level1_nodes.seq.len();
            s.level0_pointers = Some(self.level0_pointers.cursor(2));
        }
        it
    }

    /// Iterates level 1 positions `begin..end` of `first`, or only the
    /// position `fixed.0` whose node is `fixed.1`.
    fn scan(&self, first: u64, begin: usize, end: usize, fixed: Option<(usize, u64)>) -> TrieIter<'_> {
        let (start, stop, second, level1_nodes) = match fixed {
            Some((j, second)) => (j, j + 1, second, None),
            None => (begin, end, 0, Some(self.level1_nodes.cursor(begin, begin))),
        };
        let mut level1_pointers = self.level1_pointers.cursor(start);
        let level2_start = level1_pointers.next().expect("pointer in bounds") as usize;
        TrieIter(Inner::Scan(Box::new(ScanState {
            first,
            first_begin: begin,
            first_end: end,
            level0_pointers: None,
            level1_pos: start,
            level1_end: stop,
            second,
            level1_nodes,
            level1_pointers,
            level2_begin: level2_start,
            level2_pos: level2_start,
            level2_end: level2_start,
            level2_nodes: self.level2_nodes.cursor(level2_start, level2_start),
        })))
    }

    /// All `(s, p, o)` for a subject and object, by running `find` for the
    /// object under every predicate child of the subject. SPO tries only.
    pub fn enumerate(&self, subject: u64, object: u64) -> EnumerateIter<'_> {
        let (begin, end) = self.children(subject).unwrap_or((0, 0));
        let level2_begin = if begin < end {
            self.level1_pointers.get(begin) as usize
        } else {
            0
        };
        EnumerateIter {
            trie: self,
            subject,
            object,
            begin,
            pos: begin,
            end,
            level1_nodes: (begin < end).then(|| self.level1_nodes.cursor(begin, begin)),
            level1_pointers: self.level1_pointers.cursor((begin + 1).min(self.level1_pointers.len())),
            level2_begin,
        }
    }

    /// Position of `child` among the level 1 children of `parent`.
    pub fn map(&self, parent: u64, child: u64) -> Result<u64> {
        let (begin, end) = self
            .children(parent)
            .ok_or(Error::ChildNotFound { parent, child })?;
        self.level1_nodes
            .find(begin, end, child, self.find_threshold)
            .map(|p| (p - begin) as u64)
            .ok_or(Error::ChildNotFound { parent, child })
    }

    /// The child of `parent` at local `position`; inverse of [`map`](Self::map).
    pub fn unmap(&self, parent: u64, position: u64) -> Result<u64> {
        let (begin, end) = self.children(parent).ok_or(Error::OutOfBounds {
            index: parent,
            len: self.first_level_count,
        })?;
        if position >= (end - begin) as u64 {
            return Err(Error::OutOfBounds {
                index: position,
                len: (end - begin) as u64,
            });
        }
        Ok(self.unmap_unchecked(begin, position))
    }

    #[inline]
    pub(crate) fn unmap_unchecked(&self, begin: usize, position: u64) -> u64 {
        self.level1_nodes.value_at(begin, begin + position as usize)
    }

    /// Children per node at level 1 (children of first components) or
    /// level 2 (children of (first, second) pairs).
    pub fn level_stats(&self, level: u8) -> Result<LevelStats> {
        let pointers = match level {
            1 => &self.level0_pointers,
            2 => &self.level1_pointers,
            other => return Err(Error::InvalidLevel(other)),
        };
        let mut max = 0u64;
        let mut prev = None;
        for p in pointers.cursor(0) {
            if let Some(q) = prev {
                max = max.max(p - q);
            }
            prev = Some(p);
        }
        let parents = pointers.len().saturating_sub(1) as u64;
        let children = prev.unwrap_or(0);
        Ok(LevelStats {
            level,
            avg_children: if parents == 0 {
                0.0
            } else {
                children as f64 / parents as f64
            },
            max_children: max,
            parents,
        })
    }

    /// The triple stored at level 2 position `pos`, in trie order.
    pub fn triple_at(&self, pos: u64) -> Result<TripleId> {
        let n = self.num_triples();
        if pos >= n {
            return Err(Error::OutOfBounds { index: pos, len: n });
        }
        let j = last_at_most(&self.level1_pointers, self.num_pairs() as usize, pos);
        let f = last_at_most(&self.level0_pointers, self.first_level_count as usize, j as u64);
        let level1_begin = self.level0_pointers.get(f);
        let level2_begin = self.level1_pointers.get(j);
        Ok(TripleId::new(
            f as u64,
            self.level1_nodes.value_at(level1_begin as usize, j),
            self.level2_nodes.value_at(level2_begin as usize, pos as usize),
        ))
    }

    pub fn write_to<W: Write>(&self, out: &mut W) -> Result<()> {
        out.write_all(&[self.permutation.tag()])?;
        out.write_all(&self.first_level_count.to_le_bytes())?;
        for (_, seq) in self.sequences() {
            seq.write_to(out)?;
        }
        Ok(())
    }

    pub fn read_from<R: Read>(input: &mut R) -> Result<Self> {
        let tag = read_u8(input)?;
        let permutation = Permutation::from_tag(tag)
            .ok_or_else(|| Error::CorruptContainer(format!("unknown permutation tag {tag}")))?;
        let first_level_count = read_u64(input)?;
        let level0_pointers = EncodedSequence::read_from(input)?;
        let level1_nodes = NodeLevel {
            seq: EncodedSequence::read_from(input)?,
        };
        let level1_pointers = EncodedSequence::read_from(input)?;
        let level2_nodes = NodeLevel {
            seq: EncodedSequence::read_from(input)?,
        };
        let trie = Self {
            permutation,
            first_level_count,
            level0_pointers,
            level1_nodes,
            level1_pointers,
            level2_nodes,
            find_threshold: DEFAULT_FIND_THRESHOLD,
        };
        trie.validate()?;
        Ok(trie)
    }

    /// Structural checks on a loaded trie: pointer sequences start at 0,
    /// have non-empty ranges and end at the child level length.
    fn validate(&self) -> Result<()> {
        let check = |seq: &EncodedSequence, parents: usize, children: usize, what: &str| {
            let corrupt = || Error::CorruptContainer(format!("{} {what}", self.permutation));
            if seq.len() != parents + 1 {
                return Err(corrupt());
            }
            let mut prev = None;
            for p in seq.cursor(0) {
                match prev {
                    None if p != 0 => return Err(corrupt()),
                    Some(q) if p <= q => return Err(corrupt()),
                    _ => {}
                }
                prev = Some(p);
            }
            if prev != Some(children as u64) {
                return Err(corrupt());
            }
            Ok(())
        };
        let n = usize::try_from(self.first_level_count)
            .map_err(|_| Error::CorruptContainer("first level count overflow".into()))?;
        if n == 0 {
            let empty = self.level1_nodes.seq.is_empty() && self.level2_nodes.seq.is_empty();
            if !empty || self.level0_pointers.len() != 1 || self.level1_pointers.len() != 1 {
                return Err(Error::CorruptContainer("empty trie has nodes".into()));
            }
            return Ok(());
        }
        check(&self.level0_pointers, n, self.level1_nodes.seq.len(), "level 0 pointers")?;
        check(
            &self.level1_pointers,
            self.level1_nodes.seq.len(),
            self.level2_nodes.seq.len(),
            "level 1 pointers",
        )
    }
}

/// Largest index `i < count` with `seq[i] <= target` for a non-decreasing `seq`.
fn last_at_most(seq: &EncodedSequence, count: usize, target: u64) -> usize {
    let (mut lo, mut hi) = (0usize, count);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if seq.get(mid) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

#[derive(Debug, Clone)]
struct ScanState<'a> {
    first: u64,
    first_begin: usize,
    first_end: usize,
    /// Present for full scans: yields the end of each following first range.
    level0_pointers: Option<Cursor<'a>>,
    level1_pos: usize,
    level1_end: usize,
    second: u64,
    /// Absent when the second component is fixed by the pattern.
    level1_nodes: Option<NodeCursor<'a>>,
    level1_pointers: Cursor<'a>,
    level2_begin: usize,
    level2_pos: usize,
    level2_end: usize,
    level2_nodes: NodeCursor<'a>,
}

impl ScanState<'_> {
    #[inline]
    fn next(&mut self) -> Option<TripleId> {
        while self.level2_pos == self.level2_end {
            if self.level1_pos == self.level1_end {
                return None;
            }
            while self.level1_pos == self.first_end {
                let ptrs = self.level0_pointers.as_mut()?;
                self.first += 1;
                self.first_begin = self.first_end;
                self.first_end = ptrs.next()? as usize;
            }
            if let Some(nodes) = self.level1_nodes.as_mut() {
                self.second = nodes.next(self.level1_pos == self.first_begin);
            }
            self.level1_pos += 1;
            self.level2_begin = self.level2_end;
            self.level2_end = self.level1_pointers.next()? as usize;
        }
        let third = self
            .level2_nodes
            .next(self.level2_pos == self.level2_begin);
        self.level2_pos += 1;
        Some(TripleId::new(self.first, self.second, third))
    }
}

#[derive(Debug, Clone)]
enum Inner<'a> {
    Empty,
    Single(Option<TripleId>),
    Scan(Box<ScanState<'a>>),
}

/// Triples matched by [`PermutedTrie::select`], in trie order.
#[derive(Debug, Clone)]
pub struct TrieIter<'a>(Inner<'a>);

impl TrieIter<'_> {
    pub fn empty() -> Self {
        TrieIter(Inner::Empty)
    }
}

impl Iterator for TrieIter<'_> {
    type Item = TripleId;

    #[inline]
    fn next(&mut self) -> Option<TripleId> {
        match &mut self.0 {
            Inner::Empty => None,
            Inner::Single(t) => t.take(),
            Inner::Scan(s) => s.next(),
        }
    }
}

/// Triples matched by [`PermutedTrie::enumerate`].
#[derive(Debug, Clone)]
pub struct EnumerateIter<'a> {
    trie: &'a PermutedTrie,
    subject: u64,
    object: u64,
    begin: usize,
    pos: usize,
    end: usize,
    level1_nodes: Option<NodeCursor<'a>>,
    level1_pointers: Cursor<'a>,
    level2_begin: usize,
}

impl Iterator for EnumerateIter<'_> {
    type Item = TripleId;

    #[inline]
    fn next(&mut self) -> Option<TripleId> {
        while self.pos < self.end {
            let predicate = self.level1_nodes.as_mut()?.next(self.pos == self.begin);
            let j = self.level2_begin;
            let k = self.level1_pointers.next()? as usize;
            self.level2_begin = k;
            self.pos += 1;
            if self
                .trie
                .level2_nodes
                .find(j, k, self.object, self.trie.find_threshold)
                .is_some()
            {
                return Some(TripleId::new(self.subject, predicate, self.object));
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const SAMPLE: [(u64, u64, u64); 11] = [
        (0, 0, 2),
        (0, 0, 3),
        (0, 1, 0),
        (1, 0, 4),
        (1, 2, 0),
        (1, 2, 1),
        (2, 0, 2),
        (2, 1, 0),
        (3, 2, 1),
        (3, 2, 2),
        (4, 2, 4),
    ];

    fn sorted_in(perm: Permutation) -> Vec<TripleId> {
        let mut v: Vec<_> = SAMPLE.iter().map(|&t| perm.permute(t.into())).collect();
        v.sort_unstable();
        v
    }

    fn trie(perm: Permutation) -> PermutedTrie {
        PermutedTrie::build(&sorted_in(perm), perm, CodecPlan::default_for(perm)).unwrap()
    }

    fn ids(v: &[(u64, u64, u64)]) -> Vec<TripleId> {
        v.iter().map(|&t| t.into()).collect()
    }

    #[test]
    fn build_rejects_bad_input() {
        let plan = CodecPlan::default_for(Permutation::Spo);
        let unsorted = ids(&[(0, 1, 0), (0, 0, 0)]);
        assert!(matches!(
            PermutedTrie::build(&unsorted, Permutation::Spo, plan),
            Err(Error::UnsortedInput { position: 1 })
        ));
        let dup = ids(&[(0, 0, 0), (0, 0, 0)]);
        assert!(matches!(
            PermutedTrie::build(&dup, Permutation::Spo, plan),
            Err(Error::DuplicateTriple { position: 1 })
        ));
        let gap = ids(&[(0, 0, 0), (2, 0, 0)]);
        assert!(matches!(
            PermutedTrie::build(&gap, Permutation::Spo, plan),
            Err(Error::NonDenseFirstLevel { expected: 1, found: 2 })
        ));
        let late = ids(&[(1, 0, 0)]);
        assert!(matches!(
            PermutedTrie::build(&late, Permutation::Spo, plan),
            Err(Error::NonDenseFirstLevel { expected: 0, found: 1 })
        ));
    }

    #[test]
    fn single_triple() {
        for codec in Codec::ALL {
            let t = PermutedTrie::build(&ids(&[(0, 0, 0)]), Permutation::Spo, CodecPlan::uniform(codec))
                .unwrap();
            let a = t.arrays();
            assert_eq!(a.level0_pointers, [0, 1]);
            assert_eq!(a.level1_pointers, [0, 1]);
            assert_eq!(a.level1_nodes, [0]);
            assert_eq!(a.level2_nodes, [0]);
        }
    }

    #[test]
    fn select_and_prefix_errors() {
        let spo = trie(Permutation::Spo);
        let got: Vec<_> = spo.select(TriplePattern::new(1, 2, WILDCARD)).unwrap().collect();
        assert_eq!(got, ids(&[(1, 2, 0), (1, 2, 1)]));
        let got: Vec<_> = spo
            .select(TriplePattern::new(1, WILDCARD, WILDCARD))
            .unwrap()
            .collect();
        assert_eq!(got, ids(&[(1, 0, 4), (1, 2, 0), (1, 2, 1)]));
        assert!(matches!(
            spo.select(TriplePattern::new(4, 0, WILDCARD)),
            Err(Error::PrefixNotFound)
        ));
        assert!(matches!(
            spo.select(TriplePattern::new(9, WILDCARD, WILDCARD)),
            Err(Error::PrefixNotFound)
        ));
        assert!(matches!(
            spo.select(TriplePattern::new(WILDCARD, 1, WILDCARD)),
            Err(Error::UnsupportedShape(_))
        ));
        assert_eq!(spo.select(TriplePattern::new(3, 2, 2)).unwrap().count(), 1);
        assert_eq!(spo.select(TriplePattern::new(3, 2, 0)).unwrap().count(), 0);
        assert_eq!(spo.iter().collect::<Vec<_>>(), sorted_in(Permutation::Spo));
    }

    #[test]
    fn enumerate_subject_object() {
        let spo = trie(Permutation::Spo);
        assert_eq!(spo.enumerate(1, 0).collect::<Vec<_>>(), ids(&[(1, 2, 0)]));
        assert_eq!(spo.enumerate(0, 5).count(), 0);
        assert_eq!(spo.enumerate(3, 1).collect::<Vec<_>>(), ids(&[(3, 2, 1)]));
        assert_eq!(spo.enumerate(42, 1).count(), 0);
    }

    #[test]
    fn map_unmap_on_osp() {
        let osp = trie(Permutation::Osp);
        assert_eq!(osp.map(1, 3).unwrap(), 1);
        assert_eq!(osp.map(2, 0).unwrap(), 0);
        assert_eq!(osp.map(2, 2).unwrap(), 1);
        assert!(matches!(osp.map(1, 2), Err(Error::ChildNotFound { .. })));
        assert_eq!(osp.unmap(1, 1).unwrap(), 3);
        assert_eq!(osp.unmap(2, 0).unwrap(), 0);
        assert_eq!(osp.unmap(1, 0).unwrap(), 1);
        assert!(matches!(osp.unmap(1, 2), Err(Error::OutOfBounds { .. })));
    }

    #[test]
    fn level_stats_sample() {
        let spo = trie(Permutation::Spo);
        let s = spo.level_stats(1).unwrap();
        assert_eq!((s.avg_children, s.max_children), (1.6, 2));
        let osp = trie(Permutation::Osp);
        let s = osp.level_stats(2).unwrap();
        assert_eq!((s.avg_children, s.max_children), (1.0, 1));
        assert!(spo.level_stats(3).is_err());
    }

    #[test]
    fn triple_at_walks_all_positions() {
        for perm in Permutation::ALL {
            let t = trie(perm);
            let all: Vec<_> = (0..t.num_triples()).map(|i| t.triple_at(i).unwrap()).collect();
            assert_eq!(all, sorted_in(perm));
            assert!(t.triple_at(11).is_err());
        }
    }

    #[test]
    fn serialization_roundtrip() {
        let t = trie(Permutation::Pos);
        let mut bytes = Vec::new();
        t.write_to(&mut bytes).unwrap();
        let back = PermutedTrie::read_from(&mut bytes.as_slice()).unwrap();
        assert_eq!(back.arrays(), t.arrays());
        let mut again = Vec::new();
        back.write_to(&mut again).unwrap();
        assert_eq!(bytes, again);
    }
}
