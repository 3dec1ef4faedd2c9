use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::intseq::{Codec, EncodedSequence, PlainSequence};
use crate::trie::{NodeCursor, NodeLevel};
use crate::triple::TripleId;

/// For every predicate, the sorted subjects it occurs with: a pointer
/// sequence over predicates and one concatenated subject sequence.
#[derive(Debug, Clone)]
pub struct PsStructure {
    pointers: EncodedSequence,
    subjects: NodeLevel,
}

impl PsStructure {
    /// Builds from canonical triples sorted in S, P, O order. Predicates
    /// must be dense in `0..predicates`.
    pub fn build(spo_sorted: &[TripleId], predicates: u64) -> Result<Self> {
        let mut pairs: Vec<(u64, u64)> = spo_sorted.iter().map(|t| (t.second, t.first)).collect();
        pairs.sort_unstable();
        pairs.dedup();
        let mut pointers = Vec::with_capacity(predicates as usize + 1);
        pointers.push(0u64);
        let mut subjects = Vec::with_capacity(pairs.len());
        for &(p, s) in &pairs {
            while pointers.len() as u64 <= p {
                pointers.push(subjects.len() as u64);
            }
            subjects.push(s);
        }
        while (pointers.len() as u64) < predicates + 1 {
            pointers.push(subjects.len() as u64);
        }
        let subjects = NodeLevel::encode(subjects, &pointers, Codec::PartitionedEliasFano)?;
        let pointers = EncodedSequence::encode(&PlainSequence::new(pointers), Codec::EliasFano)?;
        Ok(Self { pointers, subjects })
    }

    pub fn num_predicates(&self) -> u64 {
        self.pointers.len().saturating_sub(1) as u64
    }

    /// Total list length, i.e. the number of distinct (subject, predicate) pairs.
    pub fn num_pairs(&self) -> u64 {
        self.subjects.seq.len() as u64
    }

    pub fn size_bits(&self) -> usize {
        self.pointers.size_bits() + self.subjects.seq.size_bits()
    }

    pub fn sequences(&self) -> [(&'static str, &EncodedSequence); 2] {
        [("pointers", &self.pointers), ("subjects", &self.subjects.seq)]
    }

    /// Subjects occurring with `predicate`, in increasing order.
    pub fn subjects(&self, predicate: u64) -> PsSubjects<'_> {
        if predicate >= self.num_predicates() {
            return PsSubjects {
                cursor: None,
                begin: 0,
                pos: 0,
                end: 0,
            };
        }
        let begin = self.pointers.get(predicate as usize) as usize;
        let end = self.pointers.get(predicate as usize + 1) as usize;
        PsSubjects {
            cursor: (begin < end).then(|| self.subjects.cursor(begin, begin)),
            begin,
            pos: begin,
            end,
        }
    }

    pub fn write_to<W: Write>(&self, out: &mut W) -> Result<()> {
        self.pointers.write_to(out)?;
        self.subjects.seq.write_to(out)
    }

    pub fn read_from<R: Read>(input: &mut R) -> Result<Self> {
        let pointers = EncodedSequence::read_from(input)?;
        let subjects = NodeLevel {
            seq: EncodedSequence::read_from(input)?,
        };
        if pointers.is_empty()
            || pointers.get(0) != 0
            || pointers.get(pointers.len() - 1) != subjects.seq.len() as u64
        {
            return Err(Error::CorruptContainer("PS pointers inconsistent".into()));
        }
        Ok(Self { pointers, subjects })
    }
}

#[derive(Debug, Clone)]
pub struct PsSubjects<'a> {
    cursor: Option<NodeCursor<'a>>,
    begin: usize,
    pos: usize,
    end: usize,
}

impl Iterator for PsSubjects<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.pos >= self.end {
            return None;
        }
        let s = self.cursor.as_mut()?.next(self.pos == self.begin);
        self.pos += 1;
        Some(s)
    }
}
