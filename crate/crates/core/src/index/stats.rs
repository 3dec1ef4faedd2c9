use std::fmt;

use super::{Counts, IndexLayout, RdfIndex};
use crate::intseq::Codec;
use crate::trie::LevelStats;
use crate::triple::Permutation;

/// Space taken by one stored sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceStats {
    /// `SPO`, `POS`, `OSP`, `OPS` or `PS`.
    pub structure: String,
    pub name: &'static str,
    pub codec: Codec,
    pub len: usize,
    pub bits: usize,
    pub bits_per_triple: f64,
    pub percent: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrieFanOut {
    pub permutation: Permutation,
    pub levels: [LevelStats; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndexStats {
    pub layout: IndexLayout,
    pub counts: Counts,
    pub sp_pairs: u64,
    pub po_pairs: u64,
    pub os_pairs: u64,
    pub total_bits: usize,
    pub bits_per_triple: f64,
    pub sequences: Vec<SequenceStats>,
    pub fan_out: Vec<TrieFanOut>,
}

impl RdfIndex {
    pub fn stats(&self) -> IndexStats {
        let n = self.counts.triples.max(1) as f64;
        let total_bits = self.size_bits();
        let mut sequences = Vec::new();
        let mut push = |structure: String, name, seq: &crate::intseq::EncodedSequence| {
            let bits = seq.size_bits();
            sequences.push(SequenceStats {
                structure,
                name,
                codec: seq.codec(),
                len: seq.len(),
                bits,
                bits_per_triple: bits as f64 / n,
                percent: 100.0 * bits as f64 / total_bits as f64,
            });
        };
        for trie in &self.tries {
            for (name, seq) in trie.sequences() {
                push(trie.permutation().to_string(), name, seq);
            }
        }
        if let Some(ps) = &self.ps {
            for (name, seq) in ps.sequences() {
                push("PS".to_string(), name, seq);
            }
        }
        let fan_out = self
            .tries
            .iter()
            .map(|t| TrieFanOut {
                permutation: t.permutation(),
                levels: [
                    t.level_stats(1).expect("level 1"),
                    t.level_stats(2).expect("level 2"),
                ],
            })
            .collect();

        let spo = self.trie(Permutation::Spo).expect("every layout has SPO");
        let po_pairs = self
            .trie(Permutation::Pos)
            .or_else(|| self.trie(Permutation::Ops))
            .map_or(0, |t| t.num_pairs());
        let os_pairs = match self.trie(Permutation::Osp) {
            Some(t) => t.num_pairs(),
            None => {
                let mut pairs: Vec<(u64, u64)> = spo.iter().map(|t| (t.first, t.third)).collect();
                pairs.sort_unstable();
                pairs.dedup();
                pairs.len() as u64
            }
        };
        IndexStats {
            layout: self.layout,
            counts: self.counts,
            sp_pairs: spo.num_pairs(),
            po_pairs,
            os_pairs,
            total_bits,
            bits_per_triple: total_bits as f64 / n,
            sequences,
            fan_out,
        }
    }
}

impl fmt::Display for IndexStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.counts;
        writeln!(f, "layout        {}", self.layout)?;
        writeln!(f, "triples       {}", c.triples)?;
        writeln!(f, "subjects      {}", c.subjects)?;
        writeln!(f, "predicates    {}", c.predicates)?;
        writeln!(f, "objects       {}", c.objects)?;
        writeln!(f, "SP pairs      {}", self.sp_pairs)?;
        writeln!(f, "PO pairs      {}", self.po_pairs)?;
        writeln!(f, "OS pairs      {}", self.os_pairs)?;
        writeln!(f, "total bits    {}", self.total_bits)?;
        writeln!(f, "bits/triple   {:.3}", self.bits_per_triple)?;
        writeln!(f)?;
        writeln!(
            f,
            "{:<6} {:<16} {:<8} {:>12} {:>14} {:>12} {:>8}",
            "trie", "sequence", "codec", "length", "bits", "bits/triple", "%"
        )?;
        for s in &self.sequences {
            writeln!(
                f,
                "{:<6} {:<16} {:<8} {:>12} {:>14} {:>12.3} {:>8.2}",
                s.structure, s.name, s.codec, s.len, s.bits, s.bits_per_triple, s.percent
            )?;
        }
        writeln!(f)?;
        writeln!(f, "{:<6} {:<6} {:>10} {:>12} {:>8}", "trie", "level", "parents", "avg", "max")?;
        for t in &self.fan_out {
            for l in &t.levels {
                writeln!(
                    f,
                    "{:<6} {:<6} {:>10} {:>12.3} {:>8}",
                    t.permutation, l.level, l.parents, l.avg_children, l.max_children
                )?;
            }
        }
        Ok(())
    }
}
