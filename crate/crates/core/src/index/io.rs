//! Index container: magic | layout tag | counts | tries | PS lists | CRC-64.
//! Integers are little-endian; the checksum covers every preceding byte.

use std::io::{Read, Write};

use crc::{Crc, CRC_64_XZ};

use super::{Counts, IndexLayout, PsStructure, RdfIndex};
use crate::error::{Error, Result};
use crate::intseq::{read_u64, read_u8};
use crate::trie::PermutedTrie;

pub const MAGIC: &[u8; 8] = b"PTRIDX01";
const MAGIC_FAMILY: &[u8] = b"PTRIDX";
const CRC64: Crc<u64> = Crc::<u64>::new(&CRC_64_XZ);

/// Magic, layout tag, counts block and checksum.
pub(super) const FIXED_BITS: usize = 8 * (8 + 1 + 5 * 8 + 8);

impl RdfIndex {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.size_bits() / 8);
        out.extend_from_slice(MAGIC);
        out.push(self.layout.tag());
        let c = &self.counts;
        for v in [c.triples, c.subjects, c.predicates, c.objects, 0] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        for trie in &self.tries {
            trie.write_to(&mut out).expect("writing to a Vec");
        }
        if let Some(ps) = &self.ps {
            ps.write_to(&mut out).expect("writing to a Vec");
        }
        let crc = CRC64.checksum(&out);
        out.extend_from_slice(&crc.to_le_bytes());
        out
    }

    pub fn save<W: Write>(&self, out: &mut W) -> Result<()> {
        out.write_all(&self.to_bytes())?;
        Ok(())
    }

    pub fn load<R: Read>(input: &mut R) -> Result<Self> {
        let mut bytes = Vec::new();
        input.read_to_end(&mut bytes)?;
        Self::from_bytes(&bytes)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let corrupt = |what: &str| Error::CorruptContainer(what.to_string());
        if bytes.len() < MAGIC.len() {
            return Err(corrupt("truncated header"));
        }
        if &bytes[..8] != MAGIC {
            if bytes.starts_with(MAGIC_FAMILY) {
                return Err(Error::VersionMismatch {
                    found: String::from_utf8_lossy(&bytes[..8]).into_owned(),
                });
            }
            return Err(corrupt("bad magic"));
        }
        if bytes.len() < FIXED_BITS / 8 {
            return Err(corrupt("truncated header"));
        }
        let (body, trailer) = bytes.split_at(bytes.len() - 8);
        let stored = u64::from_le_bytes(trailer.try_into().expect("8 bytes"));
        if CRC64.checksum(body) != stored {
            return Err(corrupt("checksum mismatch"));
        }

        let mut input = &body[8..];
        let tag = read_u8(&mut input)?;
        let layout =
            IndexLayout::from_tag(tag).ok_or_else(|| corrupt(&format!("unknown layout tag {tag}")))?;
        let counts = Counts {
            triples: read_u64(&mut input)?,
            subjects: read_u64(&mut input)?,
            predicates: read_u64(&mut input)?,
            objects: read_u64(&mut input)?,
        };
        read_u64(&mut input)?;
        let mut tries = Vec::with_capacity(3);
        for &perm in layout.permutations() {
            let trie = PermutedTrie::read_from(&mut input)?;
            if trie.permutation() != perm {
                return Err(corrupt("trie order does not match layout"));
            }
            tries.push(trie);
        }
        let ps = if layout.has_ps() {
            Some(PsStructure::read_from(&mut input)?)
        } else {
            None
        };
        if !input.is_empty() {
            return Err(corrupt("trailing bytes"));
        }
        if !counts_consistent(&counts, &tries, ps.as_ref()) {
            return Err(corrupt("counts do not match tries"));
        }
        Ok(Self {
            layout,
            counts,
            tries,
            ps,
        })
    }
}

/// Checks the stored counts against every trie that determines them.
fn counts_consistent(c: &Counts, tries: &[PermutedTrie], ps: Option<&PsStructure>) -> bool {
    use crate::triple::Permutation::*;
    let first_count = |perm| tries.iter().find(|t| t.permutation() == perm).map(|t| t.first_level_count());
    tries.iter().all(|t| t.num_triples() == c.triples)
        && first_count(Spo) == Some(c.subjects)
        && [first_count(Pos), ps.map(|p| p.num_predicates())]
            .into_iter()
            .flatten()
            .all(|n| n == c.predicates)
        && [first_count(Osp), first_count(Ops)]
            .into_iter()
            .flatten()
            .all(|n| n == c.objects)
}

#[cfg(test)]
mod tests {
    use super::super::tests::SAMPLE;
    use super::*;
    use crate::triple::{Shape, TripleId, TriplePattern};

    fn sample(layout: IndexLayout) -> RdfIndex {
        let t: Vec<TripleId> = SAMPLE.iter().map(|&t| t.into()).collect();
        RdfIndex::build(&t, layout).unwrap()
    }

    #[test]
    fn roundtrip_is_byte_identical() {
        for layout in IndexLayout::ALL {
            let idx = sample(layout);
            let bytes = idx.to_bytes();
            let padding = bytes.len() * 8 - idx.size_bits();
            assert!(padding < 64 * 16, "{padding}");
            let back = RdfIndex::from_bytes(&bytes).unwrap();
            assert_eq!(back.to_bytes(), bytes);
            for shape in Shape::ALL {
                for &t in &SAMPLE {
                    let p = TriplePattern::from_triple(t.into(), shape);
                    let a: Vec<_> = idx.query(p).collect();
                    let b: Vec<_> = back.query(p).collect();
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn rejects_damaged_containers() {
        let bytes = sample(IndexLayout::CrossCompressed).to_bytes();
        assert!(matches!(
            RdfIndex::from_bytes(&bytes[..bytes.len() / 2]),
            Err(Error::CorruptContainer(_))
        ));
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(RdfIndex::from_bytes(&bad), Err(Error::CorruptContainer(_))));
        let mut newer = bytes.clone();
        newer[7] = b'2';
        assert!(matches!(RdfIndex::from_bytes(&newer), Err(Error::VersionMismatch { .. })));
        let mut flipped = bytes;
        flipped[70] ^= 0x10;
        assert!(matches!(RdfIndex::from_bytes(&flipped), Err(Error::CorruptContainer(_))));
    }
}
