//! Term dictionaries: one sorted table per triple component, so IDs are
//! dense in each component independently.
//!
//! Sidecar format: magic "PTRDIC01" | three tables (subjects, predicates,
//! objects), each a term count followed by length-prefixed UTF-8 strings |
//! CRC-64 of the preceding bytes. Integers are little-endian u64.

use std::fmt;
use std::io::{Read, Write};

use crc::{Crc, CRC_64_XZ};

use crate::error::{Error, Result};
use crate::intseq::read_u64;

const MAGIC: &[u8; 8] = b"PTRDIC01";
const CRC64: Crc<u64> = Crc::<u64>::new(&CRC_64_XZ);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    Subject = 0,
    Predicate = 1,
    Object = 2,
}

impl Component {
    pub const ALL: [Component; 3] = [Component::Subject, Component::Predicate, Component::Object];
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Component::Subject => "subject",
            Component::Predicate => "predicate",
            Component::Object => "object",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Dictionary {
    tables: [Vec<String>; 3],
}

fn table<I, T>(terms: I) -> Vec<String>
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let mut v: Vec<String> = terms.into_iter().map(Into::into).collect();
    v.sort_unstable();
    v.dedup();
    v
}

impl Dictionary {
    /// Sorts and deduplicates each component's terms; a term's ID is its rank.
    pub fn build<S, P, O, TS, TP, TO>(subjects: S, predicates: P, objects: O) -> Self
    where
        S: IntoIterator<Item = TS>,
        P: IntoIterator<Item = TP>,
        O: IntoIterator<Item = TO>,
        TS: Into<String>,
        TP: Into<String>,
        TO: Into<String>,
    {
        Self {
            tables: [table(subjects), table(predicates), table(objects)],
        }
    }

    pub fn len(&self, component: Component) -> u64 {
        self.tables[component as usize].len() as u64
    }

    pub fn terms(&self, component: Component) -> &[String] {
        &self.tables[component as usize]
    }

    pub fn encode(&self, component: Component, term: &str) -> Result<u64> {
        self.tables[component as usize]
            .binary_search_by(|t| t.as_str().cmp(term))
            .map(|i| i as u64)
            .map_err(|_| Error::NotFound)
    }

    pub fn decode(&self, component: Component, id: u64) -> Result<&str> {
        let table = &self.tables[component as usize];
        table
            .get(usize::try_from(id).unwrap_or(usize::MAX))
            .map(String::as_str)
            .ok_or(Error::OutOfBounds {
                index: id,
                len: table.len() as u64,
            })
    }

    pub fn write_to<W: Write>(&self, out: &mut W) -> Result<()> {
        let mut buf = Vec::new();
        buf.extend_from_slice(MAGIC);
        for table in &self.tables {
            buf.extend_from_slice(&(table.len() as u64).to_le_bytes());
            for term in table {
                buf.extend_from_slice(&(term.len() as u64).to_le_bytes());
                buf.extend_from_slice(term.as_bytes());
            }
        }
        let crc = CRC64.checksum(&buf);
        buf.extend_from_slice(&crc.to_le_bytes());
        out.write_all(&buf)?;
        Ok(())
    }

    pub fn read_from<R: Read>(input: &mut R) -> Result<Self> {
        let corrupt = |what: &str| Error::CorruptContainer(format!("dictionary {what}"));
        let mut bytes = Vec::new();
        input.read_to_end(&mut bytes)?;
        if bytes.len() < MAGIC.len() + 8 || &bytes[..8] != MAGIC {
            return Err(corrupt("bad magic"));
        }
        let (body, trailer) = bytes.split_at(bytes.len() - 8);
        if CRC64.checksum(body) != u64::from_le_bytes(trailer.try_into().expect("8 bytes")) {
            return Err(corrupt("checksum mismatch"));
        }
        let mut rest = &body[8..];
        let mut tables: [Vec<String>; 3] = Default::default();
        for table in &mut tables {
            let count = read_u64(&mut rest)?;
            for _ in 0..count {
                let len = usize::try_from(read_u64(&mut rest)?).map_err(|_| corrupt("term too long"))?;
                if len > rest.len() {
                    return Err(corrupt("truncated term"));
                }
                let (term, tail) = rest.split_at(len);
                rest = tail;
                table.push(String::from_utf8(term.to_vec()).map_err(|_| corrupt("term is not UTF-8"))?);
            }
            if table.windows(2).any(|w| w[0] >= w[1]) {
                return Err(corrupt("table not sorted"));
            }
        }
        if !rest.is_empty() {
            return Err(corrupt("trailing bytes"));
        }
        Ok(Self { tables })
    }
}
