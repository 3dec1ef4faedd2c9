//! Reading triples from N-Triples or decimal ID files, dictionary
//! encoding, and sorting into a permutation's order.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::io::{BufRead, BufReader, BufWriter, Read, Seek, SeekFrom, Write};

use crate::dictionary::{Component, Dictionary};
use crate::error::{Error, Result};
use crate::triple::{Permutation, TripleId};

/// Default in-memory budget for [`prepare_with_budget`]: 1 GiB of triples.
pub const DEFAULT_SORT_BUDGET: usize = 1 << 30;

const TRIPLE_BYTES: usize = 24;

/// A statement with its terms as strings. IRIs are stored without angle
/// brackets; literals keep their quotes and suffix; blank nodes keep `_:`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RawTriple {
    pub subject: String,
    pub predicate: String,
    pub object: String,
}

/// What to do with a line that does not parse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OnMalformed {
    #[default]
    Abort,
    Skip,
}

fn malformed(line: usize, reason: impl Into<String>) -> Error {
    Error::MalformedLine {
        line,
        reason: reason.into(),
    }
}

/// Splits off the term at the start of `s`, returning it and the rest.
fn term(s: &str, allow_literal: bool) -> std::result::Result<(String, &str), String> {
    let s = s.trim_start();
    match s.as_bytes().first() {
        Some(b'<') => {
            let end = s.find('>').ok_or("unterminated IRI")?;
            let iri = &s[1..end];
            if iri.is_empty() || iri.contains(char::is_whitespace) {
                return Err(format!("bad IRI <{iri}>"));
            }
            Ok((iri.to_string(), &s[end + 1..]))
        }
        Some(b'_') if s.starts_with("_:") => {
            let end = s.find(char::is_whitespace).unwrap_or(s.len());
            if end == 2 {
                return Err("empty blank node label".into());
            }
            Ok((s[..end].to_string(), &s[end..]))
        }
        Some(b'"') if allow_literal => {
            let bytes = s.as_bytes();
            let mut i = 1;
            loop {
                match bytes.get(i) {
                    None => return Err("unterminated literal".into()),
                    Some(b'\\') => i += 2,
                    Some(b'"') => break,
                    Some(_) => i += 1,
                }
            }
            let mut end = i + 1;
            if s[end..].starts_with("^^<") {
                end += s[end..].find('>').ok_or("unterminated datatype IRI")? + 1;
            } else if s[end..].starts_with('@') {
                end += s[end..].find(char::is_whitespace).unwrap_or(s.len() - end);
            }
            Ok((s[..end].to_string(), &s[end..]))
        }
        Some(_) => Err(format!("unexpected term starting `{}`", s.chars().take(16).collect::<String>())),
        None => Err("missing term".into()),
    }
}

/// Parses one N-Triples line; `Ok(None)` for blank lines and comments.
pub fn parse_ntriples_line(line: &str, number: usize) -> Result<Option<RawTriple>> {
    let trimmed = line.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') {
        return Ok(None);
    }
    let parse = || -> std::result::Result<RawTriple, String> {
        let (subject, rest) = term(trimmed, false)?;
        let (predicate, rest) = term(rest, false)?;
        if predicate.starts_with("_:") {
            return Err("predicate must be an IRI".into());
        }
        let (object, rest) = term(rest, true)?;
        let rest = rest.trim_start();
        let rest = rest.strip_prefix('.').ok_or("missing terminating `.`")?;
        let rest = rest.trim_start();
        if !rest.is_empty() && !rest.starts_with('#') {
            return Err(format!("trailing text `{rest}`"));
        }
        Ok(RawTriple {
            subject,
            predicate,
            object,
        })
    };
    parse().map(Some).map_err(|r| malformed(number, r))
}

/// Streams statements from N-Triples text. In skip mode malformed lines
/// are counted and dropped.
pub struct NTriplesReader<R> {
    lines: std::io::Lines<R>,
    line: usize,
    mode: OnMalformed,
    skipped: usize,
}

impl<R: BufRead> NTriplesReader<R> {
    pub fn skipped(&self) -> usize {
        self.skipped
    }
}

pub fn parse_ntriples<R: BufRead>(reader: R, mode: OnMalformed) -> NTriplesReader<R> {
    NTriplesReader {
        lines: reader.lines(),
        line: 0,
        mode,
        skipped: 0,
    }
}

impl<R: BufRead> Iterator for NTriplesReader<R> {
    type Item = Result<RawTriple>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let text = match self.lines.next()? {
                Ok(t) => t,
                Err(e) => return Some(Err(e.into())),
            };
            self.line += 1;
            match parse_ntriples_line(&text, self.line) {
                Ok(Some(t)) => return Some(Ok(t)),
                Ok(None) => {}
                Err(_) if self.mode == OnMalformed::Skip => self.skipped += 1,
                Err(e) => return Some(Err(e)),
            }
        }
    }
}

/// Streams triples of three whitespace-separated decimal IDs per line.
/// Blank lines and `#` comments are skipped.
pub fn parse_id_triples<R: BufRead>(reader: R) -> impl Iterator<Item = Result<TripleId>> {
    reader.lines().enumerate().filter_map(|(k, line)| {
        let line = match line {
            Ok(l) => l,
            Err(e) => return Some(Err(e.into())),
        };
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            return None;
        }
        let mut ids = [0u64; 3];
        let mut fields = trimmed.split_whitespace();
        for id in &mut ids {
            match fields.next().map(str::parse::<u64>) {
                Some(Ok(v)) => *id = v,
                Some(Err(e)) => return Some(Err(malformed(k + 1, e.to_string()))),
                None => return Some(Err(malformed(k + 1, "expected three IDs"))),
            }
        }
        if fields.next().is_some() {
            return Some(Err(malformed(k + 1, "expected three IDs")));
        }
        Some(Ok(TripleId::from_array(ids)))
    })
}

pub fn write_id_triples<W: Write>(out: W, triples: &[TripleId]) -> Result<()> {
    let mut out = BufWriter::new(out);
    for t in triples {
        writeln!(out, "{t}")?;
    }
    out.flush()?;
    Ok(())
}

/// Builds the dictionary of `raw` and encodes every statement.
pub fn encode(raw: &[RawTriple]) -> (Dictionary, Vec<TripleId>) {
    let dict = Dictionary::build(
        raw.iter().map(|t| t.subject.as_str()),
        raw.iter().map(|t| t.predicate.as_str()),
        raw.iter().map(|t| t.object.as_str()),
    );
    let id = |c, term: &str| dict.encode(c, term).expect("term was added to the dictionary");
    let triples = raw
        .iter()
        .map(|t| {
            TripleId::new(
                id(Component::Subject, &t.subject),
                id(Component::Predicate, &t.predicate),
                id(Component::Object, &t.object),
            )
        })
        .collect();
    (dict, triples)
}

/// Replaces each component by its rank among that component's distinct
/// values, making every ID space dense. Returns the three counts.
pub fn densify(triples: &mut [TripleId]) -> [u64; 3] {
    let mut counts = [0; 3];
    for (c, count) in counts.iter_mut().enumerate() {
        let mut ids: Vec<u64> = triples.iter().map(|t| t.to_array()[c]).collect();
        ids.sort_unstable();
        ids.dedup();
        *count = ids.len() as u64;
        for t in triples.iter_mut() {
            let mut a = t.to_array();
            a[c] = ids.binary_search(&a[c]).expect("value collected above") as u64;
            *t = TripleId::from_array(a);
        }
    }
    counts
}

/// Permutes, sorts and deduplicates canonical S, P, O triples.
pub fn prepare(triples: &[TripleId], perm: Permutation) -> Vec<TripleId> {
    let mut v: Vec<_> = triples.iter().map(|&t| perm.permute(t)).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Like [`prepare`] for a stream, spilling sorted runs of at most
/// `budget_bytes` to temporary files and merging them.
pub fn prepare_with_budget<I>(triples: I, perm: Permutation, budget_bytes: usize) -> Result<Vec<TripleId>>
where
    I: IntoIterator<Item = TripleId>,
{
    let chunk_len = (budget_bytes / TRIPLE_BYTES).max(1);
    let mut runs = Vec::new();
    let mut chunk = Vec::new();
    for t in triples {
        chunk.push(perm.permute(t));
        if chunk.len() == chunk_len {
            runs.push(spill(&mut chunk)?);
        }
    }
    if runs.is_empty() {
        chunk.sort_unstable();
        chunk.dedup();
        return Ok(chunk);
    }
    if !chunk.is_empty() {
        runs.push(spill(&mut chunk)?);
    }
    merge(runs)
}

fn spill(chunk: &mut Vec<TripleId>) -> Result<std::fs::File> {
    chunk.sort_unstable();
    chunk.dedup();
    let mut file = tempfile::tempfile()?;
    {
        let mut out = BufWriter::new(&mut file);
        for t in chunk.iter() {
            for v in t.to_array() {
                out.write_all(&v.to_le_bytes())?;
            }
        }
        out.flush()?;
    }
    file.seek(SeekFrom::Start(0))?;
    chunk.clear();
    Ok(file)
}

fn read_triple<R: Read>(r: &mut R) -> Result<Option<TripleId>> {
    let mut buf = [0u8; TRIPLE_BYTES];
    match r.read_exact(&mut buf) {
        Ok(()) => {}
        Err(e) if e.kind() == std::io::ErrorKind::UnexpectedEof => return Ok(None),
        Err(e) => return Err(e.into()),
    }
    let word = |k: usize| u64::from_le_bytes(buf[8 * k..8 * k + 8].try_into().expect("8 bytes"));
    Ok(Some(TripleId::new(word(0), word(1), word(2))))
}

fn merge(runs: Vec<std::fs::File>) -> Result<Vec<TripleId>> {
    let mut readers: Vec<_> = runs.into_iter().map(BufReader::new).collect();
    let mut heap = BinaryHeap::with_capacity(readers.len());
    for (k, r) in readers.iter_mut().enumerate() {
        if let Some(t) = read_triple(r)? {
            heap.push(Reverse((t, k)));
        }
    }
    let mut out: Vec<TripleId> = Vec::new();
    while let Some(Reverse((t, k))) = heap.pop() {
        if out.last() != Some(&t) {
            out.push(t);
        }
        if let Some(next) = read_triple(&mut readers[k])? {
            heap.push(Reverse((next, k)));
        }
    }
    Ok(out)
}
