//! RDF indexes made of several permuted tries.
//!
//! | layout | tries           | extra |
//! |--------|-----------------|-------|
//! | 3T     | SPO, POS, OSP   |       |
//! | CC     | SPO, POS, OSP   | POS leaves rewritten as positions among OSP children |
//! | 2Tp    | SPO, POS        |       |
//! | 2To    | SPO, OPS        | predicate to subjects lists |

mod io;
mod ps;
mod stats;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::intseq::{Codec, DEFAULT_FIND_THRESHOLD};
use crate::trie::{CodecPlan, EnumerateIter, PermutedTrie, TrieIter};
use crate::triple::{Permutation, Shape, TripleId, TriplePattern, WILDCARD};

pub use ps::{PsStructure, PsSubjects};
pub use stats::{IndexStats, SequenceStats, TrieFanOut};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum IndexLayout {
    ThreeT = 0,
    CrossCompressed = 1,
    TwoTp = 2,
    TwoTo = 3,
}

impl IndexLayout {
    pub const ALL: [IndexLayout; 4] = [
        IndexLayout::ThreeT,
        IndexLayout::CrossCompressed,
        IndexLayout::TwoTp,
        IndexLayout::TwoTo,
    ];

    /// Tries held by the layout, in storage order.
    pub fn permutations(self) -> &'static [Permutation] {
        match self {
            IndexLayout::ThreeT | IndexLayout::CrossCompressed => {
                &[Permutation::Spo, Permutation::Pos, Permutation::Osp]
            }
            IndexLayout::TwoTp => &[Permutation::Spo, Permutation::Pos],
            IndexLayout::TwoTo => &[Permutation::Spo, Permutation::Ops],
        }
    }

    pub fn has_ps(self) -> bool {
        self == IndexLayout::TwoTo
    }

    pub fn tag(self) -> u8 {
        self as u8
    }

    pub fn from_tag(tag: u8) -> Option<Self> {
        Self::ALL.get(tag as usize).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            IndexLayout::ThreeT => "3t",
            IndexLayout::CrossCompressed => "cc",
            IndexLayout::TwoTp => "2tp",
            IndexLayout::TwoTo => "2to",
        }
    }
}

impl fmt::Display for IndexLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for IndexLayout {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        Self::ALL
            .into_iter()
            .find(|l| l.as_str() == lower)
            .ok_or_else(|| format!("unknown layout `{s}` (expected 3t, cc, 2tp or 2to)"))
    }
}

/// Distinct component counts after deduplication.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Counts {
    pub triples: u64,
    pub subjects: u64,
    pub predicates: u64,
    pub objects: u64,
}

impl Counts {
    fn of(&self, component: usize) -> u64 {
        [self.subjects, self.predicates, self.objects][component]
    }
}

const COMPONENT_NAMES: [&str; 3] = ["subject", "predicate", "object"];

/// Codec overrides and search tuning for [`RdfIndex::build_with`].
#[derive(Debug, Clone, Default)]
pub struct BuildOptions {
    /// Per-permutation codec plans, indexed by permutation tag. `None` uses
    /// the layout default.
    pub plans: [Option<CodecPlan>; 4],
    /// Linear scan threshold for `find`; `None` keeps the default.
    pub find_threshold: Option<usize>,
}

impl BuildOptions {
    /// Uses `plan` for every trie.
    pub fn uniform(plan: CodecPlan) -> Self {
        Self {
            plans: [Some(plan); 4],
            find_threshold: None,
        }
    }

    pub fn plan_for(&self, layout: IndexLayout, perm: Permutation) -> CodecPlan {
        if let Some(plan) = self.plans[perm.tag() as usize] {
            return plan;
        }
        let mut plan = CodecPlan::default_for(perm);
        if layout == IndexLayout::CrossCompressed && perm == Permutation::Osp {
            plan.level1_nodes = Codec::Compact;
        }
        plan
    }
}

/// How a pattern shape is answered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Select,
    Enumerate,
    InvertedObject,
    InvertedPredicate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Plan {
    pub permutation: Permutation,
    pub algorithm: Algorithm,
}

impl fmt::Display for Plan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.algorithm {
            Algorithm::Select => "select",
            Algorithm::Enumerate => "enumerate",
            Algorithm::InvertedObject => "inverted-object",
            Algorithm::InvertedPredicate => "inverted-predicate",
        };
        write!(f, "{name}({})", self.permutation)
    }
}

/// The trie and algorithm serving `shape` under `layout`.
pub fn dispatch(layout: IndexLayout, shape: Shape) -> Plan {
    use Algorithm::*;
    use Permutation::*;
    let (permutation, algorithm) = match (layout, shape) {
        (_, Shape::Spo | Shape::Sp | Shape::S | Shape::All) => (Spo, Select),
        (IndexLayout::ThreeT | IndexLayout::CrossCompressed, Shape::So | Shape::O) => (Osp, Select),
        (IndexLayout::ThreeT | IndexLayout::CrossCompressed, Shape::Po | Shape::P) => (Pos, Select),
        (IndexLayout::TwoTp, Shape::So) => (Spo, Enumerate),
        (IndexLayout::TwoTp, Shape::O) => (Pos, InvertedObject),
        (IndexLayout::TwoTp, Shape::Po | Shape::P) => (Pos, Select),
        (IndexLayout::TwoTo, Shape::So) => (Spo, Enumerate),
        (IndexLayout::TwoTo, Shape::Po | Shape::O) => (Ops, Select),
        (IndexLayout::TwoTo, Shape::P) => (Spo, InvertedPredicate),
    };
    Plan {
        permutation,
        algorithm,
    }
}

/// An immutable index over a set of integer triples.
#[derive(Debug, Clone)]
pub struct RdfIndex {
    layout: IndexLayout,
    counts: Counts,
    tries: Vec<PermutedTrie>,
    ps: Option<PsStructure>,
}

impl RdfIndex {
    pub fn build(triples: &[TripleId], layout: IndexLayout) -> Result<Self> {
        Self::build_with(triples, layout, &BuildOptions::default())
    }

    /// Sorts and deduplicates `triples`, then builds every trie of the
    /// layout. IDs must be dense per component.
    pub fn build_with(triples: &[TripleId], layout: IndexLayout, options: &BuildOptions) -> Result<Self> {
        if triples.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut spo = triples.to_vec();
        spo.sort_unstable();
        spo.dedup();
        let counts = dense_counts(&spo)?;

        let sorted_in = |perm: Permutation| {
            let mut v: Vec<_> = spo.iter().map(|&t| perm.permute(t)).collect();
            v.sort_unstable();
            v
        };
        let mut tries = Vec::with_capacity(3);
        for &perm in layout.permutations() {
            let plan = options.plan_for(layout, perm);
            let trie = match perm {
                Permutation::Spo => PermutedTrie::build(&spo, perm, plan)?,
                // CC builds POS last, once OSP exists.
                Permutation::Pos if layout == IndexLayout::CrossCompressed => continue,
                _ => PermutedTrie::build(&sorted_in(perm), perm, plan)?,
            };
            tries.push(trie);
        }
        if layout == IndexLayout::CrossCompressed {
            let osp = &tries[1];
            let mut pos = sorted_in(Permutation::Pos);
            for t in &mut pos {
                t.third = osp.map(t.second, t.third)?;
            }
            let plan = options.plan_for(layout, Permutation::Pos);
            tries.insert(1, PermutedTrie::build(&pos, Permutation::Pos, plan)?);
        }
        let ps = if layout.has_ps() {
            Some(PsStructure::build(&spo, counts.predicates)?)
        } else {
            None
        };
        let mut index = Self {
            layout,
            counts,
            tries,
            ps,
        };
        index.set_find_threshold(options.find_threshold.unwrap_or(DEFAULT_FIND_THRESHOLD));
        Ok(index)
    }

    pub fn layout(&self) -> IndexLayout {
        self.layout
    }

    pub fn counts(&self) -> Counts {
        self.counts
    }

    pub fn num_triples(&self) -> u64 {
        self.counts.triples
    }

    pub fn tries(&self) -> &[PermutedTrie] {
        &self.tries
    }

    pub fn trie(&self, perm: Permutation) -> Option<&PermutedTrie> {
        self.tries.iter().find(|t| t.permutation() == perm)
    }

    pub fn ps(&self) -> Option<&PsStructure> {
        self.ps.as_ref()
    }

    pub fn set_find_threshold(&mut self, threshold: usize) {
        for t in &mut self.tries {
            t.set_find_threshold(threshold);
        }
    }

    /// Encoded size in bits, including the container header and trailer but
    /// not the padding of payloads to whole words.
    pub fn size_bits(&self) -> usize {
        io::FIXED_BITS
            + self.tries.iter().map(|t| t.size_bits()).sum::<usize>()
            + self.ps.as_ref().map_or(0, |p| p.size_bits())
    }

    /// `IdOutOfRange` for the first bound component outside its ID space.
    pub fn check_pattern(&self, pattern: &TriplePattern) -> Result<()> {
        for (c, id) in pattern.to_array().into_iter().enumerate() {
            let count = self.counts.of(c);
            if id != WILDCARD && id >= count {
                return Err(Error::IdOutOfRange {
                    component: COMPONENT_NAMES[c],
                    id,
                    count,
                });
            }
        }
        Ok(())
    }

    fn expect_trie(&self, perm: Permutation) -> &PermutedTrie {
        self.trie(perm).expect("dispatch only names tries of the layout")
    }

    /// Triples matching `pattern`, in canonical S, P, O component order.
    /// Out-of-range IDs match nothing.
    pub fn query(&self, pattern: TriplePattern) -> QueryIter<'_> {
        if self.check_pattern(&pattern).is_err() {
            return QueryIter::empty();
        }
        let plan = dispatch(self.layout, pattern.shape());
        match plan.algorithm {
            Algorithm::Select => self.select_on(plan.permutation, pattern),
            Algorithm::Enumerate => QueryIter(Inner::Enumerate(
                self.expect_trie(Permutation::Spo)
                    .enumerate(pattern.first, pattern.third),
            )),
            Algorithm::InvertedObject => self.inverted_object(pattern.third).unwrap_or_default(),
            Algorithm::InvertedPredicate => self.inverted_predicate(pattern.second).unwrap_or_default(),
        }
    }

    fn select_on(&self, perm: Permutation, pattern: TriplePattern) -> QueryIter<'_> {
        let trie = self.expect_trie(perm);
        let iter = match trie.select(perm.permute_pattern(pattern)) {
            Ok(it) => it,
            Err(_) => return QueryIter::empty(),
        };
        QueryIter(Inner::Select(Box::new(SelectState {
            iter,
            permutation: perm,
            unmap: self.unmapper(perm),
        })))
    }

    fn unmapper(&self, perm: Permutation) -> Option<Unmapper<'_>> {
        (self.layout == IndexLayout::CrossCompressed && perm == Permutation::Pos).then(|| Unmapper {
            osp: self.expect_trie(Permutation::Osp),
            object: WILDCARD,
            begin: 0,
        })
    }

    /// `??O` via the POS trie: one `find` for the object under every
    /// predicate, then the subjects below each hit.
    pub fn inverted_object(&self, object: u64) -> Result<QueryIter<'_>> {
        let pos = self
            .trie(Permutation::Pos)
            .ok_or_else(|| Error::UnsupportedShape(format!("??O needs a POS trie, layout {}", self.layout)))?;
        Ok(QueryIter(Inner::InvertedObject(Box::new(InvertedObjectState {
            pos,
            object,
            next_predicate: 0,
            current: TrieIter::empty(),
            unmap: self.unmapper(Permutation::Pos),
        }))))
    }

    /// `?P?` via the predicate to subjects lists: `(s, p, ?)` on SPO for
    /// every listed subject.
    pub fn inverted_predicate(&self, predicate: u64) -> Result<QueryIter<'_>> {
        let ps = self
            .ps
            .as_ref()
            .ok_or_else(|| Error::UnsupportedShape(format!("?P? needs PS lists, layout {}", self.layout)))?;
        Ok(QueryIter(Inner::InvertedPredicate(Box::new(InvertedPredicateState {
            spo: self.expect_trie(Permutation::Spo),
            subjects: ps.subjects(predicate),
            predicate,
            current: TrieIter::empty(),
        }))))
    }
}

/// Counts distinct components of deduplicated triples and checks that
/// each component's IDs are exactly `0..count`.
fn dense_counts(spo: &[TripleId]) -> Result<Counts> {
    let mut counts = Counts {
        triples: spo.len() as u64,
        ..Counts::default()
    };
    for (c, name) in COMPONENT_NAMES.into_iter().enumerate() {
        let mut ids: Vec<u64> = spo.iter().map(|t| t.to_array()[c]).collect();
        ids.sort_unstable();
        ids.dedup();
        let count = ids.len() as u64;
        if let Some(&max) = ids.last() {
            if max >= count {
                let id = ids
                    .iter()
                    .enumerate()
                    .find(|&(k, &v)| v != k as u64)
                    .map_or(max, |(_, &v)| v);
                return Err(Error::IdOutOfRange {
                    component: name,
                    id,
                    count,
                });
            }
        }
        match c {
            0 => counts.subjects = count,
            1 => counts.predicates = count,
            _ => counts.objects = count,
        }
    }
    Ok(counts)
}

/// Turns CC-mapped POS leaves back into subject IDs.
#[derive(Debug, Clone)]
struct Unmapper<'a> {
    osp: &'a PermutedTrie,
    object: u64,
    begin: usize,
}

impl Unmapper<'_> {
    #[inline]
    fn subject(&mut self, object: u64, position: u64) -> u64 {
        if object != self.object {
            self.object = object;
            self.begin = self.osp.children(object).expect("object indexed in OSP").0;
        }
        self.osp.unmap_unchecked(self.begin, position)
    }
}

#[derive(Debug, Clone)]
struct SelectState<'a> {
    iter: TrieIter<'a>,
    permutation: Permutation,
    unmap: Option<Unmapper<'a>>,
}

#[derive(Debug, Clone)]
struct InvertedObjectState<'a> {
    pos: &'a PermutedTrie,
    object: u64,
    next_predicate: u64,
    current: TrieIter<'a>,
    unmap: Option<Unmapper<'a>>,
}

#[derive(Debug, Clone)]
struct InvertedPredicateState<'a> {
    spo: &'a PermutedTrie,
    subjects: PsSubjects<'a>,
    predicate: u64,
    current: TrieIter<'a>,
}

#[derive(Debug, Clone, Default)]
enum Inner<'a> {
    #[default]
    Empty,
    Select(Box<SelectState<'a>>),
    Enumerate(EnumerateIter<'a>),
    InvertedObject(Box<InvertedObjectState<'a>>),
    InvertedPredicate(Box<InvertedPredicateState<'a>>),
}

/// Matches of [`RdfIndex::query`] in S, P, O component order.
#[derive(Debug, Clone, Default)]
pub struct QueryIter<'a>(Inner<'a>);

impl QueryIter<'_> {
    pub fn empty() -> Self {
        Self(Inner::Empty)
    }
}

/// POS-ordered triple to S, P, O, undoing the CC mapping if present.
#[inline]
fn from_pos(t: TripleId, unmap: &mut Option<Unmapper<'_>>) -> TripleId {
    let subject = match unmap {
        Some(u) => u.subject(t.second, t.third),
        None => t.third,
    };
    TripleId::new(subject, t.first, t.second)
}

impl Iterator for QueryIter<'_> {
    type Item = TripleId;

    #[inline]
    fn next(&mut self) -> Option<TripleId> {
        match &mut self.0 {
            Inner::Empty => None,
            Inner::Select(s) => {
                let t = s.iter.next()?;
                Some(match s.permutation {
                    Permutation::Pos => from_pos(t, &mut s.unmap),
                    perm => perm.unpermute(t),
                })
            }
            Inner::Enumerate(e) => e.next(),
            Inner::InvertedObject(s) => loop {
                if let Some(t) = s.current.next() {
                    return Some(from_pos(t, &mut s.unmap));
                }
                if s.next_predicate >= s.pos.first_level_count() {
                    return None;
                }
                let p = s.next_predicate;
                s.next_predicate += 1;
                if let Ok(it) = s.pos.select(TriplePattern::new(p, s.object, WILDCARD)) {
                    s.current = it;
                }
            },
            Inner::InvertedPredicate(s) => loop {
                if let Some(t) = s.current.next() {
                    return Some(t);
                }
                let subject = s.subjects.next()?;
                if let Ok(it) = s.spo.select(TriplePattern::new(subject, s.predicate, WILDCARD)) {
                    s.current = it;
                }
            },
        }
    }
}
