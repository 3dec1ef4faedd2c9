//! Integer triples, selection patterns and component permutations.

use std::fmt;
use std::str::FromStr;

/// Marks an unbound pattern component. Never a legal ID.
pub const WILDCARD: u64 = u64::MAX;

/// A triple of component IDs. Depending on context the components are in
/// canonical subject, predicate, object order or in a trie's permuted order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TripleId {
    pub first: u64,
    pub second: u64,
    pub third: u64,
}

impl TripleId {
    pub const fn new(first: u64, second: u64, third: u64) -> Self {
        Self {
            first,
            second,
            third,
        }
    }

    pub const fn to_array(self) -> [u64; 3] {
        [self.first, self.second, self.third]
    }

    pub const fn from_array(a: [u64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

impl From<(u64, u64, u64)> for TripleId {
    fn from((a, b, c): (u64, u64, u64)) -> Self {
        Self::new(a, b, c)
    }
}

impl fmt::Display for TripleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.first, self.second, self.third)
    }
}

/// A triple whose components may be [`WILDCARD`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TriplePattern {
    pub first: u64,
    pub second: u64,
    pub third: u64,
}

impl TriplePattern {
    pub const fn new(first: u64, second: u64, third: u64) -> Self {
        Self {
            first,
            second,
            third,
        }
    }

    pub fn from_options(first: Option<u64>, second: Option<u64>, third: Option<u64>) -> Self {
        Self::new(
            first.unwrap_or(WILDCARD),
            second.unwrap_or(WILDCARD),
            third.unwrap_or(WILDCARD),
        )
    }

    /// Keeps the components of `triple` selected by `shape`.
    pub fn from_triple(triple: TripleId, shape: Shape) -> Self {
        let [s, p, o] = shape.bound();
        Self::new(
            if s { triple.first } else { WILDCARD },
            if p { triple.second } else { WILDCARD },
            if o { triple.third } else { WILDCARD },
        )
    }

    pub fn to_array(self) -> [u64; 3] {
        [self.first, self.second, self.third]
    }

    /// Shape of the pattern read in canonical S, P, O order.
    pub fn shape(&self) -> Shape {
        Shape::from_bound([
            self.first != WILDCARD,
            self.second != WILDCARD,
            self.third != WILDCARD,
        ])
    }

    pub fn matches(&self, t: &TripleId) -> bool {
        (self.first == WILDCARD || self.first == t.first)
            && (self.second == WILDCARD || self.second == t.second)
            && (self.third == WILDCARD || self.third == t.third)
    }
}

impl fmt::Display for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = |v: u64| {
            if v == WILDCARD {
                "?".to_string()
            } else {
                v.to_string()
            }
        };
        write!(f, "{} {} {}", c(self.first), c(self.second), c(self.third))
    }
}

/// The eight selection pattern shapes, named by their bound components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shape {
    /// `SPO`
    Spo,
    /// `SP?`
    Sp,
    /// `S??`
    S,
    /// `S?O`
    So,
    /// `?PO`
    Po,
    /// `?P?`
    P,
    /// `??O`
    O,
    /// `???`
    All,
}

impl Shape {
    pub const ALL: [Shape; 8] = [
        Shape::Spo,
        Shape::Sp,
        Shape::S,
        Shape::So,
        Shape::Po,
        Shape::P,
        Shape::O,
        Shape::All,
    ];

    /// Which of S, P, O are bound.
    pub fn bound(self) -> [bool; 3] {
        match self {
            Shape::Spo => [true, true, true],
            Shape::Sp => [true, true, false],
            Shape::S => [true, false, false],
            Shape::So => [true, false, true],
            Shape::Po => [false, true, true],
            Shape::P => [false, true, false],
            Shape::O => [false, false, true],
            Shape::All => [false, false, false],
        }
    }

    pub fn from_bound(b: [bool; 3]) -> Self {
        match b {
            [true, true, true] => Shape::Spo,
            [true, true, false] => Shape::Sp,
            [true, false, false] => Shape::S,
            [true, false, true] => Shape::So,
            [false, true, true] => Shape::Po,
            [false, true, false] => Shape::P,
            [false, false, true] => Shape::O,
            [false, false, false] => Shape::All,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Shape::Spo => "SPO",
            Shape::Sp => "SP?",
            Shape::S => "S??",
            Shape::So => "S?O",
            Shape::Po => "?PO",
            Shape::P => "?P?",
            Shape::O => "??O",
            Shape::All => "???",
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for Shape {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let upper = s.trim().to_ascii_uppercase();
        Shape::ALL
            .into_iter()
            .find(|shape| shape.as_str() == upper)
            .ok_or_else(|| format!("unknown pattern shape `{s}`"))
    }
}

/// The component order a trie stores its triples in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Permutation {
    Spo = 0,
    Pos = 1,
    Osp = 2,
    Ops = 3,
}

impl Permutation {
    pub const ALL: [Permutation; 4] = [
        Permutation::Spo,
        Permutation::Pos,
        Permutation::Osp,
        Permutation::Ops,
    ];

    /// Canonical component index stored at each trie level.
    pub const fn order(self) -> [usize; 3] {
        match self {
            Permutation::Spo => [0, 1, 2],
            Permutation::Pos => [1, 2, 0],
            Permutation::Osp => [2, 0, 1],
            Permutation::Ops => [2, 1, 0],
        }
    }

    /// Canonical S, P, O triple to this permutation's order.
    #[inline]
    pub fn permute(self, t: TripleId) -> TripleId {
        let a = t.to_array();
        let [x, y, z] = self.order();
        TripleId::new(a[x], a[y], a[z])
    }

    /// Permuted triple back to canonical S, P, O order.
    #[inline]
    pub fn unpermute(self, t: TripleId) -> TripleId {
        let mut out = [0; 3];
        for (level, &component) in self.order().iter().enumerate() {
            out[component] = t.to_array()[level];
        }
        TripleId::from_array(out)
    }

    pub fn permute_pattern(self, p: TriplePattern) -> TriplePattern {
        let a = p.to_array();
        let [x, y, z] = self.order();
        TriplePattern::new(a[x], a[y], a[z])
    }

    pub fn tag(self) -> u8 {
        self as u8
    }

    pub fn from_tag(tag: u8) -> Option<Self> {
        Self::ALL.get(tag as usize).copied()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Permutation::Spo => "SPO",
            Permutation::Pos => "POS",
            Permutation::Osp => "OSP",
            Permutation::Ops => "OPS",
        })
    }
}
