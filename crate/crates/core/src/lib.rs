//! Compressed indexes for RDF triples built from permuted tries.
//!
//! Triples are integer IDs, dense per component. An [`RdfIndex`] keeps two
//! or three tries over different component orders and answers all eight
//! triple selection pattern shapes.
//!
//! ```
//! use permtrie::{IndexLayout, RdfIndex, TripleId, TriplePattern, WILDCARD};
//!
//! let triples = [(0, 0, 1), (0, 1, 0), (1, 0, 0)].map(TripleId::from);
//! let index = RdfIndex::build(&triples, IndexLayout::TwoTp).unwrap();
//! let hits: Vec<_> = index.query(TriplePattern::new(WILDCARD, 0, 0)).collect();
//! assert_eq!(hits, [TripleId::new(1, 0, 0)]);
//! ```

pub mod bits;
pub mod dictionary;
pub mod error;
pub mod index;
pub mod ingest;
pub mod intseq;
pub mod synth;
pub mod trie;
pub mod triple;
pub mod workload;

pub use dictionary::{Component, Dictionary};
pub use error::{Error, Result};
pub use index::{dispatch, Algorithm, BuildOptions, Counts, IndexLayout, IndexStats, Plan, QueryIter, RdfIndex};
pub use ingest::RawTriple;
pub use intseq::{Codec, EncodedSequence, PlainSequence, RangeLayout};
pub use trie::{CodecPlan, LevelStats, PermutedTrie};
pub use triple::{Permutation, Shape, TripleId, TriplePattern, WILDCARD};
pub use workload::{BenchReport, Workload};
