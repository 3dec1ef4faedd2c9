#![allow(dead_code)]

use permtrie::synth::{generate, Profile, SynthConfig};
use permtrie::{TripleId, TriplePattern};
use proptest::prelude::*;

pub const SAMPLE: [(u64, u64, u64); 11] = [
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

pub fn sample() -> Vec<TripleId> {
    SAMPLE.iter().map(|&t| t.into()).collect()
}

pub fn brute(triples: &[TripleId], pattern: TriplePattern) -> Vec<TripleId> {
    let mut v: Vec<_> = triples.iter().copied().filter(|t| pattern.matches(t)).collect();
    v.sort_unstable();
    v
}

pub fn sorted<I: IntoIterator<Item = TripleId>>(it: I) -> Vec<TripleId> {
    let mut v: Vec<_> = it.into_iter().collect();
    v.sort_unstable();
    v
}

/// Dense, sorted, duplicate-free triple sets of up to `max` triples.
pub fn triple_sets(max: usize) -> impl Strategy<Value = Vec<TripleId>> {
    (
        1..=max,
        1u64..40,
        prop_oneof![Just(Profile::Uniform), Just(Profile::Skewed), Just(Profile::DbpediaLike)],
        any::<u64>(),
    )
        .prop_map(|(triples, predicates, profile, seed)| {
            generate(&SynthConfig {
                triples,
                predicates,
                profile,
                seed,
            })
        })
}
