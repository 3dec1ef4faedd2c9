//! Shared fixtures for the criterion benchmarks.

use permtrie::synth::{generate, Profile, SynthConfig};
use permtrie::TripleId;

/// A DBpedia-shaped synthetic set of about `n` triples.
pub fn dataset(n: usize) -> Vec<TripleId> {
    generate(&SynthConfig {
        triples: n,
        predicates: 1000,
        profile: Profile::DbpediaLike,
        seed: 0x5eed,
    })
}

/// `n` sorted values in ranges of `range_len`, each range starting from 0
/// again, as stored in trie node levels.
pub fn node_values(n: usize, range_len: usize) -> (Vec<u64>, Vec<u64>) {
    let mut values = Vec::with_capacity(n);
    let mut bounds = vec![0u64];
    let mut x = 0x2545_f491_4f6c_dd1du64;
    while values.len() < n {
        let mut v = 0;
        for _ in 0..range_len.min(n - values.len()) {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            v += 1 + x % 64;
            values.push(v);
        }
        bounds.push(values.len() as u64);
    }
    (values, bounds)
}
