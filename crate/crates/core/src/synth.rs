//! Seeded synthetic triple sets for tests and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric, Poisson, Zipf};

use crate::ingest::densify;
use crate::triple::TripleId;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    /// Independent uniform components.
    Uniform,
    /// Uniform subjects, Zipfian predicates and objects.
    Skewed,
    /// Subjects with a handful of Zipfian predicates each; objects are
    /// either drawn from a shared Zipfian pool or unique literals.
    DbpediaLike,
}

#[derive(Debug, Clone, Copy)]
pub struct SynthConfig {
    /// Upper bound on the generated size; duplicates are dropped.
    pub triples: usize,
    pub predicates: u64,
    pub profile: Profile,
    pub seed: u64,
}

impl SynthConfig {
    /// One million triples over 1000 predicates shaped like DBpedia.
    pub fn dbpedia_like(seed: u64) -> Self {
        Self {
            triples: 1_000_000,
            predicates: 1000,
            profile: Profile::DbpediaLike,
            seed,
        }
    }
}

fn zipf(n: u64, s: f64) -> Zipf<f64> {
    Zipf::new(n.max(1) as f64, s).expect("valid Zipf parameters")
}

/// Sorted, duplicate-free triples with dense IDs in every component.
pub fn generate(cfg: &SynthConfig) -> Vec<TripleId> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.triples.max(1);
    let preds = cfg.predicates.max(1);
    let mut out = Vec::with_capacity(n);
    match cfg.profile {
        Profile::Uniform => {
            let subjects = (n as u64 / 4).max(1);
            let objects = (n as u64 / 3).max(1);
            for _ in 0..n {
                out.push(TripleId::new(
                    rng.random_range(0..subjects),
                    rng.random_range(0..preds),
                    rng.random_range(0..objects),
                ));
            }
        }
        Profile::Skewed => {
            let subjects = (n as u64 / 4).max(1);
            let p = zipf(preds, 1.1);
            let o = zipf((n as u64 / 3).max(1), 1.0);
            for _ in 0..n {
                out.push(TripleId::new(
                    rng.random_range(0..subjects),
                    p.sample(&mut rng) as u64 - 1,
                    o.sample(&mut rng) as u64 - 1,
                ));
            }
        }
        Profile::DbpediaLike => dbpedia_like(&mut rng, n, preds, &mut out),
    }
    out.sort_unstable();
    out.dedup();
    densify(&mut out);
    out
}

fn dbpedia_like(rng: &mut ChaCha8Rng, n: usize, preds: u64, out: &mut Vec<TripleId>) {
    let pool = (n as u64 / 8).max(1);
    let predicate = zipf(preds, 1.0);
    let shared = zipf(pool, 0.9);
    let extra_predicates = Poisson::new(4.5).expect("positive mean");
    let extra_objects = Geometric::new(0.7).expect("probability in (0, 1]");
    let mut next_literal = pool;
    let mut subject = 0u64;
    let mut chosen = Vec::new();
    while out.len() < n {
        let k = 1 + extra_predicates.sample(rng) as usize;
        chosen.clear();
        for _ in 0..4 * k {
            if chosen.len() == k {
                break;
            }
            let p = predicate.sample(rng) as u64 - 1;
            if !chosen.contains(&p) {
                chosen.push(p);
            }
        }
        for &p in &chosen {
            for _ in 0..=extra_objects.sample(rng) {
                let o = if rng.random_bool(0.5) {
                    shared.sample(rng) as u64 - 1
                } else {
                    next_literal += 1;
                    next_literal
                };
                out.push(TripleId::new(subject, p, o));
            }
        }
        subject += 1;
    }
    out.truncate(n);
}
