//! Query workloads drawn from an index and the per-shape timing harness.

use std::fmt;
use std::hint::black_box;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::index::RdfIndex;
use crate::triple::{Permutation, Shape, TriplePattern, WILDCARD};

pub const DEFAULT_QUERIES: usize = 5000;
pub const DEFAULT_RUNS: usize = 5;

/// Patterns of one shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Workload {
    pub shape: Shape,
    pub seed: u64,
    pub patterns: Vec<TriplePattern>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct WorkloadOptions {
    /// Every `k`-th pattern is replaced by one with no matches, when one is
    /// found among random in-range IDs.
    pub miss_every: Option<usize>,
}

impl Workload {
    /// Draws `n` indexed triples uniformly at random and keeps the
    /// components bound by `shape`, so every pattern has a match.
    pub fn generate(index: &RdfIndex, shape: Shape, n: usize, seed: u64) -> Self {
        Self::generate_with(index, shape, n, seed, WorkloadOptions::default())
    }

    pub fn generate_with(index: &RdfIndex, shape: Shape, n: usize, seed: u64, options: WorkloadOptions) -> Self {
        let spo = index.trie(Permutation::Spo).expect("every layout has SPO");
        let total = spo.num_triples();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (shape as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let mut patterns = Vec::with_capacity(n);
        for k in 0..n {
            let t = spo
                .triple_at(rng.random_range(0..total))
                .expect("position drawn within bounds");
            let mut p = TriplePattern::from_triple(t, shape);
            if matches!(options.miss_every, Some(m) if m > 0 && k % m == m - 1) {
                if let Some(miss) = find_miss(index, shape, &mut rng) {
                    p = miss;
                }
            }
            patterns.push(p);
        }
        Self {
            shape,
            seed,
            patterns,
        }
    }
}

fn find_miss(index: &RdfIndex, shape: Shape, rng: &mut ChaCha8Rng) -> Option<TriplePattern> {
    let c = index.counts();
    let bounds = [c.subjects, c.predicates, c.objects];
    let bound = shape.bound();
    (0..32).find_map(|_| {
        let mut a = [WILDCARD; 3];
        for k in 0..3 {
            if bound[k] {
                a[k] = rng.random_range(0..bounds[k]);
            }
        }
        let p = TriplePattern::new(a[0], a[1], a[2]);
        index.query(p).next().is_none().then_some(p)
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub shape: Shape,
    pub queries: usize,
    /// Matches of one pass over the workload.
    pub matches: u64,
    pub ns_per_triple: f64,
    pub runs: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

pub const CSV_HEADER: &str = "shape,queries,matches,ns_per_triple,runs";

impl BenchReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{},{:.3},{}\n",
                r.shape, r.queries, r.matches, r.ns_per_triple, r.runs
            ));
        }
        s
    }
}

impl fmt::Display for BenchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<6} {:>8} {:>12} {:>14} {:>5}", "shape", "queries", "matches", "ns/triple", "runs")?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<6} {:>8} {:>12} {:>14.2} {:>5}",
                r.shape, r.queries, r.matches, r.ns_per_triple, r.runs
            )?;
        }
        Ok(())
    }
}

/// Runs the workload once and returns its matches and elapsed time.
pub fn time_workload(index: &RdfIndex, workload: &Workload) -> (u64, Duration) {
    let start = Instant::now();
    let mut matches = 0u64;
    for &p in &workload.patterns {
        for t in index.query(black_box(p)) {
            black_box(t);
            matches += 1;
        }
    }
    (matches, start.elapsed())
}

/// Times every workload `runs` times on the calling thread. Nanoseconds
/// per triple divide the total time by the total matches of all runs.
pub fn run_bench(index: &RdfIndex, workloads: &[Workload], runs: usize) -> BenchReport {
    let runs = runs.max(1);
    let rows = workloads
        .iter()
        .map(|w| {
            let mut total = Duration::ZERO;
            let mut matches = 0;
            for _ in 0..runs {
                let (m, d) = time_workload(index, w);
                total += d;
                matches += m;
            }
            BenchRow {
                shape: w.shape,
                queries: w.patterns.len(),
                matches: matches / runs as u64,
                ns_per_triple: if matches == 0 {
                    0.0
                } else {
                    total.as_nanos() as f64 / matches as f64
                },
                runs,
            }
        })
        .collect();
    BenchReport { rows }
}
