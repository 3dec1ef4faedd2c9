use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use permtrie::intseq::make_monotone;
use permtrie::{Codec, EncodedSequence, PlainSequence, RangeLayout};
use permtrie_bench::node_values;

const N: usize = 1 << 20;
const RANGE: usize = 32;

fn sequences() -> Vec<(Codec, EncodedSequence)> {
    let (values, bounds) = node_values(N, RANGE);
    let plain = PlainSequence::new(values);
    let monotone = make_monotone(&plain, &RangeLayout::new(bounds).unwrap()).unwrap();
    Codec::ALL
        .iter()
        .map(|&c| {
            let input = if c.requires_monotone() { &monotone } else { &plain };
            (c, EncodedSequence::encode(input, c).unwrap())
        })
        .collect()
}

fn positions(count: usize) -> Vec<usize> {
    (0..count).map(|i| (i * 7_919 + 13) % N).collect()
}

fn access(c: &mut Criterion) {
    let seqs = sequences();
    let pos = positions(4096);
    let mut g = c.benchmark_group("access");
    g.throughput(Throughput::Elements(pos.len() as u64));
    for (codec, seq) in &seqs {
        g.bench_with_input(BenchmarkId::from_parameter(codec), seq, |b, seq| {
            b.iter(|| pos.iter().map(|&i| seq.access(i).unwrap()).fold(0u64, u64::wrapping_add))
        });
    }
    g.finish();
}

fn find(c: &mut Criterion) {
    let seqs = sequences();
    let ranges: Vec<(usize, usize)> = positions(4096)
        .into_iter()
        .map(|i| {
            let b = i / RANGE * RANGE;
            (b, (b + RANGE).min(N))
        })
        .collect();
    let mut g = c.benchmark_group("find");
    g.throughput(Throughput::Elements(ranges.len() as u64));
    for (codec, seq) in &seqs {
        let targets: Vec<u64> = ranges.iter().map(|&(b, e)| seq.access(b + (e - b) / 2).unwrap()).collect();
        g.bench_with_input(BenchmarkId::from_parameter(codec), seq, |b, seq| {
            b.iter(|| {
                ranges
                    .iter()
                    .zip(&targets)
                    .filter(|&(&(i, j), &x)| seq.find(i, j, x).unwrap().is_some())
                    .count()
            })
        });
    }
    g.finish();
}

fn scan(c: &mut Criterion) {
    let seqs = sequences();
    let mut g = c.benchmark_group("scan");
    g.throughput(Throughput::Elements(N as u64));
    for (codec, seq) in &seqs {
        g.bench_with_input(BenchmarkId::from_parameter(codec), seq, |b, seq| {
            b.iter(|| black_box(seq.cursor_at(0).unwrap().fold(0u64, u64::wrapping_add)))
        });
    }
    g.finish();
}

criterion_group!(benches, access, find, scan);
criterion_main!(benches);
