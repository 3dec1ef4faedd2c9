use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use permtrie::ingest::{self, OnMalformed};
use permtrie::workload::{run_bench, Workload, WorkloadOptions};
use permtrie::{Component, Dictionary, IndexStats, Permutation, RdfIndex, Shape, TripleId};

use crate::pattern::{resolve, tokenize};
use crate::{BenchArgs, BuildArgs, GlobalArgs, QueryArgs, StatsArgs, UsageError};

fn dictionary_path(global: &GlobalArgs, index: &Path) -> PathBuf {
    global
        .dictionary
        .clone()
        .unwrap_or_else(|| index.with_extension("dict"))
}

fn load_index(path: &Path) -> Result<RdfIndex> {
    let file = File::open(path).with_context(|| format!("cannot open index {}", path.display()))?;
    RdfIndex::load(&mut BufReader::new(file)).with_context(|| format!("cannot load index {}", path.display()))
}

fn write_file(path: &Path, write: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    let mut out = BufWriter::new(file);
    write(&mut out)?;
    out.flush()?;
    Ok(())
}

fn sequences_csv(stats: &IndexStats) -> String {
    let mut s = String::from("trie,sequence,codec,length,bits,bits_per_triple,percent\n");
    for q in &stats.sequences {
        s.push_str(&format!(
            "{},{},{},{},{},{:.4},{:.3}\n",
            q.structure, q.name, q.codec, q.len, q.bits, q.bits_per_triple, q.percent
        ));
    }
    s.push_str(&format!(
        "ALL,total,,{},{},{:.4},100.000\n",
        stats.counts.triples, stats.total_bits, stats.bits_per_triple
    ));
    s
}

pub fn build(global: &GlobalArgs, args: &BuildArgs) -> Result<()> {
    let input = File::open(&args.input).with_context(|| format!("cannot open {}", args.input.display()))?;
    let reader = BufReader::new(input);
    let is_nt = args.input.extension().is_some_and(|e| e == "nt");
    let (dict, triples) = if is_nt {
        let mode = if args.skip_malformed {
            OnMalformed::Skip
        } else {
            OnMalformed::Abort
        };
        let mut parser = ingest::parse_ntriples(reader, mode);
        let raw = parser.by_ref().collect::<Result<Vec<_>, _>>()?;
        if parser.skipped() > 0 {
            eprintln!("skipped {} malformed lines", parser.skipped());
        }
        let (dict, ids) = ingest::encode(&raw);
        (Some(dict), ids)
    } else {
        let ids = ingest::parse_id_triples(reader).collect::<Result<Vec<TripleId>, _>>()?;
        (None, ids)
    };
    let sorted = ingest::prepare_with_budget(triples, Permutation::Spo, args.sort_budget)?;
    let index = RdfIndex::build(&sorted, global.layout)?;

    write_file(&args.output, |out| Ok(index.save(out)?))?;
    if let Some(dict) = &dict {
        let path = dictionary_path(global, &args.output);
        write_file(&path, |out| Ok(dict.write_to(out)?))?;
        eprintln!("dictionary written to {}", path.display());
    }
    if args.export_ids {
        let path = args.output.with_extension("ids");
        if fs::canonicalize(&path).ok() == fs::canonicalize(&args.input).ok() {
            bail!(UsageError(format!("--export-ids would overwrite the input {}", path.display())));
        }
        write_file(&path, |out| Ok(ingest::write_id_triples(out, &sorted)?))?;
        eprintln!("triples written to {}", path.display());
    }

    let stats = index.stats();
    println!(
        "{} index: {} triples, {} bits, {:.3} bits/triple",
        index.layout(),
        stats.counts.triples,
        stats.total_bits,
        stats.bits_per_triple
    );
    for q in &stats.sequences {
        println!(
            "  {:<4} {:<16} {:<8} {:>10.3} bits/triple {:>7.2}%",
            q.structure, q.name, q.codec, q.bits_per_triple, q.percent
        );
    }
    if let Some(path) = &global.csv {
        fs::write(path, sequences_csv(&stats)).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}

fn render_term(term: &str) -> String {
    if term.starts_with('"') || term.starts_with("_:") {
        term.to_string()
    } else {
        format!("<{term}>")
    }
}

pub fn query(global: &GlobalArgs, args: &QueryArgs) -> Result<()> {
    let tokens = tokenize(&args.pattern.join(" ")).map_err(|e| UsageError(e.to_string()))?;
    let index = load_index(&args.index)?;
    let dict_path = dictionary_path(global, &args.index);
    let dict = if global.dictionary.is_some() || dict_path.exists() {
        let file = File::open(&dict_path).with_context(|| format!("cannot open dictionary {}", dict_path.display()))?;
        Some(Dictionary::read_from(&mut BufReader::new(file))?)
    } else {
        None
    };
    let pattern = resolve(&tokens, dict.as_ref())?;
    index.check_pattern(&pattern)?;

    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let mut count = 0u64;
    for t in index.query(pattern) {
        match &dict {
            Some(d) => writeln!(
                out,
                "{} {} {} .",
                render_term(d.decode(Component::Subject, t.first)?),
                render_term(d.decode(Component::Predicate, t.second)?),
                render_term(d.decode(Component::Object, t.third)?)
            )?,
            None => writeln!(out, "{t}")?,
        }
        count += 1;
    }
    writeln!(out, "# count {count}")?;
    out.flush()?;
    Ok(())
}

pub fn stats(global: &GlobalArgs, args: &StatsArgs) -> Result<()> {
    let index = load_index(&args.index)?;
    let stats = index.stats();
    print!("{stats}");
    if let Some(path) = &global.csv {
        fs::write(path, sequences_csv(&stats)).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}

pub fn bench(global: &GlobalArgs, args: &BenchArgs) -> Result<()> {
    let index = load_index(&args.index)?;
    let shapes = if args.shapes.is_empty() {
        Shape::ALL.to_vec()
    } else {
        args.shapes.clone()
    };
    let options = WorkloadOptions {
        miss_every: args.miss_every,
    };
    let workloads: Vec<_> = shapes
        .iter()
        .map(|&s| Workload::generate_with(&index, s, args.queries as usize, global.seed, options))
        .collect();
    eprintln!(
        "{} index, {} triples, {} queries x {} runs per shape, seed {}",
        index.layout(),
        index.num_triples(),
        args.queries,
        args.runs,
        global.seed
    );
    let report = run_bench(&index, &workloads, args.runs as usize);
    eprint!("{report}");
    let csv = report.to_csv();
    print!("{csv}");
    if let Some(path) = &global.csv {
        fs::write(path, &csv).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}
