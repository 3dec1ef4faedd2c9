mod commands;
mod pattern;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use permtrie::{IndexLayout, Shape};

/// Build, query and benchmark compressed permuted-trie RDF indexes.
#[derive(Debug, Parser)]
#[command(name = "permtrie", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Index layout to build: 3t, cc, 2tp or 2to.
    #[arg(long, global = true, default_value = "3t", value_parser = parse_layout)]
    pub layout: IndexLayout,
    /// Seed for workload generation.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Also write the report as CSV to this path.
    #[arg(long, global = true, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    /// Term dictionary sidecar. Defaults to `<index>.dict`.
    #[arg(long, global = true, value_name = "PATH")]
    pub dictionary: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build an index from an `.nt` or `.ids` file.
    Build(BuildArgs),
    /// Print the triples matching a pattern such as "? 1 0".
    Query(QueryArgs),
    /// Print counts, per-sequence space and fan-out statistics.
    Stats(StatsArgs),
    /// Time all pattern shapes on a workload drawn from the index.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// N-Triples (`.nt`) or whitespace-separated ID triples.
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    /// Index file to write.
    #[arg(long, value_name = "PATH")]
    pub output: PathBuf,
    /// Write the encoded, sorted triples next to the index as `.ids`.
    #[arg(long)]
    pub export_ids: bool,
    /// Drop unparsable N-Triples lines instead of failing.
    #[arg(long)]
    pub skip_malformed: bool,
    /// In-memory sort budget in bytes before spilling sorted runs to disk.
    #[arg(long, value_name = "BYTES", default_value_t = permtrie::ingest::DEFAULT_SORT_BUDGET)]
    pub sort_budget: usize,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    pub index: PathBuf,
    /// Three tokens: `?`, an ID, `<iri>` or `"literal"`. May be given as
    /// one quoted argument or three.
    #[arg(required = true, num_args = 1..=3, allow_hyphen_values = true)]
    pub pattern: Vec<String>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    pub index: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    pub index: PathBuf,
    /// Comma-separated shapes, e.g. "SPO,S?O". Defaults to all eight.
    #[arg(long, value_delimiter = ',', value_parser = parse_shape)]
    pub shapes: Vec<Shape>,
    /// Patterns per shape.
    #[arg(long, default_value_t = permtrie::workload::DEFAULT_QUERIES as u64, value_parser = clap::value_parser!(u64).range(1..))]
    pub queries: u64,
    /// Timed passes over each workload; the report averages them.
    #[arg(long, default_value_t = permtrie::workload::DEFAULT_RUNS as u64, value_parser = clap::value_parser!(u64).range(1..))]
    pub runs: u64,
    /// Replace every K-th pattern with one that matches nothing.
    #[arg(long, value_name = "K")]
    pub miss_every: Option<usize>,
}

fn parse_layout(s: &str) -> Result<IndexLayout, String> {
    s.parse()
}

fn parse_shape(s: &str) -> Result<Shape, String> {
    s.parse()
}

/// A bad invocation rather than bad data.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Build(args) => commands::build(&cli.global, args),
        Command::Query(args) => commands::query(&cli.global, args),
        Command::Stats(args) => commands::stats(&cli.global, args),
        Command::Bench(args) => commands::bench(&cli.global, args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
