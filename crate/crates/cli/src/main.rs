use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use butterfly_core::harness::parse_sample_size;
use butterfly_core::stream::{dedup_first_occurrence, edge_set_digest, StreamSource};
use butterfly_core::{exact_butterfly_count, run_experiment, Algorithm, ExperimentConfig, StreamSpec};

#[derive(Parser)]
#[command(name = "butterfly", version, about = "Streaming butterfly counting experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded trials of one estimator and write a CSV of results.
    Run(RunArgs),
    /// Print the exact butterfly count of a stream.
    Truth(StreamArgs),
    /// Write a stream as an edge list.
    Generate {
        #[command(flatten)]
        stream: StreamArgs,
        /// Destination; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct StreamArgs {
    /// Edge-list file (optionally .gz) or a generator such as
    /// gen:random:L:R:E:SEED or gen:complete:A:B.
    #[arg(long)]
    input: String,
    /// Expected number of extra occurrences per edge.
    #[arg(long, default_value_t = 0.0)]
    dup_ratio: f64,
    /// Seed for duplicate injection and shuffling.
    #[arg(long, default_value_t = 0)]
    shuffle_seed: u64,
    /// Drop repeated edges in the input before injecting duplicates.
    #[arg(long)]
    dedup_first: bool,
    /// Truncate the stream to this many elements.
    #[arg(long)]
    limit: Option<usize>,
}

impl StreamArgs {
    fn spec(&self) -> Result<StreamSpec> {
        Ok(StreamSpec {
            source: StreamSource::parse(&self.input)?,
            dup_ratio: self.dup_ratio,
            shuffle_seed: self.shuffle_seed,
            limit: self.limit,
            dedup_first: self.dedup_first,
        })
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    algorithm: String,
    /// Sample size M, as an integer or 2^k.
    #[arg(long, default_value = "2^10")]
    sample_size: String,
    /// Run seeds 0..N.
    #[arg(long, conflicts_with = "seed_list")]
    seeds: Option<u64>,
    /// Comma-separated explicit seeds.
    #[arg(long, value_delimiter = ',')]
    seed_list: Option<Vec<u64>>,
    #[command(flatten)]
    stream: StreamArgs,
    /// Number of evenly spaced estimate snapshots.
    #[arg(long, default_value_t = 1)]
    snapshots: usize,
    #[arg(long)]
    output: PathBuf,
    /// Exact-count sidecar; computed and written if missing.
    #[arg(long)]
    ground_truth: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
    /// Also report the process's peak resident memory on stderr.
    #[arg(long)]
    os_memory: bool,
}

fn run(args: RunArgs) -> Result<()> {
    let algorithm: Algorithm = args.algorithm.parse()?;
    let seeds = match (args.seeds, args.seed_list) {
        (_, Some(list)) => list,
        (Some(n), None) => (0..n).collect(),
        (None, None) => vec![0],
    };
    let cfg = ExperimentConfig {
        algorithm,
        sample_size: parse_sample_size(&args.sample_size)?,
        seeds,
        stream: args.stream.spec()?,
        snapshots: args.snapshots,
        output: Some(args.output.clone()),
        ground_truth: args.ground_truth,
        threads: args.threads,
    };
    let outcome = run_experiment(&cfg)?;
    let s = outcome.summary();
    eprintln!(
        "{} M={} trials={} mean={} stddev={}{} -> {}",
        algorithm,
        cfg.sample_size,
        outcome.trials.len(),
        s.mean_estimate,
        s.stddev_estimate,
        s.mean_relative_error
            .map_or(String::new(), |e| format!(" rel_err={e:.3}%")),
        args.output.display()
    );
    if args.os_memory {
        match peak_rss_kib() {
            Some(kib) => eprintln!("peak resident memory: {kib} KiB"),
            None => eprintln!("peak resident memory: unavailable on this platform"),
        }
    }
    Ok(())
}

fn peak_rss_kib() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    status
        .lines()
        .find_map(|l| l.strip_prefix("VmHWM:"))
        .and_then(|v| v.trim().trim_end_matches("kB").trim().parse().ok())
}

fn truth(args: StreamArgs) -> Result<()> {
    let edges = args.spec()?.materialize()?;
    let count = exact_butterfly_count(dedup_first_occurrence(&edges));
    println!("{} {count}", edge_set_digest(&edges));
    Ok(())
}

fn generate(args: StreamArgs, output: Option<PathBuf>) -> Result<()> {
    let edges = args.spec()?.materialize()?;
    let mut out: Box<dyn Write> = match &output {
        Some(p) => Box::new(std::io::BufWriter::new(
            std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(std::io::BufWriter::new(std::io::stdout().lock())),
    };
    for e in edges {
        writeln!(out, "{} {}", e.left_id(), e.right_id())?;
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Truth(args) => truth(args),
        Command::Generate { stream, output } => generate(stream, output),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
