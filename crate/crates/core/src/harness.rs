//! Seeded experiment runner: trials, snapshots, ground truth and CSV output.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{ConfigError, HarnessError};
use crate::estimators::{BucketSampler, ExactCounter, OpCounters, PqSampler, StreamEstimator};
use crate::graph::{exact_butterfly_count, Edge};
use crate::hashing::{HashConfig, MIN_SAMPLE_SIZE};
use crate::stream::{dedup_first_occurrence, edge_set_digest, StreamSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    DeabcPq,
    DeabcBucket,
    Fable,
    Exact,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Self::DeabcPq, Self::DeabcBucket, Self::Fable, Self::Exact];

    pub fn name(self) -> &'static str {
        match self {
            Self::DeabcPq => "deabc-pq",
            Self::DeabcBucket => "deabc-bucket",
            Self::Fable => "fable",
            Self::Exact => "exact",
        }
    }

    pub fn is_sampling(self) -> bool {
        self != Self::Exact
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| ConfigError::UnknownAlgorithm(s.to_string()))
    }
}

/// Builds the estimator for one trial; hash seeds are derived from `seed`.
pub fn build_estimator(
    algorithm: Algorithm,
    sample_size: usize,
    seed: u64,
) -> Result<Box<dyn StreamEstimator>, ConfigError> {
    if algorithm == Algorithm::Exact {
        return Ok(Box::new(ExactCounter::new()));
    }
    let hash = HashConfig::from_trial_seed(seed, sample_size)?;
    Ok(match algorithm {
        Algorithm::DeabcPq => Box::new(PqSampler::deabc(hash)),
        Algorithm::Fable => Box::new(PqSampler::fable(hash)),
        Algorithm::DeabcBucket => Box::new(BucketSampler::new(hash)),
        Algorithm::Exact => unreachable!(),
    })
}

/// Accepts a plain integer or `2^k`.
pub fn parse_sample_size(s: &str) -> Result<usize, ConfigError> {
    let bad = || ConfigError::BadSampleSize(s.to_string());
    let t = s.trim();
    if let Some(exp) = t.strip_prefix("2^") {
        let k: u32 = exp.parse().map_err(|_| bad())?;
        return 1usize.checked_shl(k).filter(|_| k < usize::BITS).ok_or_else(bad);
    }
    t.parse().map_err(|_| bad())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    /// `M`; ignored by the exact counter.
    pub sample_size: usize,
    pub seeds: Vec<u64>,
    pub stream: StreamSpec,
    /// Number of evenly spaced snapshots `T`.
    pub snapshots: usize,
    /// CSV destination; results are only returned when absent.
    pub output: Option<PathBuf>,
    /// Sidecar holding the exact count, created on first use.
    pub ground_truth: Option<PathBuf>,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(algorithm: Algorithm, sample_size: usize, stream: StreamSpec) -> Self {
        Self {
            algorithm,
            sample_size,
            seeds: vec![0],
            stream,
            snapshots: 1,
            output: None,
            ground_truth: None,
            threads: None,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.algorithm.is_sampling() && self.sample_size < MIN_SAMPLE_SIZE {
            return Err(ConfigError::SampleTooSmall {
                min: MIN_SAMPLE_SIZE,
                got: self.sample_size,
            });
        }
        if self.snapshots == 0 {
            return Err(ConfigError::NoSnapshots);
        }
        if self.seeds.is_empty() {
            return Err(ConfigError::NoSeeds);
        }
        self.stream.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateSnapshot {
    /// Stream elements processed when the snapshot was taken.
    pub elements: usize,
    pub estimate: f64,
    pub distinct_estimate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub seed: u64,
    pub elements: usize,
    pub final_estimate: f64,
    pub distinct_estimate: f64,
    pub exact_count: Option<u64>,
    /// `|c - ĉ| / c × 100`; present exactly when `exact_count` is.
    pub relative_error: Option<f64>,
    pub edges_per_second: f64,
    pub snapshots: Vec<EstimateSnapshot>,
    pub counters: OpCounters,
}

/// Relative error in percent. A zero count gives 0 for a zero estimate and
/// infinity otherwise.
pub fn relative_error_pct(exact: u64, estimate: f64) -> f64 {
    let c = exact as f64;
    if exact == 0 {
        return if estimate == 0.0 { 0.0 } else { f64::INFINITY };
    }
    (c - estimate).abs() / c * 100.0
}

/// Element positions after which snapshots are taken: `⌈n·i/T⌉` for
/// `i = 1..=T`.
pub fn snapshot_points(n: usize, t: usize) -> Vec<usize> {
    (1..=t).map(|i| (n * i).div_ceil(t)).collect()
}

/// Runs one seeded trial over a materialized stream.
pub fn run_trial(
    cfg: &ExperimentConfig,
    stream: &[Edge],
    exact: Option<u64>,
    seed: u64,
) -> Result<TrialResult, HarnessError> {
    cfg.validate()?;
    let mut est = build_estimator(cfg.algorithm, cfg.sample_size, seed).map_err(|e| HarnessError::Trial {
        seed,
        reason: e.to_string(),
    })?;
    let mut snapshots = Vec::with_capacity(cfg.snapshots);
    let mut done = 0;
    let start = Instant::now();
    for end in snapshot_points(stream.len(), cfg.snapshots) {
        for &e in &stream[done..end] {
            est.process(e);
        }
        done = end;
        snapshots.push(EstimateSnapshot {
            elements: end,
            estimate: est.estimate(),
            distinct_estimate: est.distinct_estimate(),
        });
    }
    let secs = start.elapsed().as_secs_f64().max(1e-9);
    let final_estimate = est.estimate();
    let exact_count = exact.or_else(|| (cfg.algorithm == Algorithm::Exact).then_some(final_estimate as u64));
    Ok(TrialResult {
        seed,
        elements: stream.len(),
        final_estimate,
        distinct_estimate: est.distinct_estimate(),
        exact_count,
        relative_error: exact_count.map(|c| relative_error_pct(c, final_estimate)),
        edges_per_second: stream.len() as f64 / secs,
        snapshots,
        counters: est.counters(),
    })
}

/// Runs every seed of `cfg` over `stream` in parallel; results come back in
/// seed order.
pub fn run_trials(
    cfg: &ExperimentConfig,
    stream: &[Edge],
    exact: Option<u64>,
) -> Result<Vec<TrialResult>, HarnessError> {
    cfg.validate()?;
    let run = || {
        cfg.seeds
            .par_iter()
            .map(|&seed| run_trial(cfg, stream, exact, seed))
            .collect::<Result<Vec<_>, _>>()
    };
    match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| HarnessError::Trial {
                seed: cfg.seeds[0],
                reason: format!("thread pool: {e}"),
            })?
            .install(run),
        None => run(),
    }
}

/// Reads the exact butterfly count from a sidecar, or computes and writes it.
///
/// The sidecar holds `<digest> <count>`, where the digest identifies the
/// distinct edge set; a bare count is also accepted.
pub fn resolve_ground_truth(path: &Path, stream: &[Edge]) -> Result<u64, HarnessError> {
    let digest = edge_set_digest(stream);
    let gt_err = |reason: String| HarnessError::GroundTruth {
        path: path.to_path_buf(),
        reason,
    };
    match fs::read_to_string(path) {
        Ok(text) => {
            let tokens: Vec<&str> = text.split_whitespace().collect();
            let count = match tokens.as_slice() {
                [count] => count,
                [stored, count] => {
                    if *stored != digest {
                        return Err(gt_err(format!("digest {stored} does not match stream digest {digest}")));
                    }
                    count
                }
                _ => return Err(gt_err("expected `<digest> <count>` or `<count>`".into())),
            };
            count.parse().map_err(|_| gt_err(format!("bad count {count:?}")))
        }
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            let count = exact_butterfly_count(dedup_first_occurrence(stream));
            fs::write(path, format!("{digest} {count}\n")).map_err(|source| HarnessError::Io {
                path: path.to_path_buf(),
                source,
            })?;
            Ok(count)
        }
        Err(source) => Err(HarnessError::Io {
            path: path.to_path_buf(),
            source,
        }),
    }
}

/// Aggregate over all trials of an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub mean_estimate: f64,
    pub stddev_estimate: f64,
    pub mean_distinct_estimate: f64,
    pub mean_relative_error: Option<f64>,
    pub mean_edges_per_second: f64,
    pub max_edge_slots: u64,
    pub max_aux_slots: u64,
    pub mean_snapshots: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutcome {
    pub algorithm: Algorithm,
    pub sample_size: usize,
    pub exact: Option<u64>,
    pub trials: Vec<TrialResult>,
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

impl ExperimentOutcome {
    pub fn summary(&self) -> Summary {
        let t = &self.trials;
        let mean_estimate = mean(t.iter().map(|r| r.final_estimate));
        let stddev_estimate = if t.len() > 1 {
            let ss: f64 = t.iter().map(|r| (r.final_estimate - mean_estimate).powi(2)).sum();
            (ss / (t.len() - 1) as f64).sqrt()
        } else {
            0.0
        };
        let snaps = t.first().map_or(0, |r| r.snapshots.len());
        Summary {
            mean_estimate,
            stddev_estimate,
            mean_distinct_estimate: mean(t.iter().map(|r| r.distinct_estimate)),
            mean_relative_error: self.exact.map(|_| mean(t.iter().filter_map(|r| r.relative_error))),
            mean_edges_per_second: mean(t.iter().map(|r| r.edges_per_second)),
            max_edge_slots: t.iter().map(|r| r.counters.peak_edge_slots).max().unwrap_or(0),
            max_aux_slots: t.iter().map(|r| r.counters.peak_aux_slots).max().unwrap_or(0),
            mean_snapshots: (0..snaps)
                .map(|i| mean(t.iter().map(|r| r.snapshots[i].estimate)))
                .collect(),
        }
    }

    /// Writes one row per trial and a final row whose seed is `summary`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), HarnessError> {
        let mut w = csv::Writer::from_writer(out);
        let snaps = self.trials.first().map_or(0, |r| r.snapshots.len());
        let mut header: Vec<String> = CSV_COLUMNS.iter().map(|s| s.to_string()).collect();
        header.extend((1..=snaps).map(|i| format!("snapshot_{i}")));
        w.write_record(&header)?;

        let m = if self.algorithm.is_sampling() {
            self.sample_size.to_string()
        } else {
            String::new()
        };
        let exact = self.exact.map_or(String::new(), |c| c.to_string());
        let opt = |x: Option<f64>| x.map_or(String::new(), |v| v.to_string());
        for r in &self.trials {
            let mut row = vec![
                r.seed.to_string(),
                self.algorithm.to_string(),
                m.clone(),
                r.elements.to_string(),
                r.distinct_estimate.to_string(),
                r.final_estimate.to_string(),
                r.exact_count.map_or(String::new(), |c| c.to_string()),
                opt(r.relative_error),
                r.edges_per_second.to_string(),
                r.counters.peak_edge_slots.to_string(),
                r.counters.peak_aux_slots.to_string(),
                String::new(),
            ];
            row.extend(r.snapshots.iter().map(|s| s.estimate.to_string()));
            w.write_record(&row)?;
        }
        let s = self.summary();
        let mut row = vec![
            "summary".to_string(),
            self.algorithm.to_string(),
            m,
            self.trials.first().map_or(0, |r| r.elements).to_string(),
            s.mean_distinct_estimate.to_string(),
            s.mean_estimate.to_string(),
            exact,
            opt(s.mean_relative_error),
            s.mean_edges_per_second.to_string(),
            s.max_edge_slots.to_string(),
            s.max_aux_slots.to_string(),
            s.stddev_estimate.to_string(),
        ];
        row.extend(s.mean_snapshots.iter().map(|x| x.to_string()));
        w.write_record(&row)?;
        w.flush().map_err(|source| HarnessError::Io {
            path: PathBuf::from("<csv>"),
            source,
        })?;
        Ok(())
    }
}

/// Fixed CSV columns, followed by `snapshot_1 … snapshot_T`.
pub const CSV_COLUMNS: [&str; 12] = [
    "seed",
    "algorithm",
    "M",
    "elements",
    "distinct_estimate",
    "estimate",
    "exact",
    "rel_err_pct",
    "edges_per_sec",
    "peak_edge_slots",
    "peak_aux_slots",
    "estimate_stddev",
];

/// Validates, materializes the stream, resolves ground truth, runs all seeds
/// and writes the CSV if an output path is set.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome, HarnessError> {
    cfg.validate()?;
    let stream = cfg.stream.materialize()?;
    let mut exact = match &cfg.ground_truth {
        Some(path) => Some(resolve_ground_truth(path, &stream)?),
        None => None,
    };
    let trials = run_trials(cfg, &stream, exact)?;
    if exact.is_none() && cfg.algorithm == Algorithm::Exact {
        exact = trials[0].exact_count;
    }
    let outcome = ExperimentOutcome {
        algorithm: cfg.algorithm,
        sample_size: cfg.sample_size,
        exact,
        trials,
    };
    if let Some(path) = &cfg.output {
        let io_err = |source| HarnessError::Io {
            path: path.clone(),
            source,
        };
        let file = fs::File::create(path).map_err(io_err)?;
        outcome.write_csv(std::io::BufWriter::new(file))?;
    }
    Ok(outcome)
}
