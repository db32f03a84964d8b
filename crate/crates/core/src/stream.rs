//! Edge-stream ingestion, synthetic graphs and duplicate injection.

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::{Path, PathBuf};

use flate2::read::MultiGzDecoder;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashSet;
use sha2::{Digest, Sha256};

use crate::error::{ConfigError, StreamError};
use crate::graph::Edge;

/// Reads a whitespace-separated edge list. Files ending in `.gz` are
/// decompressed transparently.
pub fn parse_stream(path: impl AsRef<Path>) -> Result<Vec<Edge>, StreamError> {
    let path = path.as_ref();
    let io_err = |source| StreamError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::open(path).map_err(io_err)?;
    let reader: Box<dyn Read> = if path.extension().is_some_and(|x| x == "gz") {
        Box::new(MultiGzDecoder::new(file))
    } else {
        Box::new(file)
    };
    parse_reader(BufReader::new(reader)).map_err(|e| match e {
        StreamError::Io { source, .. } => io_err(source),
        other => other,
    })
}

/// Parses edge-list text. Lines starting with `%` or `#` and blank lines are
/// skipped; the first token is the left id, the second the right id, and any
/// further columns are ignored.
pub fn parse_reader<R: BufRead>(reader: R) -> Result<Vec<Edge>, StreamError> {
    let mut edges = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|source| StreamError::Io {
            path: PathBuf::new(),
            source,
        })?;
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('%') || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let mut id = |which: &str| -> Result<u64, StreamError> {
            let tok = tokens.next().ok_or_else(|| StreamError::Parse {
                line: line_no,
                reason: format!("missing {which} vertex id"),
            })?;
            tok.parse().map_err(|_| StreamError::Parse {
                line: line_no,
                reason: format!("{which} vertex id {tok:?} is not a non-negative integer"),
            })
        };
        let left = id("left")?;
        let right = id("right")?;
        edges.push(Edge::new(left, right));
    }
    Ok(edges)
}

/// Repeats every occurrence `k ≥ 1` times with `k ~ Geometric(1/(1+λ))`, so
/// `E[k] = 1 + λ`, then shuffles the whole result.
///
/// Uses ChaCha8 seeded from `seed`; draws for the repeat counts come first,
/// in input order, followed by a Fisher–Yates shuffle.
pub fn inject_duplicates(edges: &[Edge], dup_ratio: f64, seed: u64) -> Result<Vec<Edge>, ConfigError> {
    check_dup_ratio(dup_ratio)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fail = dup_ratio / (1.0 + dup_ratio);
    let mut out = Vec::with_capacity((edges.len() as f64 * (1.0 + dup_ratio) * 1.05) as usize);
    for &e in edges {
        let k = geometric_draw(&mut rng, fail);
        out.extend(std::iter::repeat(e).take(k));
    }
    out.shuffle(&mut rng);
    Ok(out)
}

/// Inverse transform for a geometric count on `{1, 2, …}` whose per-trial
/// failure probability is `fail`.
fn geometric_draw<R: Rng>(rng: &mut R, fail: f64) -> usize {
    if fail <= 0.0 {
        return 1;
    }
    let u: f64 = 1.0 - rng.gen::<f64>();
    let k = (u.ln() / fail.ln()).ceil();
    (k as usize).max(1)
}

fn check_dup_ratio(dup_ratio: f64) -> Result<(), ConfigError> {
    if dup_ratio >= 0.0 && dup_ratio.is_finite() {
        Ok(())
    } else {
        Err(ConfigError::NegativeDupRatio(dup_ratio))
    }
}

/// Keeps only the first occurrence of each edge, preserving order.
pub fn dedup_first_occurrence(edges: &[Edge]) -> Vec<Edge> {
    let mut seen = FxHashSet::default();
    edges.iter().copied().filter(|e| seen.insert(*e)).collect()
}

/// Hex SHA-256 over the sorted distinct edges, each as 16 little-endian bytes.
pub fn edge_set_digest(edges: &[Edge]) -> String {
    let mut distinct = dedup_first_occurrence(edges);
    distinct.sort_unstable();
    let mut hasher = Sha256::new();
    for e in &distinct {
        hasher.update(e.canonical_bytes());
    }
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// `edges` distinct edges drawn uniformly from a `left × right` grid, in
/// random order.
pub fn random_bipartite(left: u64, right: u64, edges: usize, seed: u64) -> Vec<Edge> {
    let cells = left.saturating_mul(right);
    assert!(edges as u64 <= cells, "{edges} edges do not fit in a {left}x{right} grid");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if edges as u64 * 2 > cells {
        let mut all = complete_bipartite(left, right);
        all.shuffle(&mut rng);
        all.truncate(edges);
        return all;
    }
    let mut seen = FxHashSet::default();
    let mut out = Vec::with_capacity(edges);
    while out.len() < edges {
        let e = Edge::new(rng.gen_range(0..left), rng.gen_range(0..right));
        if seen.insert(e) {
            out.push(e);
        }
    }
    out
}

/// All edges of `K_{a,b}` in row-major order.
pub fn complete_bipartite(a: u64, b: u64) -> Vec<Edge> {
    (0..a).flat_map(|u| (0..b).map(move |v| Edge::new(u, v))).collect()
}

/// Where a stream's base edges come from.
#[derive(Debug, Clone, PartialEq)]
pub enum StreamSource {
    File(PathBuf),
    /// `gen:random:L:R:E:SEED`.
    Random { left: u64, right: u64, edges: usize, seed: u64 },
    /// `gen:complete:A:B`.
    Complete { a: u64, b: u64 },
}

impl StreamSource {
    /// Interprets `gen:…` descriptors as generators and anything else as a
    /// file path.
    pub fn parse(s: &str) -> Result<Self, ConfigError> {
        let Some(rest) = s.strip_prefix("gen:") else {
            return Ok(Self::File(PathBuf::from(s)));
        };
        let bad = || ConfigError::BadGenerator(s.to_string());
        let parts: Vec<&str> = rest.split(':').collect();
        let num = |t: &str| t.parse::<u64>().map_err(|_| bad());
        match parts.as_slice() {
            ["random", l, r, e, seed] => {
                let (left, right, edges) = (num(l)?, num(r)?, num(e)?);
                if edges > left.saturating_mul(right) {
                    return Err(bad());
                }
                Ok(Self::Random {
                    left,
                    right,
                    edges: edges as usize,
                    seed: num(seed)?,
                })
            }
            ["complete", a, b] => Ok(Self::Complete { a: num(a)?, b: num(b)? }),
            _ => Err(bad()),
        }
    }

    pub fn load(&self) -> Result<Vec<Edge>, StreamError> {
        Ok(match self {
            Self::File(path) => parse_stream(path)?,
            Self::Random { left, right, edges, seed } => random_bipartite(*left, *right, *edges, *seed),
            Self::Complete { a, b } => complete_bipartite(*a, *b),
        })
    }
}

impl fmt::Display for StreamSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::File(p) => write!(f, "{}", p.display()),
            Self::Random { left, right, edges, seed } => write!(f, "gen:random:{left}:{right}:{edges}:{seed}"),
            Self::Complete { a, b } => write!(f, "gen:complete:{a}:{b}"),
        }
    }
}

/// A reproducible stream: base edges, optional first-occurrence dedup,
/// duplicate injection and truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct StreamSpec {
    pub source: StreamSource,
    /// `λ`; 0 leaves the base stream untouched (no injection, no shuffle).
    pub dup_ratio: f64,
    pub shuffle_seed: u64,
    /// Keep only the first `limit` elements of the final stream.
    pub limit: Option<usize>,
    /// Drop repeats already present in the source before injecting.
    pub dedup_first: bool,
}

impl StreamSpec {
    pub fn new(source: StreamSource) -> Self {
        Self {
            source,
            dup_ratio: 0.0,
            shuffle_seed: 0,
            limit: None,
            dedup_first: false,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        check_dup_ratio(self.dup_ratio)
    }

    pub fn materialize(&self) -> Result<Vec<Edge>, StreamError> {
        self.validate()?;
        let mut edges = self.source.load()?;
        if self.dedup_first {
            edges = dedup_first_occurrence(&edges);
        }
        if self.dup_ratio > 0.0 {
            edges = inject_duplicates(&edges, self.dup_ratio, self.shuffle_seed)?;
        }
        if let Some(limit) = self.limit {
            edges.truncate(limit);
        }
        Ok(edges)
    }
}
