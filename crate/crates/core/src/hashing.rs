//! Duplicate-consistent edge hashing.
//!
//! Every occurrence of an edge hashes to the same priority, bucket and
//! register value, so repeats can never change what gets sampled. The hash is
//! XXH3-64 keyed by a 64-bit seed over [`Edge::canonical_bytes`]; it is stable
//! across platforms and releases, and `tests/data/hash_vectors.txt` pins it.

use std::cmp::Ordering;

use xxhash_rust::xxh3::xxh3_64_with_seed;

use crate::error::ConfigError;
use crate::graph::Edge;

/// Smallest sample size the estimators accept.
pub const MIN_SAMPLE_SIZE: usize = 16;

const TWO_POW_MINUS_53: f64 = 1.0 / (1u64 << 53) as f64;

/// Keyed 64-bit hash of the canonical edge encoding.
#[inline]
pub fn edge_hash64(seed: u64, e: Edge) -> u64 {
    xxh3_64_with_seed(&e.canonical_bytes(), seed)
}

/// Maps a 64-bit hash into `[0, m)` by multiply-shift. `m = 1` always gives 0.
#[inline]
pub fn reduce_to_range(h: u64, m: usize) -> usize {
    ((h as u128 * m as u128) >> 64) as usize
}

/// A hash-derived priority, strictly inside `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Priority(f64);

impl Priority {
    /// Maps a 64-bit hash to the midpoint of its 2⁻⁵²-wide cell,
    /// `(2⌊h/2¹²⌋ + 1)·2⁻⁵³`. The odd numerator fits in 53 bits, so the
    /// result is exact in `f64`, monotone in `h`, and never 0 or 1.
    #[inline]
    pub fn from_hash(h: u64) -> Self {
        Self((((h >> 12) << 1) | 1) as f64 * TWO_POW_MINUS_53)
    }

    /// Wraps a value already known to lie in `(0, 1)`.
    pub fn new(value: f64) -> Option<Self> {
        (value > 0.0 && value < 1.0).then_some(Self(value))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// The geometric register value `-floor(log2 p)`, always ≥ 1.
    #[inline]
    pub fn rho(self) -> u32 {
        rho_of(self)
    }
}

impl Eq for Priority {}

impl PartialOrd for Priority {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Priority {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// `-floor(log2 p)` read straight off the IEEE-754 exponent, so values at
/// powers of two land in the right cell. For `p` in `[2^-j, 2^-(j-1))` this is
/// `j`.
#[inline]
pub fn rho_of(p: Priority) -> u32 {
    let exp = ((p.0.to_bits() >> 52) & 0x7ff) as i32 - 1023;
    debug_assert!(exp < 0, "priority {} outside (0,1)", p.0);
    (-exp) as u32
}

/// One keyed hash role.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeHasher {
    seed: u64,
}

impl EdgeHasher {
    pub const fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub const fn seed(&self) -> u64 {
        self.seed
    }

    #[inline]
    pub fn hash64(&self, e: Edge) -> u64 {
        edge_hash64(self.seed, e)
    }

    #[inline]
    pub fn priority(&self, e: Edge) -> Priority {
        Priority::from_hash(self.hash64(e))
    }

    #[inline]
    pub fn bucket(&self, e: Edge, m: usize) -> usize {
        reduce_to_range(self.hash64(e), m)
    }
}

/// The two independent hash roles plus the bucket count `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HashConfig {
    priority: EdgeHasher,
    position: EdgeHasher,
    num_buckets: usize,
}

impl HashConfig {
    pub fn new(
        priority_seed: u64,
        position_seed: u64,
        num_buckets: usize,
    ) -> Result<Self, ConfigError> {
        if priority_seed == position_seed {
            return Err(ConfigError::SeedClash(priority_seed));
        }
        if num_buckets < MIN_SAMPLE_SIZE {
            return Err(ConfigError::SampleTooSmall {
                min: MIN_SAMPLE_SIZE,
                got: num_buckets,
            });
        }
        Ok(Self {
            priority: EdgeHasher::new(priority_seed),
            position: EdgeHasher::new(position_seed),
            num_buckets,
        })
    }

    /// Derives both seeds from one trial seed with SplitMix64.
    pub fn from_trial_seed(seed: u64, num_buckets: usize) -> Result<Self, ConfigError> {
        let priority_seed = splitmix64(seed);
        let mut position_seed = splitmix64(seed ^ 0xA076_1D64_78BD_642F);
        if position_seed == priority_seed {
            position_seed = splitmix64(position_seed);
        }
        Self::new(priority_seed, position_seed, num_buckets)
    }

    pub fn priority_seed(&self) -> u64 {
        self.priority.seed()
    }

    pub fn position_seed(&self) -> u64 {
        self.position.seed()
    }

    pub fn num_buckets(&self) -> usize {
        self.num_buckets
    }

    #[inline]
    pub fn priority_of(&self, e: Edge) -> Priority {
        self.priority.priority(e)
    }

    #[inline]
    pub fn bucket_of(&self, e: Edge) -> usize {
        self.position.bucket(e, self.num_buckets)
    }
}

/// SplitMix64 finaliser.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
