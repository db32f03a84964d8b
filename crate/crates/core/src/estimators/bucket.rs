use super::{bucket_update_factor, OpCounters, StreamEstimator};
use crate::distinct::FmState;
use crate::graph::{Edge, SampledSubgraph};
use crate::hashing::{rho_of, HashConfig, Priority};

/// Bucket-based priority sampler.
///
/// Each edge hashes to one of `M` buckets; a bucket keeps the
/// lowest-priority distinct edge ever hashed to it. Because a lower priority
/// never has a smaller `rho`, the occupant's `rho` is also that bucket's
/// register for the distinct counter.
#[derive(Debug, Clone)]
pub struct BucketSampler {
    hash: HashConfig,
    buckets: Vec<Option<(Edge, Priority)>>,
    nonempty: usize,
    fm: FmState,
    g: SampledSubgraph,
    c_hat: f64,
    counters: OpCounters,
}

impl BucketSampler {
    pub fn new(hash: HashConfig) -> Self {
        let m = hash.num_buckets();
        Self {
            hash,
            buckets: vec![None; m],
            nonempty: 0,
            fm: FmState::new(m),
            g: SampledSubgraph::with_capacity(m),
            c_hat: 0.0,
            counters: OpCounters::default(),
        }
    }

    pub fn hash_config(&self) -> &HashConfig {
        &self.hash
    }

    pub fn num_buckets(&self) -> usize {
        self.buckets.len()
    }

    /// Number of occupied buckets, `|B≠∅|`.
    pub fn nonempty(&self) -> usize {
        self.nonempty
    }

    pub fn fm(&self) -> &FmState {
        &self.fm
    }

    pub fn sample(&self) -> &SampledSubgraph {
        &self.g
    }

    pub fn occupant(&self, bucket: usize) -> Option<(Edge, Priority)> {
        self.buckets[bucket]
    }

    /// Register value per bucket (0 for empty buckets).
    pub fn registers(&self) -> Vec<u32> {
        self.buckets
            .iter()
            .map(|b| b.map_or(0, |(_, p)| rho_of(p)))
            .collect()
    }

    pub fn check_invariants(&self) -> Result<(), String> {
        self.g.check_invariants()?;
        let occupied = self.buckets.iter().flatten().count();
        if occupied != self.nonempty || occupied != self.g.edge_count() {
            return Err(format!(
                "{occupied} occupied buckets, nonempty={}, sample holds {}",
                self.nonempty,
                self.g.edge_count()
            ));
        }
        for (i, (e, _)) in self.buckets.iter().enumerate().filter_map(|(i, b)| b.map(|x| (i, x))) {
            if !self.g.contains(e) {
                return Err(format!("bucket {i} occupant {e} missing from sample"));
            }
            if self.hash.bucket_of(e) != i {
                return Err(format!("edge {e} stored in bucket {i}"));
            }
        }
        Ok(())
    }
}

impl StreamEstimator for BucketSampler {
    fn process(&mut self, e: Edge) {
        self.counters.elements_processed += 1;
        let pos = self.hash.bucket_of(e);
        let pri = self.hash.priority_of(e);
        let old = self.buckets[pos];
        if old.is_some_and(|(_, old_pri)| pri >= old_pri) {
            return;
        }
        let rho_max = old.map_or(0, |(_, p)| rho_of(p));
        self.fm.observe(rho_of(pri), rho_max);
        let theta = bucket_update_factor(self.fm.m_hat(), self.nonempty);
        match old {
            Some((evicted, _)) => {
                self.g.remove_edge(evicted);
                self.counters.evictions += 1;
            }
            None => self.nonempty += 1,
        }
        let closed = self.g.butterflies_closed_by(e);
        self.c_hat += theta * closed.count as f64;
        self.counters.butterfly_probe_work += closed.probe_work;
        self.counters.distinct_samples_admitted += 1;
        self.buckets[pos] = Some((e, pri));
        self.g.insert_edge(e);
        self.counters.note_slots(self.g.edge_count(), 0);
    }

    fn estimate(&self) -> f64 {
        self.c_hat
    }

    fn distinct_estimate(&self) -> f64 {
        self.fm.m_hat()
    }

    fn counters(&self) -> OpCounters {
        self.counters
    }
}

/// Sampler state equality; instrumentation counters are ignored.
impl PartialEq for BucketSampler {
    fn eq(&self, other: &Self) -> bool {
        self.hash == other.hash
            && self.nonempty == other.nonempty
            && self.fm.q().to_bits() == other.fm.q().to_bits()
            && self.fm.m_hat().to_bits() == other.fm.m_hat().to_bits()
            && self.c_hat.to_bits() == other.c_hat.to_bits()
            && self.buckets == other.buckets
            && self.g == other.g
    }
}
