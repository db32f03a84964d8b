use std::collections::BinaryHeap;

use super::{deabc_pq_update_factor, fable_update_factor, OpCounters, StreamEstimator};
use crate::distinct::kmv_estimate;
use crate::graph::{Edge, SampledSubgraph};
use crate::hashing::{HashConfig, Priority};

/// How a queue-based sampler weights butterflies found after the sample fills.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PqRule {
    /// `θ = ((M-4)/M) / h_max^4`, with `h_max` read before the eviction.
    Deabc,
    /// `θ` from a KMV estimate `m̂ = (M-1)/h`, where `h` is the queue top
    /// *after* the evicted edge is popped.
    Fable,
}

/// Bottom-`M` priority sampler over distinct edges.
///
/// Holds the `M` distinct edges with the smallest priorities seen so far, a
/// max-queue over those priorities, and the running estimate.
#[derive(Debug, Clone)]
pub struct PqSampler {
    rule: PqRule,
    hash: HashConfig,
    capacity: usize,
    g: SampledSubgraph,
    queue: BinaryHeap<(Priority, Edge)>,
    /// Largest priority in the queue; 0 while empty.
    h_max: f64,
    c_hat: f64,
    counters: OpCounters,
}

impl PqSampler {
    /// Sample size `M` is taken from `hash.num_buckets()`.
    pub fn new(rule: PqRule, hash: HashConfig) -> Self {
        let capacity = hash.num_buckets();
        Self {
            rule,
            hash,
            capacity,
            g: SampledSubgraph::with_capacity(capacity),
            queue: BinaryHeap::with_capacity(capacity + 1),
            h_max: 0.0,
            c_hat: 0.0,
            counters: OpCounters::default(),
        }
    }

    pub fn deabc(hash: HashConfig) -> Self {
        Self::new(PqRule::Deabc, hash)
    }

    pub fn fable(hash: HashConfig) -> Self {
        Self::new(PqRule::Fable, hash)
    }

    pub fn rule(&self) -> PqRule {
        self.rule
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn hash_config(&self) -> &HashConfig {
        &self.hash
    }

    pub fn h_max(&self) -> f64 {
        self.h_max
    }

    pub fn sample(&self) -> &SampledSubgraph {
        &self.g
    }

    pub fn queue_len(&self) -> usize {
        self.queue.len()
    }

    /// KMV estimate over the full queue, once `M` edges are held.
    pub fn kmv_distinct(&self) -> Option<f64> {
        if self.queue.len() < self.capacity {
            return None;
        }
        self.queue.peek().map(|&(p, _)| kmv_estimate(p, self.capacity))
    }

    /// Processes `e` with a caller-supplied priority instead of hashing it.
    ///
    /// Duplicate handling relies on equal edges getting equal priorities;
    /// callers that break that get a duplicate-naive sampler.
    pub fn process_with_priority(&mut self, e: Edge, pri: Priority) {
        self.counters.elements_processed += 1;
        if self.g.edge_count() < self.capacity {
            if self.g.contains(e) {
                return;
            }
            self.admit(e, pri, 1.0);
            if pri.value() > self.h_max {
                self.h_max = pri.value();
            }
            return;
        }
        if pri.value() >= self.h_max || self.g.contains(e) {
            return;
        }
        let (_, evicted) = self.queue.pop().expect("full sampler has a non-empty queue");
        self.g.remove_edge(evicted);
        self.counters.evictions += 1;
        let theta = match self.rule {
            PqRule::Deabc => deabc_pq_update_factor(self.h_max, self.capacity),
            PqRule::Fable => {
                let (top, _) = *self.queue.peek().expect("queue keeps M-1 entries");
                fable_update_factor(kmv_estimate(top, self.capacity), self.capacity)
            }
        };
        self.admit(e, pri, theta);
        self.h_max = self.queue.peek().map_or(0.0, |&(p, _)| p.value());
    }

    fn admit(&mut self, e: Edge, pri: Priority, theta: f64) {
        let closed = self.g.butterflies_closed_by(e);
        self.c_hat += theta * closed.count as f64;
        self.counters.butterfly_probe_work += closed.probe_work;
        self.counters.distinct_samples_admitted += 1;
        self.g.insert_edge(e);
        self.queue.push((pri, e));
        self.counters.note_slots(self.g.edge_count(), self.queue.len());
    }

    /// Sampled edges sorted by priority.
    pub fn sampled_by_priority(&self) -> Vec<(Priority, Edge)> {
        self.queue.clone().into_sorted_vec()
    }

    pub fn check_invariants(&self) -> Result<(), String> {
        self.g.check_invariants()?;
        if self.queue.len() != self.g.edge_count() {
            return Err(format!(
                "queue holds {} entries but sample holds {}",
                self.queue.len(),
                self.g.edge_count()
            ));
        }
        if let Some(&(_, e)) = self.queue.iter().find(|(_, e)| !self.g.contains(*e)) {
            return Err(format!("queued edge {e} missing from sample"));
        }
        let top = self.queue.peek().map_or(0.0, |&(p, _)| p.value());
        if top != self.h_max {
            return Err(format!("h_max {} but queue top {top}", self.h_max));
        }
        Ok(())
    }
}

impl StreamEstimator for PqSampler {
    #[inline]
    fn process(&mut self, e: Edge) {
        let pri = self.hash.priority_of(e);
        self.process_with_priority(e, pri);
    }

    fn estimate(&self) -> f64 {
        self.c_hat
    }

    fn distinct_estimate(&self) -> f64 {
        self.kmv_distinct()
            .unwrap_or(self.g.edge_count() as f64)
    }

    fn counters(&self) -> OpCounters {
        self.counters
    }
}

/// Sampler state equality; instrumentation counters are ignored.
impl PartialEq for PqSampler {
    fn eq(&self, other: &Self) -> bool {
        self.rule == other.rule
            && self.hash == other.hash
            && self.capacity == other.capacity
            && self.h_max.to_bits() == other.h_max.to_bits()
            && self.c_hat.to_bits() == other.c_hat.to_bits()
            && self.g == other.g
            && self.sampled_by_priority() == other.sampled_by_priority()
    }
}
