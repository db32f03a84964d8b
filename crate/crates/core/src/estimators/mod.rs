//! Streaming butterfly estimators behind one interface.
//!
//! * [`PqSampler`] with [`PqRule::Deabc`]: bottom-`M` priority sample, update
//!   factor `((M-4)/M) / h_max^4` from the threshold before eviction.
//! * [`PqSampler`] with [`PqRule::Fable`]: the same sample, update factor from
//!   a KMV distinct-count estimate.
//! * [`BucketSampler`]: `M` hash buckets keeping their lowest-priority edge,
//!   distinct count from the register martingale.
//! * [`ExactCounter`]: keeps every distinct edge; ground truth.

mod bucket;
mod exact;
mod pq;

pub use bucket::BucketSampler;
pub use exact::ExactCounter;
pub use pq::{PqRule, PqSampler};

use crate::graph::Edge;

/// Instrumentation shared by all estimators. Every field only grows.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounters {
    pub elements_processed: u64,
    /// Distinct edges admitted to the sample.
    pub distinct_samples_admitted: u64,
    pub evictions: u64,
    /// Total neighbour-intersection probes spent counting butterflies.
    pub butterfly_probe_work: u64,
    /// Peak number of sampled edges held.
    pub peak_edge_slots: u64,
    /// Peak number of per-edge records held in auxiliary structures outside
    /// the sample itself (the priority queue for the queue-based samplers).
    pub peak_aux_slots: u64,
}

impl OpCounters {
    pub(crate) fn note_slots(&mut self, edge_slots: usize, aux_slots: usize) {
        self.peak_edge_slots = self.peak_edge_slots.max(edge_slots as u64);
        self.peak_aux_slots = self.peak_aux_slots.max(aux_slots as u64);
    }
}

/// A one-pass butterfly estimator over an insert-only edge stream.
pub trait StreamEstimator: Send {
    fn process(&mut self, e: Edge);

    /// Current butterfly estimate; non-decreasing over the stream.
    fn estimate(&self) -> f64;

    /// Current estimate of the number of distinct edges seen.
    fn distinct_estimate(&self) -> f64;

    fn counters(&self) -> OpCounters;

    fn process_all<I>(&mut self, edges: I)
    where
        I: IntoIterator<Item = Edge>,
        Self: Sized,
    {
        for e in edges {
            self.process(e);
        }
    }
}

impl<T: StreamEstimator + ?Sized> StreamEstimator for Box<T> {
    fn process(&mut self, e: Edge) {
        (**self).process(e)
    }

    fn estimate(&self) -> f64 {
        (**self).estimate()
    }

    fn distinct_estimate(&self) -> f64 {
        (**self).distinct_estimate()
    }

    fn counters(&self) -> OpCounters {
        (**self).counters()
    }
}

/// `x (x-1) (x-2) (x-3)`.
#[inline]
pub fn falling4(x: f64) -> f64 {
    x * (x - 1.0) * (x - 2.0) * (x - 3.0)
}

/// Update factor of the bucket sampler: `Π_{i<4} (m̂ - i) / (B - i)` when
/// both the distinct estimate and the occupied-bucket count exceed 3,
/// otherwise 1.
#[inline]
pub fn bucket_update_factor(m_hat: f64, nonempty: usize) -> f64 {
    if m_hat > 3.0 && nonempty > 3 {
        falling4(m_hat) / falling4(nonempty as f64)
    } else {
        1.0
    }
}

/// DEABC queue update factor `((M-4)/M) / h_max^4`.
#[inline]
pub fn deabc_pq_update_factor(h_max: f64, m: usize) -> f64 {
    let m = m as f64;
    (m - 4.0) / m / h_max.powi(4)
}

/// FABLE update factor: the reciprocal of the probability that four given
/// edges all sit in an `M`-edge sample out of `m̂` distinct edges,
/// `m̂(m̂-1)(m̂-2)(m̂-3) / (M(M-1)(M-2)(M-3))`.
#[inline]
pub fn fable_update_factor(m_hat: f64, m: usize) -> f64 {
    falling4(m_hat) / falling4(m as f64)
}
