use super::{OpCounters, StreamEstimator};
use crate::graph::{Edge, SampledSubgraph};

/// Keeps every distinct edge and counts butterflies exactly as they close.
#[derive(Debug, Clone, Default)]
pub struct ExactCounter {
    g: SampledSubgraph,
    count: u64,
    counters: OpCounters,
}

impl ExactCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn graph(&self) -> &SampledSubgraph {
        &self.g
    }
}

impl StreamEstimator for ExactCounter {
    fn process(&mut self, e: Edge) {
        self.counters.elements_processed += 1;
        if self.g.contains(e) {
            return;
        }
        let closed = self.g.butterflies_closed_by(e);
        self.count += closed.count;
        self.counters.butterfly_probe_work += closed.probe_work;
        self.counters.distinct_samples_admitted += 1;
        self.g.insert_edge(e);
        self.counters.note_slots(self.g.edge_count(), 0);
    }

    fn estimate(&self) -> f64 {
        self.count as f64
    }

    fn distinct_estimate(&self) -> f64 {
        self.g.edge_count() as f64
    }

    fn counters(&self) -> OpCounters {
        self.counters
    }
}
