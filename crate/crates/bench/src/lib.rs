//! Workloads shared by the benchmarks.

use butterfly_core::stream::{inject_duplicates, random_bipartite};
use butterfly_core::Edge;

/// A sparse random graph with duplicates injected at ratio 0.5, sized to
/// give roughly `elements` stream elements.
pub fn duplicated_stream(elements: usize, seed: u64) -> Vec<Edge> {
    let distinct = (elements as f64 / 1.5) as usize;
    let side = ((distinct as f64).sqrt() * 8.0) as u64 + 16;
    let base = random_bipartite(side, side, distinct, seed);
    inject_duplicates(&base, 0.5, seed ^ 0x5eed).expect("ratio is valid")
}

/// A denser graph where butterfly counting work dominates.
pub fn dense_stream(distinct: usize, seed: u64) -> Vec<Edge> {
    let side = ((distinct as f64).sqrt() * 1.5) as u64 + 4;
    let base = random_bipartite(side, side, distinct, seed);
    inject_duplicates(&base, 0.5, seed ^ 0x5eed).expect("ratio is valid")
}
