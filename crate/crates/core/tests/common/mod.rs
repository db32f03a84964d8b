//! Independent reference implementations and fixtures for the test suites.
//!
//! Everything here is written from definitions, not by calling the library's
//! own counting code, so the two can disagree.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use butterfly_core::Edge;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Butterflies by checking every pair of left vertices against every pair of
/// right vertices.
pub fn brute_butterflies(edges: &[Edge]) -> u64 {
    let set: HashSet<(u64, u64)> = edges.iter().map(|e| (e.left_id(), e.right_id())).collect();
    let lefts: Vec<u64> = set.iter().map(|p| p.0).collect::<BTreeSet<_>>().into_iter().collect();
    let rights: Vec<u64> = set.iter().map(|p| p.1).collect::<BTreeSet<_>>().into_iter().collect();
    let mut n = 0;
    for (i, &u) in lefts.iter().enumerate() {
        for &w in &lefts[i + 1..] {
            for (j, &v) in rights.iter().enumerate() {
                if !(set.contains(&(u, v)) && set.contains(&(w, v))) {
                    continue;
                }
                for &x in &rights[j + 1..] {
                    if set.contains(&(u, x)) && set.contains(&(w, x)) {
                        n += 1;
                    }
                }
            }
        }
    }
    n
}

/// Every butterfly as its sorted set of four edges.
pub fn brute_butterfly_list(edges: &[Edge]) -> Vec<[Edge; 4]> {
    let set: HashSet<Edge> = edges.iter().copied().collect();
    let lefts: Vec<u64> = set.iter().map(|e| e.left_id()).collect::<BTreeSet<_>>().into_iter().collect();
    let rights: Vec<u64> = set.iter().map(|e| e.right_id()).collect::<BTreeSet<_>>().into_iter().collect();
    let mut out = Vec::new();
    for (i, &u) in lefts.iter().enumerate() {
        for &w in &lefts[i + 1..] {
            for (j, &v) in rights.iter().enumerate() {
                for &x in &rights[j + 1..] {
                    let four = [Edge::new(u, v), Edge::new(u, x), Edge::new(w, v), Edge::new(w, x)];
                    if four.iter().all(|e| set.contains(e)) {
                        out.push(four);
                    }
                }
            }
        }
    }
    out
}

/// `(ζ, δ, η)` by comparing every pair of butterflies.
pub fn brute_pair_classes(edges: &[Edge]) -> (u64, u64, u64) {
    let bs = brute_butterfly_list(edges);
    let (mut zeta, mut delta, mut eta) = (0, 0, 0);
    for (i, a) in bs.iter().enumerate() {
        for b in &bs[i + 1..] {
            match a.iter().filter(|e| b.contains(e)).count() {
                0 => zeta += 1,
                1 => delta += 1,
                2 => eta += 1,
                k => panic!("distinct butterflies share {k} edges"),
            }
        }
    }
    (zeta, delta, eta)
}

/// The `m` distinct edges with the smallest priorities, by sorting.
pub fn brute_bottom_m(edges: &[Edge], priority: impl Fn(Edge) -> f64, m: usize) -> Vec<Edge> {
    let mut distinct: Vec<Edge> = edges.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    distinct.sort_by(|a, b| priority(*a).total_cmp(&priority(*b)));
    distinct.truncate(m);
    distinct.sort();
    distinct
}

/// Distinct edges of a `left × right` grid, each kept with probability `p`,
/// in random order.
pub fn bernoulli_graph(left: u64, right: u64, p: f64, seed: u64) -> Vec<Edge> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    use rand::seq::SliceRandom;
    let mut out: Vec<Edge> = (0..left)
        .flat_map(|u| (0..right).map(move |v| Edge::new(u, v)))
        .filter(|_| rng.gen::<f64>() < p)
        .collect();
    out.shuffle(&mut rng);
    out
}

/// Inserts `extra` repeats, each after an earlier copy of the same edge.
pub fn sprinkle_repeats(edges: &[Edge], extra: usize, seed: u64) -> Vec<Edge> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = edges.to_vec();
    for _ in 0..extra {
        if out.is_empty() {
            break;
        }
        let src = rng.gen_range(0..out.len());
        let dst = rng.gen_range(src + 1..=out.len());
        let e = out[src];
        out.insert(dst, e);
    }
    out
}

pub fn first_occurrences(edges: &[Edge]) -> Vec<Edge> {
    let mut seen = HashSet::new();
    edges.iter().copied().filter(|e| seen.insert(*e)).collect()
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance.
pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
}

/// Kolmogorov–Smirnov statistic of a sample against `U(0, 1)`.
pub fn ks_uniform(xs: &[f64]) -> f64 {
    let mut s = xs.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(i, &x)| (x - i as f64 / n).abs().max(((i + 1) as f64 / n - x).abs()))
        .fold(0.0, f64::max)
}

/// Pearson chi-square statistic against equal expected counts.
pub fn chi_square_uniform(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum()
}

/// Stream of `n` distinct edges with no structure (a matching).
pub fn matching(n: u64) -> Vec<Edge> {
    (0..n).map(|i| Edge::new(i, i)).collect()
}

/// Stream of `n` distinct edges sharing one left vertex.
pub fn star(n: u64) -> Vec<Edge> {
    (0..n).map(|i| Edge::new(0, i)).collect()
}
