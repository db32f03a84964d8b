//! Ground truth for statistical checks: butterfly-pair sharing statistics and
//! closed-form variance expressions for each estimator.

use rustc_hash::{FxHashMap, FxHashSet};

use crate::error::OracleError;
use crate::graph::{exact_butterfly_count, Edge};

/// Largest butterfly count [`butterfly_pair_stats`] will enumerate.
pub const PAIR_STATS_LIMIT: u64 = 100_000;

/// Unordered butterfly pairs split by how many edges they share.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ButterflyPairStats {
    /// Pairs sharing no edge.
    pub zeta: u64,
    /// Pairs sharing exactly one edge.
    pub delta: u64,
    /// Pairs sharing exactly two edges.
    pub eta: u64,
    pub total_butterflies: u64,
}

impl ButterflyPairStats {
    pub fn total_pairs(&self) -> u64 {
        choose2(self.total_butterflies)
    }
}

fn choose2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// One butterfly `{u, w} x {v, x}` with `u < w` and `v < x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Butterfly {
    pub left: [u64; 2],
    pub right: [u64; 2],
}

impl Butterfly {
    /// The four edges in sorted order.
    pub fn edges(&self) -> [Edge; 4] {
        let [u, w] = self.left;
        let [v, x] = self.right;
        [Edge::new(u, v), Edge::new(u, x), Edge::new(w, v), Edge::new(w, x)]
    }
}

/// Lists every butterfly of a deduplicated edge set.
pub fn enumerate_butterflies<I>(edges: I) -> Vec<Butterfly>
where
    I: IntoIterator<Item = Edge>,
{
    let mut left: FxHashMap<u64, FxHashSet<u64>> = FxHashMap::default();
    for e in edges {
        left.entry(e.left_id()).or_default().insert(e.right_id());
    }
    let mut ids: Vec<u64> = left.keys().copied().collect();
    ids.sort_unstable();
    let mut out = Vec::new();
    for (i, &u) in ids.iter().enumerate() {
        let nu = &left[&u];
        for &w in &ids[i + 1..] {
            let mut common: Vec<u64> = left[&w].iter().filter(|r| nu.contains(r)).copied().collect();
            common.sort_unstable();
            for (a, &v) in common.iter().enumerate() {
                for &x in &common[a + 1..] {
                    out.push(Butterfly { left: [u, w], right: [v, x] });
                }
            }
        }
    }
    out
}

/// Classifies all unordered butterfly pairs by shared-edge count.
///
/// Butterflies are enumerated explicitly. Two distinct butterflies share at
/// most two edges, and when they share two those edges form a wedge (two
/// edges at a common vertex), so
/// `η = Σ_wedges C(n_w, 2)` and `δ + 2η = Σ_edges C(n_e, 2)`, where `n_w`
/// and `n_e` count the butterflies containing a wedge or an edge. `ζ` is the
/// remainder of `C(c, 2)`.
pub fn butterfly_pair_stats<I>(edges: I) -> Result<ButterflyPairStats, OracleError>
where
    I: IntoIterator<Item = Edge>,
{
    let edges: Vec<Edge> = edges.into_iter().collect();
    let count = exact_butterfly_count(edges.iter().copied());
    if count > PAIR_STATS_LIMIT {
        return Err(OracleError::TooManyButterflies {
            count,
            limit: PAIR_STATS_LIMIT,
        });
    }
    let butterflies = enumerate_butterflies(edges);
    debug_assert_eq!(butterflies.len() as u64, count);

    let mut per_edge: FxHashMap<Edge, u64> = FxHashMap::default();
    // Wedge key: (centre is left?, centre id, smaller leaf, larger leaf).
    let mut per_wedge: FxHashMap<(bool, u64, u64, u64), u64> = FxHashMap::default();
    for b in &butterflies {
        for e in b.edges() {
            *per_edge.entry(e).or_default() += 1;
        }
        let [u, w] = b.left;
        let [v, x] = b.right;
        for key in [(true, u, v, x), (true, w, v, x), (false, v, u, w), (false, x, u, w)] {
            *per_wedge.entry(key).or_default() += 1;
        }
    }
    let eta: u64 = per_wedge.values().map(|&n| choose2(n)).sum();
    let shared_edge_incidences: u64 = per_edge.values().map(|&n| choose2(n)).sum();
    let delta = shared_edge_incidences - 2 * eta;
    let zeta = choose2(count) - delta - eta;
    Ok(ButterflyPairStats {
        zeta,
        delta,
        eta,
        total_butterflies: count,
    })
}

/// `x (x-1) ... (x-k+1)`.
pub fn falling(x: f64, k: u32) -> f64 {
    (0..k).map(|i| x - i as f64).product()
}

/// Derivative of `x ↦ x(x-1)(x-2)(x-3)` at `x`.
fn falling4_derivative(x: f64) -> f64 {
    (0..4)
        .map(|skip| {
            (0..4)
                .filter(|&i| i != skip)
                .map(|i| x - i as f64)
                .product::<f64>()
        })
        .sum()
}

/// `g'(m_d)` for `g(x) = c · x(x-1)(x-2)(x-3) / (m_d(m_d-1)(m_d-2)(m_d-3))`.
pub fn distinct_sensitivity(c: f64, m_d: f64) -> f64 {
    c * falling4_derivative(m_d) / falling(m_d, 4)
}

/// `Φ₁` and `Φ₂` of the DEABC queue-sampler variance bound.
pub fn deabc_pq_phi(m: usize, m_d: usize) -> (f64, f64) {
    let (m, n) = (m as f64, m_d as f64);
    let phi1 = (m - 4.0) * (n - 4.0) * (n - 5.0) * (n - 6.0) * (n - 7.0)
        / (m * (m - 5.0) * (m - 6.0) * (m - 7.0) * (m - 8.0));
    let phi2 = (m - 4.0).powi(2) * (n - 6.0) * (n - 7.0) / (m * (m - 6.0) * (m - 7.0) * (m - 8.0));
    (phi1, phi2)
}

/// Upper bound on the DEABC queue-sampler variance:
/// `c² + Φ₁ c + Φ₂ (2c² - 2c)`.
pub fn variance_bound_deabc_pq(c: f64, m: usize, m_d: usize) -> Result<f64, OracleError> {
    if m < 16 || m_d < 8 {
        return Err(OracleError::Precondition(format!(
            "need M >= 16 and m_d >= 8, got M={m}, m_d={m_d}"
        )));
    }
    let (phi1, phi2) = deabc_pq_phi(m, m_d);
    Ok(c * c + phi1 * c + phi2 * (2.0 * c * c - 2.0 * c))
}

/// `Φ₁′ … Φ₄′` of the bucket-sampler variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BucketPhi {
    pub phi1: f64,
    pub phi2: f64,
    pub phi3: f64,
    pub phi4: f64,
}

pub fn bucket_phi(m_d: usize, nonempty: usize) -> BucketPhi {
    let (n, b) = (m_d as f64, nonempty as f64);
    let phi1 = falling(n, 4) / falling(b, 4);
    let tail = |k: u32| falling(b - 4.0, k) / falling(n - 4.0, k);
    BucketPhi {
        phi1,
        phi2: phi1 * tail(4),
        phi3: phi1 * tail(3),
        phi4: phi1 * tail(2),
    }
}

/// Variance of the bucket sampler:
/// `cΦ₁′ + 2ζΦ₂′ + 2δΦ₃′ + 2ηΦ₄′ - c² + g'(m_d)² m_d² / (M log₂e)`.
pub fn variance_deabc_bucket(
    stats: &ButterflyPairStats,
    m: usize,
    m_d: usize,
    nonempty: usize,
    c: f64,
) -> Result<f64, OracleError> {
    if nonempty <= 7 || m_d < 8 {
        return Err(OracleError::Precondition(format!(
            "need |B| > 7 and m_d >= 8, got |B|={nonempty}, m_d={m_d}"
        )));
    }
    let phi = bucket_phi(m_d, nonempty);
    let n = m_d as f64;
    let sampling = c * phi.phi1
        + 2.0 * stats.zeta as f64 * phi.phi2
        + 2.0 * stats.delta as f64 * phi.phi3
        + 2.0 * stats.eta as f64 * phi.phi4
        - c * c;
    let g1 = distinct_sensitivity(c, n);
    Ok(sampling + g1 * g1 * n * n / (std::f64::consts::LOG2_E * m as f64))
}

/// `Φ₄, Φ₆, Φ₇, Φ₈` of the FABLE variance, built from
/// `μ_j = M(M-1)…(M-j+1) / (m_d(m_d-1)…(m_d-j+1))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FablePhi {
    pub phi4: f64,
    pub phi6: f64,
    pub phi7: f64,
    pub phi8: f64,
}

pub fn fable_phi(m: usize, m_d: usize) -> FablePhi {
    let mu = |j: u32| falling(m as f64, j) / falling(m_d as f64, j);
    let mu4 = mu(4);
    FablePhi {
        phi4: 1.0 / mu4 - 1.0,
        phi6: mu(6) / (mu4 * mu4) - 1.0,
        phi7: mu(7) / (mu4 * mu4) - 1.0,
        phi8: mu(8) / (mu4 * mu4) - 1.0,
    }
}

/// FABLE variance including the distinct-count term:
/// `cΦ₄ + 2ζΦ₈ + 2δΦ₇ + 2ηΦ₆ + g'(m_d)² m_d² / (M - 2)`.
pub fn variance_fable(
    stats: &ButterflyPairStats,
    m: usize,
    m_d: usize,
    c: f64,
) -> Result<f64, OracleError> {
    if m < 16 || m_d < m {
        return Err(OracleError::Precondition(format!(
            "need M >= 16 and m_d >= M, got M={m}, m_d={m_d}"
        )));
    }
    let phi = fable_phi(m, m_d);
    let n = m_d as f64;
    let sampling = c * phi.phi4
        + 2.0 * stats.zeta as f64 * phi.phi8
        + 2.0 * stats.delta as f64 * phi.phi7
        + 2.0 * stats.eta as f64 * phi.phi6;
    let g1 = distinct_sensitivity(c, n);
    Ok(sampling + g1 * g1 * n * n / (m as f64 - 2.0))
}

/// Half-width `λ·√var` of the Chebyshev band.
pub fn chebyshev_band(var: f64, lambda: f64) -> f64 {
    lambda * var.sqrt()
}
