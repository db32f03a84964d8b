//! Bipartite vertex and edge types, the sampled-subgraph adjacency index, and
//! exact butterfly counting.

use std::fmt;

use rustc_hash::{FxHashMap, FxHashSet};

use crate::error::EdgeError;

/// Which side of the bipartition a vertex belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

/// A side-tagged vertex identifier. Left and right id spaces never collide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId {
    pub side: Side,
    pub id: u64,
}

impl VertexId {
    pub const fn left(id: u64) -> Self {
        Self { side: Side::Left, id }
    }

    pub const fn right(id: u64) -> Self {
        Self { side: Side::Right, id }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::Left => write!(f, "L{}", self.id),
            Side::Right => write!(f, "R{}", self.id),
        }
    }
}

/// A stream element: one left vertex joined to one right vertex.
///
/// Only the raw ids are stored; the side of each endpoint is fixed by
/// position, so an `Edge` is bipartite by construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    left: u64,
    right: u64,
}

impl Edge {
    pub const fn new(left: u64, right: u64) -> Self {
        Self { left, right }
    }

    /// Builds an edge from two tagged vertices, rejecting same-side pairs.
    /// The endpoints may be given in either order.
    pub fn from_vertices(a: VertexId, b: VertexId) -> Result<Self, EdgeError> {
        match (a.side, b.side) {
            (Side::Left, Side::Right) => Ok(Self::new(a.id, b.id)),
            (Side::Right, Side::Left) => Ok(Self::new(b.id, a.id)),
            _ => Err(EdgeError::SameSide(a, b)),
        }
    }

    pub const fn u(&self) -> VertexId {
        VertexId::left(self.left)
    }

    pub const fn v(&self) -> VertexId {
        VertexId::right(self.right)
    }

    pub const fn left_id(&self) -> u64 {
        self.left
    }

    pub const fn right_id(&self) -> u64 {
        self.right
    }

    /// Canonical 16-byte encoding: left id then right id, little endian.
    /// Equal edges always encode identically, which is what makes hashing
    /// duplicate-consistent.
    pub fn canonical_bytes(&self) -> [u8; 16] {
        let mut out = [0u8; 16];
        out[..8].copy_from_slice(&self.left.to_le_bytes());
        out[8..].copy_from_slice(&self.right.to_le_bytes());
        out
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(L{}, R{})", self.left, self.right)
    }
}

/// Result of probing the sample for butterflies closed by a new edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ClosedButterflies {
    pub count: u64,
    /// Set-membership probes spent on neighbourhood intersections.
    pub probe_work: u64,
}

type Neighbours = FxHashSet<u64>;

/// Adjacency index over the currently sampled edges.
///
/// Left and right adjacency live in separate maps keyed by raw id, so the
/// side tag never needs hashing. Vertices whose last edge is removed are
/// dropped from the map.
#[derive(Debug, Clone, Default)]
pub struct SampledSubgraph {
    left: FxHashMap<u64, Neighbours>,
    right: FxHashMap<u64, Neighbours>,
    edge_count: usize,
    capacity: Option<usize>,
}

impl SampledSubgraph {
    /// A subgraph that holds at most `capacity` edges.
    pub fn with_capacity(capacity: usize) -> Self {
        Self {
            left: FxHashMap::with_capacity_and_hasher(capacity, Default::default()),
            right: FxHashMap::with_capacity_and_hasher(capacity, Default::default()),
            edge_count: 0,
            capacity: Some(capacity),
        }
    }

    /// A subgraph without a size limit (used for exact counting).
    pub fn unbounded() -> Self {
        Self::default()
    }

    pub fn capacity(&self) -> Option<usize> {
        self.capacity
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.edge_count == 0
    }

    pub fn is_full(&self) -> bool {
        self.capacity.is_some_and(|c| self.edge_count >= c)
    }

    pub fn vertex_count(&self) -> usize {
        self.left.len() + self.right.len()
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.left
            .get(&e.left)
            .is_some_and(|n| n.contains(&e.right))
    }

    fn side(&self, side: Side) -> &FxHashMap<u64, Neighbours> {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    /// Neighbours of `x`, all on the opposite side. Empty for unknown vertices.
    pub fn neighbors(&self, x: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        let other = match x.side {
            Side::Left => VertexId::right,
            Side::Right => VertexId::left,
        };
        self.side(x.side)
            .get(&x.id)
            .into_iter()
            .flat_map(|n| n.iter().copied())
            .map(other)
    }

    pub fn degree(&self, x: VertexId) -> usize {
        self.side(x.side).get(&x.id).map_or(0, |n| n.len())
    }

    /// Iterates the sampled edges in unspecified order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.left
            .iter()
            .flat_map(|(&u, n)| n.iter().map(move |&v| Edge::new(u, v)))
    }

    /// Adds `e`. Panics if `e` is already present or the subgraph is full.
    pub fn insert_edge(&mut self, e: Edge) {
        assert!(
            !self.is_full(),
            "sampled subgraph at capacity {:?}, cannot insert {e}",
            self.capacity
        );
        let fresh = self.left.entry(e.left).or_default().insert(e.right);
        assert!(fresh, "edge {e} already sampled");
        self.right.entry(e.right).or_default().insert(e.left);
        self.edge_count += 1;
    }

    /// Removes `e`, dropping endpoints that become isolated. Panics if `e`
    /// is absent.
    pub fn remove_edge(&mut self, e: Edge) {
        let removed = remove_half(&mut self.left, e.left, e.right);
        assert!(removed, "edge {e} is not sampled");
        remove_half(&mut self.right, e.right, e.left);
        self.edge_count -= 1;
    }

    /// Counts butterflies in `self ∪ {e}` that contain `e`.
    ///
    /// Requires `e ∉ self`; under that precondition the `w ≠ v` and `l ≠ u`
    /// exclusions are automatic.
    pub fn butterflies_closed_by(&self, e: Edge) -> ClosedButterflies {
        debug_assert!(!self.contains(e), "probing with sampled edge {e}");
        let mut out = ClosedButterflies::default();
        let (Some(nu), Some(nv)) = (self.left.get(&e.left), self.right.get(&e.right)) else {
            return out;
        };
        for w in nu {
            let nw = &self.right[w];
            let (small, large) = if nw.len() <= nv.len() { (nw, nv) } else { (nv, nw) };
            out.probe_work += small.len() as u64;
            out.count += small.iter().filter(|l| large.contains(l)).count() as u64;
        }
        out
    }

    /// `θ` times the number of butterflies `e` would close. Leaves `self`
    /// unchanged.
    pub fn count_new_butterflies(&self, e: Edge, theta: f64) -> f64 {
        theta * self.butterflies_closed_by(e).count as f64
    }

    /// Checks symmetry and the edge count against the adjacency sets.
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut half_left = 0usize;
        for (&u, n) in &self.left {
            if n.is_empty() {
                return Err(format!("left vertex {u} has an empty neighbour set"));
            }
            for v in n {
                if !self.right.get(v).is_some_and(|r| r.contains(&u)) {
                    return Err(format!("asymmetric adjacency at (L{u}, R{v})"));
                }
            }
            half_left += n.len();
        }
        let mut half_right = 0usize;
        for (&v, n) in &self.right {
            if n.is_empty() {
                return Err(format!("right vertex {v} has an empty neighbour set"));
            }
            half_right += n.len();
        }
        if half_left != half_right || half_left != self.edge_count {
            return Err(format!(
                "edge_count {} disagrees with adjacency sizes {half_left}/{half_right}",
                self.edge_count
            ));
        }
        if let Some(c) = self.capacity {
            if self.edge_count > c {
                return Err(format!("edge_count {} exceeds capacity {c}", self.edge_count));
            }
        }
        Ok(())
    }
}

fn remove_half(map: &mut FxHashMap<u64, Neighbours>, key: u64, value: u64) -> bool {
    let Some(set) = map.get_mut(&key) else {
        return false;
    };
    let removed = set.remove(&value);
    if set.is_empty() {
        map.remove(&key);
    }
    removed
}

impl PartialEq for SampledSubgraph {
    fn eq(&self, other: &Self) -> bool {
        self.edge_count == other.edge_count && self.left == other.left
    }
}

impl Eq for SampledSubgraph {}

/// Exact butterfly count of a deduplicated edge set, by wedge aggregation:
/// for each left vertex `u`, count two-paths `u - v - w` to every later left
/// vertex `w`, then sum `C(paths, 2)`.
pub fn exact_butterfly_count<I>(edges: I) -> u64
where
    I: IntoIterator<Item = Edge>,
{
    let mut left: FxHashMap<u64, Vec<u64>> = FxHashMap::default();
    let mut right: FxHashMap<u64, Vec<u64>> = FxHashMap::default();
    for e in edges {
        left.entry(e.left).or_default().push(e.right);
        right.entry(e.right).or_default().push(e.left);
    }
    let mut total = 0u64;
    let mut paths: FxHashMap<u64, u64> = FxHashMap::default();
    for (&u, nu) in &left {
        paths.clear();
        for v in nu {
            for &w in &right[v] {
                if w > u {
                    *paths.entry(w).or_default() += 1;
                }
            }
        }
        total += paths.values().map(|&k| k * k.saturating_sub(1) / 2).sum::<u64>();
    }
    total
}
