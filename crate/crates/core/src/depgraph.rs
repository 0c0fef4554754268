//! Dependency graphs over event indices.
//!
//! Vertices are dense indices `0..n`, and the index order is the fixed total
//! order on events used when labeling witness trees. Graphs with at most 64
//! vertices also carry a bitmask adjacency so the exhaustive routines can work
//! on [`VertexSubset`]s directly.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = usize;

/// Largest graph the bitmask-based (exponential) routines accept.
pub const EXACT_CAP: usize = 64;

/// A subset of vertices `{0, .., 63}` as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "Vec<usize>", try_from = "Vec<usize>")]
pub struct VertexSubset(pub u64);

impl VertexSubset {
    pub const EMPTY: VertexSubset = VertexSubset(0);

    pub fn full(n: usize) -> Self {
        assert!(n <= EXACT_CAP);
        if n == 64 {
            VertexSubset(u64::MAX)
        } else {
            VertexSubset((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: VertexId) -> Self {
        VertexSubset(1u64 << v)
    }

    pub fn from_vertices<I: IntoIterator<Item = VertexId>>(it: I) -> Self {
        VertexSubset(it.into_iter().fold(0u64, |m, v| m | (1u64 << v)))
    }

    pub fn contains(self, v: VertexId) -> bool {
        v < 64 && self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: VertexId) {
        self.0 |= 1u64 << v;
    }

    pub fn remove(self, v: VertexId) -> Self {
        VertexSubset(self.0 & !(1u64 << v))
    }

    pub fn minus(self, other: VertexSubset) -> Self {
        VertexSubset(self.0 & !other.0)
    }

    pub fn union(self, other: VertexSubset) -> Self {
        VertexSubset(self.0 | other.0)
    }

    pub fn intersect(self, other: VertexSubset) -> Self {
        VertexSubset(self.0 & other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset_of(self, other: VertexSubset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn first(self) -> Option<VertexId> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = VertexId> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(v)
        })
    }
}

impl fmt::Debug for VertexSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl From<VertexSubset> for Vec<usize> {
    fn from(s: VertexSubset) -> Self {
        s.iter().collect()
    }
}

impl TryFrom<Vec<usize>> for VertexSubset {
    type Error = String;

    fn try_from(v: Vec<usize>) -> std::result::Result<Self, String> {
        if let Some(&bad) = v.iter().find(|&&x| x >= EXACT_CAP) {
            return Err(format!("vertex {bad} does not fit a 64-bit subset"));
        }
        Ok(VertexSubset::from_vertices(v))
    }
}

/// Finite simple undirected graph on event indices.
#[derive(Clone, PartialEq, Eq)]
pub struct DependencyGraph {
    adjacency: Vec<Vec<VertexId>>,
    // closed-neighborhood masks, only when n <= 64
    closed_masks: Option<Vec<u64>>,
}

impl fmt::Debug for DependencyGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DependencyGraph")
            .field("n", &self.len())
            .field("edges", &self.edges())
            .finish()
    }
}

impl DependencyGraph {
    pub fn edgeless(n: usize) -> Self {
        Self::from_adjacency(vec![BTreeSet::new(); n])
    }

    /// Builds a graph from an edge list. Self-loops are rejected, repeated
    /// edges are merged.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let mut adj = vec![BTreeSet::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::InvalidTree(format!("self-loop at {u}")));
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        Ok(Self::from_adjacency(adj))
    }

    /// Two events are adjacent iff their variable sets intersect.
    pub fn from_variable_sets(vbl_sets: &[Vec<usize>]) -> Result<Self> {
        if vbl_sets.is_empty() {
            return Err(Error::NoEvents);
        }
        if let Some(x) = vbl_sets.iter().position(|s| s.is_empty()) {
            return Err(Error::UnconstrainedEvent(x));
        }
        let n = vbl_sets.len();
        let mut by_variable: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for (x, vars) in vbl_sets.iter().enumerate() {
            let distinct: BTreeSet<_> = vars.iter().copied().collect();
            for v in distinct {
                by_variable.entry(v).or_default().push(x);
            }
        }
        let mut adj = vec![BTreeSet::new(); n];
        for events in by_variable.values() {
            for (i, &a) in events.iter().enumerate() {
                for &b in &events[i + 1..] {
                    adj[a].insert(b);
                    adj[b].insert(a);
                }
            }
        }
        Ok(Self::from_adjacency(adj))
    }

    fn from_adjacency(adj: Vec<BTreeSet<VertexId>>) -> Self {
        let n = adj.len();
        let adjacency: Vec<Vec<VertexId>> =
            adj.into_iter().map(|s| s.into_iter().collect()).collect();
        let closed_masks = (n <= EXACT_CAP).then(|| {
            adjacency
                .iter()
                .enumerate()
                .map(|(x, nb)| nb.iter().fold(1u64 << x, |m, &y| m | (1u64 << y)))
                .collect()
        });
        DependencyGraph {
            adjacency,
            closed_masks,
        }
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn neighbors(&self, x: VertexId) -> &[VertexId] {
        &self.adjacency[x]
    }

    pub fn degree(&self, x: VertexId) -> usize {
        self.adjacency[x].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_adjacent(&self, x: VertexId, y: VertexId) -> bool {
        self.adjacency[x].binary_search(&y).is_ok()
    }

    /// The relation `x ~ y`: distinct and not adjacent.
    pub fn compatible(&self, x: VertexId, y: VertexId) -> bool {
        x != y && !self.is_adjacent(x, y)
    }

    /// `Γ*(x)` as a sorted vertex list.
    pub fn closed_neighborhood(&self, x: VertexId) -> Vec<VertexId> {
        let mut v = self.adjacency[x].clone();
        let pos = v.partition_point(|&y| y < x);
        v.insert(pos, x);
        v
    }

    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(x, nb)| nb.iter().filter(move |&&y| y > x).map(move |&y| (x, y)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn check_vertex(&self, x: VertexId) -> Result<()> {
        if x < self.len() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: x,
                n: self.len(),
            })
        }
    }

    /// Fails with "graph too large for exact mode" beyond 64 vertices.
    pub fn require_exact(&self) -> Result<&[u64]> {
        self.closed_masks.as_deref().ok_or(Error::GraphTooLarge {
            n: self.len(),
            cap: EXACT_CAP,
        })
    }

    /// `Γ*(x)` as a bitmask; panics for graphs above the exact cap.
    pub fn closed_mask(&self, x: VertexId) -> VertexSubset {
        VertexSubset(self.closed_masks.as_ref().expect("graph above exact cap")[x])
    }

    pub fn all(&self) -> VertexSubset {
        VertexSubset::full(self.len())
    }

    pub fn is_independent(&self, s: VertexSubset) -> bool {
        let masks = match self.closed_masks.as_deref() {
            Some(m) => m,
            None => return false,
        };
        s.iter().all(|x| masks[x] & s.0 == 1u64 << x)
    }

    /// Every independent subset of `domain`, in increasing bitmask order,
    /// starting with the empty set.
    pub fn independent_subsets_of(
        &self,
        domain: VertexSubset,
    ) -> impl Iterator<Item = VertexSubset> + '_ {
        let d = domain.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || loop {
            let sub = next?;
            // increasing-order submask walk
            next = if sub == d { None } else { Some((sub | !d).wrapping_add(1) & d) };
            if self.is_independent(VertexSubset(sub)) {
                return Some(VertexSubset(sub));
            }
        })
    }

    /// Induced subgraph on `vertices` (kept in the given order), relabeled
    /// to `0..vertices.len()`.
    pub fn induced(&self, vertices: &[VertexId]) -> DependencyGraph {
        let mut adj = vec![BTreeSet::new(); vertices.len()];
        for (i, &a) in vertices.iter().enumerate() {
            for (j, &b) in vertices.iter().enumerate().skip(i + 1) {
                if self.is_adjacent(a, b) {
                    adj[i].insert(j);
                    adj[j].insert(i);
                }
            }
        }
        Self::from_adjacency(adj)
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        Self::from_edges(n, &edges).expect("valid complete graph")
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges(n, &edges).expect("valid path")
    }

    pub fn cycle(n: usize) -> Self {
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        if n > 2 {
            edges.push((n - 1, 0));
        }
        Self::from_edges(n, &edges).expect("valid cycle")
    }
}
