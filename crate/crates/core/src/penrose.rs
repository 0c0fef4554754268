//! Penrose trees, Ursell coefficients, and the partition scheme behind the
//! Penrose identity.
//!
//! Everything here works on a tuple `(x_0, .., x_n)` of dependency-graph
//! vertices and the graph it induces on `{0, .., n}`, where `i` and `j` are
//! joined iff `x_i` and `x_j` are incompatible. The Penrose condition uses the
//! plane-tree order induced through [`map_m`](crate::trees::map_m), never the
//! integer order of the labels.

use std::sync::OnceLock;

use crate::depgraph::{DependencyGraph, VertexId};
use crate::error::{Error, Result};
use crate::mt_engine::WitnessTree;
use crate::trees::{enumerate_labeled_trees, LabeledRootedTree, PlaneRootedTree, LABELED_TREE_CAP};

/// Largest tuple (`n + 1` points) accepted by the exhaustive routines.
pub const TUPLE_CAP: usize = LABELED_TREE_CAP + 1;

const MAX_K: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexTuple(pub Vec<VertexId>);

impl VertexTuple {
    pub fn new(points: Vec<VertexId>) -> Self {
        VertexTuple(points)
    }

    /// `n`, the number of points after `x_0`.
    pub fn order(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn validate(&self, g: &DependencyGraph, cap: usize) -> Result<()> {
        if self.0.is_empty() {
            return Err(Error::LengthMismatch {
                expected: 1,
                got: 0,
            });
        }
        if self.0.len() > cap {
            return Err(Error::CapExceeded {
                what: "tuple length",
                got: self.0.len(),
                cap,
            });
        }
        self.0.iter().try_for_each(|&x| g.check_vertex(x))
    }
}

/// A simple graph on `{0, .., k-1}` with `k <= 16`, stored as adjacency
/// bitmasks. Used both for tuple graphs and their spanning subgraphs.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SmallGraph {
    k: usize,
    adj: [u16; MAX_K],
}

/// The graph `g(x_0, .., x_n)`.
pub type TupleGraph = SmallGraph;
/// A connected spanning subgraph of a tuple graph.
pub type GraphOnRootedVertices = SmallGraph;

impl std::fmt::Debug for SmallGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SmallGraph({}, {:?})", self.k, self.edges())
    }
}

impl SmallGraph {
    pub fn empty(k: usize) -> Self {
        assert!(k <= MAX_K);
        SmallGraph {
            k,
            adj: [0; MAX_K],
        }
    }

    pub fn from_edges(k: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::empty(k);
        for &(a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn tuple_graph(tuple: &VertexTuple, g: &DependencyGraph) -> Self {
        let xs = &tuple.0;
        let mut tg = Self::empty(xs.len());
        for i in 0..xs.len() {
            for j in i + 1..xs.len() {
                if !g.compatible(xs[i], xs[j]) {
                    tg.add_edge(i, j);
                }
            }
        }
        tg
    }

    pub fn from_tree(theta: &LabeledRootedTree) -> Self {
        Self::from_edges(theta.len(), &theta.edges())
    }

    pub fn vertex_count(&self) -> usize {
        self.k
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        debug_assert!(a != b && a < self.k && b < self.k);
        self.adj[a] |= 1 << b;
        self.adj[b] |= 1 << a;
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a] >> b & 1 == 1
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.k {
            let mut m = self.adj[i] & !((2u16 << i).wrapping_sub(1));
            while m != 0 {
                let j = m.trailing_zeros() as usize;
                out.push((i, j));
                m &= m - 1;
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj[..self.k].iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edge-set inclusion.
    pub fn is_subgraph_of(&self, other: &SmallGraph) -> bool {
        self.k == other.k && (0..self.k).all(|i| self.adj[i] & !other.adj[i] == 0)
    }

    pub fn is_connected(&self) -> bool {
        self.k == 0 || self.reach_from_root() == full_mask(self.k)
    }

    fn reach_from_root(&self) -> u16 {
        let mut reach = 1u16;
        let mut frontier = 1u16;
        while frontier != 0 {
            let mut next = 0u16;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                next |= self.adj[v];
                f &= f - 1;
            }
            frontier = next & !reach;
            reach |= next;
        }
        reach
    }

    /// Distances from vertex 0, `None` if disconnected.
    pub fn depths(&self) -> Option<[u8; MAX_K]> {
        let mut depth = [u8::MAX; MAX_K];
        depth[0] = 0;
        let mut reach = 1u16;
        let mut frontier = 1u16;
        let mut d = 0u8;
        while frontier != 0 {
            d += 1;
            let mut next = 0u16;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                next |= self.adj[v];
                f &= f - 1;
            }
            frontier = next & !reach;
            reach |= frontier;
            let mut f = frontier;
            while f != 0 {
                depth[f.trailing_zeros() as usize] = d;
                f &= f - 1;
            }
        }
        (reach == full_mask(self.k)).then_some(depth)
    }
}

fn full_mask(k: usize) -> u16 {
    ((1u32 << k) - 1) as u16
}

/// Parent, depth and plane-order rank of a labeled rooted tree, in fixed
/// arrays so the exhaustive sweeps do not allocate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeView {
    k: usize,
    parent: [u8; MAX_K],
    depth: [u8; MAX_K],
    rank: [u8; MAX_K],
}

impl TreeView {
    pub fn new(theta: &LabeledRootedTree) -> Self {
        let mut view = TreeView {
            k: theta.len(),
            parent: [0; MAX_K],
            depth: [0; MAX_K],
            rank: [0; MAX_K],
        };
        for (v, r) in theta.plane_ranks().into_iter().enumerate() {
            view.parent[v] = theta.parent(v).unwrap_or(0) as u8;
            view.depth[v] = theta.depth(v) as u8;
            view.rank[v] = r as u8;
        }
        view
    }

    pub fn len(&self) -> usize {
        self.k
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn parent(&self, v: usize) -> usize {
        self.parent[v] as usize
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v] as usize
    }

    pub fn rank(&self, v: usize) -> usize {
        self.rank[v] as usize
    }

    /// `d(j) = d(i) - 1` and `i* ≺ j`: the uncle relation used by (t2).
    fn is_younger_uncle(&self, i: usize, j: usize) -> bool {
        i != 0 && self.depth[j] + 1 == self.depth[i] && self.rank[self.parent[i] as usize] < self.rank[j]
    }

    fn tree(&self) -> SmallGraph {
        let mut t = SmallGraph::empty(self.k);
        for v in 1..self.k {
            t.add_edge(v, self.parent[v] as usize);
        }
        t
    }
}

/// All labeled trees on `{0, .., n}` with their views, cached per `n`.
pub fn labeled_tree_catalog(n: usize) -> Result<&'static [(LabeledRootedTree, TreeView)]> {
    static CATALOG: [OnceLock<Vec<(LabeledRootedTree, TreeView)>>; LABELED_TREE_CAP + 1] =
        [const { OnceLock::new() }; LABELED_TREE_CAP + 1];
    if n > LABELED_TREE_CAP {
        return Err(Error::CapExceeded {
            what: "labeled tree order",
            got: n,
            cap: LABELED_TREE_CAP,
        });
    }
    Ok(CATALOG[n].get_or_init(|| {
        enumerate_labeled_trees(n)
            .expect("within cap")
            .into_iter()
            .map(|t| {
                let v = TreeView::new(&t);
                (t, v)
            })
            .collect()
    }))
}

/// Which Penrose conditions are enforced. `WithoutUncleRule` drops (t2) and
/// exists only so the verification suite can check that it notices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PenroseRule {
    #[default]
    Standard,
    WithoutUncleRule,
}

fn penrose_view(view: &TreeView, tg: &TupleGraph, rule: PenroseRule) -> bool {
    let k = view.len();
    // (t0)
    if !(1..k).all(|i| tg.has_edge(i, view.parent(i))) {
        return false;
    }
    for i in 0..k {
        for j in 0..k {
            if i == j || !tg.has_edge(i, j) {
                continue;
            }
            // (t1)
            if view.depth[i] == view.depth[j] {
                return false;
            }
            // (t2)
            if rule == PenroseRule::Standard && view.is_younger_uncle(i, j) {
                return false;
            }
        }
    }
    true
}

pub fn is_penrose_pair(
    theta: &LabeledRootedTree,
    tuple: &VertexTuple,
    g: &DependencyGraph,
) -> Result<bool> {
    is_penrose_pair_with(theta, tuple, g, PenroseRule::Standard)
}

pub fn is_penrose_pair_with(
    theta: &LabeledRootedTree,
    tuple: &VertexTuple,
    g: &DependencyGraph,
    rule: PenroseRule,
) -> Result<bool> {
    if theta.len() != tuple.len() {
        return Err(Error::LengthMismatch {
            expected: theta.len(),
            got: tuple.len(),
        });
    }
    tuple.validate(g, MAX_K)?;
    let tg = SmallGraph::tuple_graph(tuple, g);
    Ok(penrose_view(&TreeView::new(theta), &tg, rule))
}

/// `φ^T(x_0, .., x_n)` as the signed count of connected spanning subgraphs
/// of the tuple graph. Returns 1 for a single point.
pub fn ursell_brute(tuple: &VertexTuple, g: &DependencyGraph) -> Result<i64> {
    tuple.validate(g, TUPLE_CAP)?;
    let tg = SmallGraph::tuple_graph(tuple, g);
    Ok(ursell_of_graph(&tg))
}

/// Signed connected-spanning-subgraph sum of an arbitrary small graph.
pub fn ursell_of_graph(tg: &SmallGraph) -> i64 {
    if tg.k == 1 {
        return 1;
    }
    if !tg.is_connected() {
        return 0;
    }
    let edges = tg.edges();
    let mut total = 0i64;
    for mask in 0u64..(1u64 << edges.len()) {
        let sub = subgraph_from_mask(tg.k, &edges, mask);
        if sub.is_connected() {
            total += if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        }
    }
    total
}

fn subgraph_from_mask(k: usize, edges: &[(usize, usize)], mask: u64) -> SmallGraph {
    let mut sub = SmallGraph::empty(k);
    let mut m = mask;
    while m != 0 {
        let (a, b) = edges[m.trailing_zeros() as usize];
        sub.add_edge(a, b);
        m &= m - 1;
    }
    sub
}

/// `φ^T(x_0, .., x_n) = (-1)^n |P(x_0, .., x_n)|`.
pub fn ursell_penrose(tuple: &VertexTuple, g: &DependencyGraph) -> Result<i64> {
    ursell_penrose_with(tuple, g, PenroseRule::Standard)
}

pub fn ursell_penrose_with(
    tuple: &VertexTuple,
    g: &DependencyGraph,
    rule: PenroseRule,
) -> Result<i64> {
    tuple.validate(g, TUPLE_CAP)?;
    let n = tuple.order();
    let tg = SmallGraph::tuple_graph(tuple, g);
    let count = labeled_tree_catalog(n)?
        .iter()
        .filter(|(_, view)| penrose_view(view, &tg, rule))
        .count() as i64;
    Ok(if n.is_multiple_of(2) { count } else { -count })
}

/// The Penrose trees `P(x_0, .., x_n)`, in Prüfer order.
pub fn penrose_trees(tuple: &VertexTuple, g: &DependencyGraph) -> Result<Vec<LabeledRootedTree>> {
    tuple.validate(g, TUPLE_CAP)?;
    let tg = SmallGraph::tuple_graph(tuple, g);
    Ok(labeled_tree_catalog(tuple.order())?
        .iter()
        .filter(|(_, view)| penrose_view(view, &tg, PenroseRule::Standard))
        .map(|(t, _)| t.clone())
        .collect())
}

/// `p(θ)`: θ plus every tuple-graph edge that joins two vertices of equal
/// depth, or a vertex to an uncle younger than its parent.
pub fn partition_map_p(theta: &LabeledRootedTree, tg: &TupleGraph) -> Result<GraphOnRootedVertices> {
    if theta.len() != tg.k {
        return Err(Error::LengthMismatch {
            expected: tg.k,
            got: theta.len(),
        });
    }
    let tree = SmallGraph::from_tree(theta);
    if !tree.is_subgraph_of(tg) {
        return Err(Error::NotASubgraph);
    }
    Ok(p_of_view(&TreeView::new(theta), &tree, &tg.edges()))
}

fn p_of_view(view: &TreeView, tree: &SmallGraph, tg_edges: &[(usize, usize)]) -> SmallGraph {
    let mut out = *tree;
    for &(a, b) in tg_edges {
        if tree.has_edge(a, b) {
            continue;
        }
        let addable = view.depth[a] == view.depth[b]
            || view.is_younger_uncle(a, b)
            || view.is_younger_uncle(b, a);
        if addable {
            out.add_edge(a, b);
        }
    }
    out
}

/// `q(g)`: the spanning tree obtained by dropping same-depth edges and then
/// attaching every vertex to its oldest neighbor one level up, levels being
/// ordered by the plane order built so far.
pub fn partition_map_q(sub: &GraphOnRootedVertices) -> Result<LabeledRootedTree> {
    let view = q_view(sub).ok_or(Error::Disconnected)?;
    LabeledRootedTree::from_parents((0..sub.k).map(|v| view.parent(v)).collect())
}

/// `q(sub)` together with its depths and plane ranks; the levels are built
/// in plane order, so ranks come out of the construction directly.
fn q_view(sub: &SmallGraph) -> Option<TreeView> {
    let mut depth = sub.depths()?;
    let k = sub.k;
    for d in depth.iter_mut().skip(k) {
        *d = 0;
    }
    let mut view = TreeView {
        k,
        parent: [0; MAX_K],
        depth,
        rank: [0; MAX_K],
    };
    let mut level = [0u8; MAX_K];
    let mut level_len = 1;
    let mut placed = 1;
    let mut d = 0;
    while placed < k {
        d += 1;
        // (position of the parent in the previous level, vertex)
        let mut next = [(0u8, 0u8); MAX_K];
        let mut next_len = 0;
        for (v, &dv) in depth.iter().enumerate().take(k) {
            if dv != d {
                continue;
            }
            let pos = level[..level_len]
                .iter()
                .position(|&u| sub.has_edge(u as usize, v))
                .expect("a vertex at depth d has a neighbor at depth d-1");
            view.parent[v] = level[pos];
            next[next_len] = (pos as u8, v as u8);
            next_len += 1;
        }
        next[..next_len].sort_unstable();
        for (i, &(_, v)) in next[..next_len].iter().enumerate() {
            level[i] = v;
            view.rank[v as usize] = (placed + i) as u8;
        }
        placed += next_len;
        level_len = next_len;
    }
    Some(view)
}

/// Outcome of [`verify_partition_scheme`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionCheck {
    pub holds: bool,
    pub connected_subgraphs: usize,
    pub spanning_trees: usize,
    pub penrose_trees: usize,
    pub counterexample: Option<String>,
}

/// Checks that the intervals `[θ, p(θ)]` partition the connected spanning
/// subgraphs of the tuple graph, that `q` is constant on each interval, and
/// that `p(θ) = θ` exactly for the Penrose trees.
pub fn verify_partition_scheme(tuple: &VertexTuple, g: &DependencyGraph) -> Result<PartitionCheck> {
    tuple.validate(g, TUPLE_CAP)?;
    let tg = SmallGraph::tuple_graph(tuple, g);
    let k = tg.k;
    let mut check = PartitionCheck {
        holds: true,
        connected_subgraphs: 0,
        spanning_trees: 0,
        penrose_trees: 0,
        counterexample: None,
    };
    let fail = |check: &mut PartitionCheck, msg: String| {
        if check.holds {
            check.holds = false;
            check.counterexample = Some(format!("tuple {:?}: {msg}", tuple.0));
        }
    };
    if !tg.is_connected() {
        return Ok(check);
    }
    let edges = tg.edges();
    let mut interval_total = 0usize;
    for mask in 0u64..(1u64 << edges.len()) {
        let sub = subgraph_from_mask(k, &edges, mask);
        let Some(view) = q_view(&sub) else { continue };
        check.connected_subgraphs += 1;
        let theta = view.tree();
        let p = p_of_view(&view, &theta, &edges);
        if !(theta.is_subgraph_of(&sub) && sub.is_subgraph_of(&p)) {
            fail(&mut check, format!("{sub:?} not in [q, p(q)]"));
        }
        if mask.count_ones() as usize != k - 1 {
            continue;
        }
        // sub is a spanning tree, so q(sub) = sub and the view is its own
        check.spanning_trees += 1;
        if theta != sub {
            fail(&mut check, format!("q moves the spanning tree {sub:?}"));
        }
        let is_penrose = penrose_view(&view, &tg, PenroseRule::Standard);
        if is_penrose {
            check.penrose_trees += 1;
        }
        if (p == sub) != is_penrose {
            fail(&mut check, format!("fixed-point law fails at {sub:?}"));
        }
        let mut extra = [(0usize, 0usize); 64];
        let mut n_extra = 0;
        for &(a, b) in &edges {
            if p.has_edge(a, b) && !sub.has_edge(a, b) {
                extra[n_extra] = (a, b);
                n_extra += 1;
            }
        }
        interval_total += 1usize << n_extra;
        for emask in 0u64..(1u64 << n_extra) {
            let mut member = sub;
            let mut m = emask;
            while m != 0 {
                let (a, b) = extra[m.trailing_zeros() as usize];
                member.add_edge(a, b);
                m &= m - 1;
            }
            if q_view(&member).map(|q| q.parent) != Some(view.parent) {
                fail(&mut check, format!("q({member:?}) differs from {sub:?}"));
            }
        }
    }
    if interval_total != check.connected_subgraphs {
        let msg = format!(
            "intervals cover {interval_total} graphs, expected {}",
            check.connected_subgraphs
        );
        fail(&mut check, msg);
    }
    Ok(check)
}

/// Definition-level Penrose check on a witness tree: same-depth labels are
/// compatible, and each label is compatible with every uncle drawn below its
/// parent.
pub fn is_penrose_witness(tau: &WitnessTree, g: &DependencyGraph) -> Result<bool> {
    tau.validate(g)?;
    let t = tau.tree();
    let labels = tau.labels();
    for v in 0..t.len() {
        for w in v + 1..t.len() {
            let dv = t.depth(v);
            let dw = t.depth(w);
            // (t1)
            if dv == dw && !g.compatible(labels[v], labels[w]) {
                return Ok(false);
            }
            // (t3): w deeper than v by one and v below w's parent
            if dw == dv + 1 && t.parent(w).is_some_and(|p| p < v) && !g.compatible(labels[v], labels[w]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Visits every labeling `(x_1, .., x_n)` of the natural labeling of `t`,
/// root label fixed, for which the pair is Penrose. With `ordered`, sibling
/// labels must also increase top to bottom, which makes the visited
/// labelings exactly the good labelings of Penrose witness trees.
pub fn for_each_penrose_labeling<F: FnMut(&[VertexId])>(
    t: &PlaneRootedTree,
    root_label: VertexId,
    g: &DependencyGraph,
    ordered: bool,
    mut visit: F,
) -> Result<()> {
    g.check_vertex(root_label)?;
    let k = t.len();
    // natural labels of each depth form a contiguous range
    let max_depth = t.depths().iter().copied().max().unwrap_or(0);
    let mut level_end = vec![0usize; max_depth + 1];
    for v in 0..k {
        level_end[t.depth(v)] = v + 1;
    }
    let mut level_start = vec![0usize; max_depth + 1];
    level_start[1..].copy_from_slice(&level_end[..max_depth]);
    let closed: Vec<Vec<VertexId>> = (0..g.len()).map(|x| g.closed_neighborhood(x)).collect();
    let mut labels = vec![root_label; k];
    let ctx = LabelingCtx {
        t,
        g,
        ordered,
        level_start: &level_start,
        level_end: &level_end,
        closed: &closed,
    };
    ctx.extend(1, &mut labels, &mut visit);
    Ok(())
}

struct LabelingCtx<'a> {
    t: &'a PlaneRootedTree,
    g: &'a DependencyGraph,
    ordered: bool,
    level_start: &'a [usize],
    level_end: &'a [usize],
    closed: &'a [Vec<VertexId>],
}

impl LabelingCtx<'_> {
    fn extend<F: FnMut(&[VertexId])>(&self, i: usize, labels: &mut Vec<VertexId>, visit: &mut F) {
        if i == labels.len() {
            visit(&labels[1..]);
            return;
        }
        let parent = self.t.parent(i).expect("non-root");
        let d = self.t.depth(i);
        let prev_sibling = (i > 0 && self.t.parent(i - 1) == Some(parent)).then(|| labels[i - 1]);
        // (t0): children overlap their parent
        for &x in &self.closed[labels[parent]] {
            if self.ordered && prev_sibling.is_some_and(|s| x <= s) {
                continue;
            }
            // (t1)
            let same_level_ok = (self.level_start[d]..i).all(|j| self.g.compatible(x, labels[j]));
            // (t2): uncles younger than the parent
            let uncles_ok =
                (parent + 1..self.level_end[d - 1]).all(|j| self.g.compatible(x, labels[j]));
            if same_level_ok && uncles_ok {
                labels[i] = x;
                self.extend(i + 1, labels, visit);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::map_theta;

    fn tup(xs: &[usize]) -> VertexTuple {
        VertexTuple(xs.to_vec())
    }

    #[test]
    fn penrose_pair_examples() {
        let tri = DependencyGraph::complete(3);
        let path = LabeledRootedTree::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let star = LabeledRootedTree::from_edges(3, &[(0, 1), (0, 2)]).unwrap();
        assert!(is_penrose_pair(&path, &tup(&[0, 1, 2]), &tri).unwrap());
        assert!(!is_penrose_pair(&star, &tup(&[0, 1, 2]), &tri).unwrap());
        let edge = DependencyGraph::path(2);
        let one = LabeledRootedTree::from_edges(2, &[(0, 1)]).unwrap();
        assert!(is_penrose_pair(&one, &tup(&[0, 1]), &edge).unwrap());
        assert!(matches!(
            is_penrose_pair(&one, &tup(&[0, 1, 0]), &edge),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn uncle_rule_uses_plane_order_not_integer_order() {
        // root 0 with children 1 and 3, vertex 2 hangs below 3
        // (ranks: 0, 1, 3, 2), so 1 is an older uncle of 2 and allowed to
        // overlap it
        let theta = LabeledRootedTree::from_edges(4, &[(0, 1), (0, 3), (2, 3)]).unwrap();
        let g = DependencyGraph::from_edges(4, &[(0, 1), (0, 3), (2, 3), (1, 2)]).unwrap();
        assert!(is_penrose_pair(&theta, &tup(&[0, 1, 2, 3]), &g).unwrap());
        // swap the roles: 2 below 1, 3 a younger uncle of 2 that overlaps it
        let theta = LabeledRootedTree::from_edges(4, &[(0, 1), (0, 3), (1, 2)]).unwrap();
        let g = DependencyGraph::from_edges(4, &[(0, 1), (0, 3), (1, 2), (2, 3)]).unwrap();
        assert!(!is_penrose_pair(&theta, &tup(&[0, 1, 2, 3]), &g).unwrap());
        assert!(is_penrose_pair_with(&theta, &tup(&[0, 1, 2, 3]), &g, PenroseRule::WithoutUncleRule).unwrap());
    }

    #[test]
    fn ursell_brute_examples() {
        let edgeless = DependencyGraph::edgeless(2);
        assert_eq!(ursell_brute(&tup(&[0, 1]), &edgeless).unwrap(), 0);
        let edge = DependencyGraph::path(2);
        assert_eq!(ursell_brute(&tup(&[0, 1]), &edge).unwrap(), -1);
        let tri = DependencyGraph::complete(3);
        assert_eq!(ursell_brute(&tup(&[0, 1, 2]), &tri).unwrap(), 2);
        assert_eq!(ursell_brute(&tup(&[2]), &tri).unwrap(), 1);
        // repeated points are always incompatible
        assert_eq!(ursell_brute(&tup(&[0, 0]), &edgeless).unwrap(), -1);
    }

    #[test]
    fn ursell_penrose_examples() {
        let tri = DependencyGraph::complete(3);
        assert_eq!(ursell_penrose(&tup(&[0, 1, 2]), &tri).unwrap(), 2);
        let edge = DependencyGraph::path(2);
        assert_eq!(ursell_penrose(&tup(&[0, 1]), &edge).unwrap(), -1);
        let empty = DependencyGraph::edgeless(3);
        assert_eq!(ursell_penrose(&tup(&[0, 1, 2]), &empty).unwrap(), 0);
    }

    #[test]
    fn ursell_complete_graph_is_signed_factorial() {
        // K_k tuple graph: φ^T = (-1)^{k-1} (k-1)!
        for k in 1..=6usize {
            let g = DependencyGraph::complete(k);
            let t = tup(&(0..k).collect::<Vec<_>>());
            let fact: i64 = (1..k as i64).product();
            let expected = if k % 2 == 1 { fact } else { -fact };
            assert_eq!(ursell_brute(&t, &g).unwrap(), expected);
            assert_eq!(ursell_penrose(&t, &g).unwrap(), expected);
        }
    }

    #[test]
    fn tuple_cap() {
        let g = DependencyGraph::complete(2);
        let long = tup(&[0; TUPLE_CAP + 1]);
        assert!(matches!(ursell_brute(&long, &g), Err(Error::CapExceeded { .. })));
        assert!(matches!(ursell_penrose(&long, &g), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn p_map_examples() {
        let tri = DependencyGraph::complete(3);
        let tg = SmallGraph::tuple_graph(&tup(&[0, 1, 2]), &tri);
        let star = LabeledRootedTree::from_edges(3, &[(0, 1), (0, 2)]).unwrap();
        assert_eq!(partition_map_p(&star, &tg).unwrap(), tg);
        let path = LabeledRootedTree::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(partition_map_p(&path, &tg).unwrap(), SmallGraph::from_tree(&path));
        let edge = DependencyGraph::path(2);
        let tg1 = SmallGraph::tuple_graph(&tup(&[0, 1]), &edge);
        let one = LabeledRootedTree::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(partition_map_p(&one, &tg1).unwrap(), tg1);
        let no_edges = SmallGraph::empty(2);
        assert_eq!(partition_map_p(&one, &no_edges), Err(Error::NotASubgraph));
    }

    #[test]
    fn q_map_examples() {
        let tri = SmallGraph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]);
        assert_eq!(partition_map_q(&tri).unwrap().edges(), vec![(0, 1), (0, 2)]);
        let tree = SmallGraph::from_edges(4, &[(0, 2), (2, 1), (2, 3)]);
        assert_eq!(SmallGraph::from_tree(&partition_map_q(&tree).unwrap()), tree);
        // 4-cycle: 2 sees both depth-1 vertices and hangs below the older one
        let c4 = SmallGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let q = partition_map_q(&c4).unwrap();
        assert_eq!(q.edges(), vec![(0, 1), (1, 2), (0, 3)]);
        let split = SmallGraph::from_edges(3, &[(0, 1)]);
        assert_eq!(partition_map_q(&split), Err(Error::Disconnected));
    }

    #[test]
    fn q_follows_plane_order_at_depth_three() {
        // depth-1: 1, 2; depth-2: 4 below 1, 3 below 2; vertex 5 at depth 3
        // sees both 3 and 4. 4 is older (its parent 1 is older), so 5 goes
        // under 4 even though 3 < 4.
        let g = SmallGraph::from_edges(6, &[(0, 1), (0, 2), (1, 4), (2, 3), (3, 5), (4, 5)]);
        let q = partition_map_q(&g).unwrap();
        assert_eq!(q.parent(5), Some(4));
    }

    #[test]
    fn partition_scheme_on_triangle() {
        let tri = DependencyGraph::complete(3);
        let c = verify_partition_scheme(&tup(&[0, 1, 2]), &tri).unwrap();
        assert!(c.holds, "{c:?}");
        assert_eq!(c.connected_subgraphs, 4);
        assert_eq!(c.spanning_trees, 3);
        assert_eq!(c.penrose_trees, 2);
        let edge = DependencyGraph::path(2);
        let c = verify_partition_scheme(&tup(&[0, 1]), &edge).unwrap();
        assert!(c.holds);
        assert_eq!((c.connected_subgraphs, c.spanning_trees), (1, 1));
    }

    #[test]
    fn penrose_witness_examples() {
        let g = DependencyGraph::path(2);
        let chain = WitnessTree::new(PlaneRootedTree::parse_parens("(())").unwrap(), vec![0, 0]).unwrap();
        assert!(is_penrose_witness(&chain, &g).unwrap());
        // root 0 with children 0 and 1, and 0 ≁ 1
        let cherry =
            WitnessTree::new(PlaneRootedTree::parse_parens("(()())").unwrap(), vec![0, 0, 1]).unwrap();
        assert!(!is_penrose_witness(&cherry, &g).unwrap());
        let bad = WitnessTree::new(PlaneRootedTree::parse_parens("(())").unwrap(), vec![0, 5]).unwrap();
        assert!(is_penrose_witness(&bad, &g).is_err());
    }

    #[test]
    fn penrose_labelings_match_pair_predicate() {
        let g = DependencyGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 2)]).unwrap();
        for n in 0..=4 {
            for t in crate::trees::enumerate_plane_trees(n).unwrap() {
                let theta = map_theta(&t);
                for x0 in 0..4 {
                    let mut seen = Vec::new();
                    for_each_penrose_labeling(&t, x0, &g, false, |xs| seen.push(xs.to_vec())).unwrap();
                    let mut brute = Vec::new();
                    for code in 0..4usize.pow(n as u32) {
                        let mut xs = vec![x0];
                        let mut c = code;
                        let mut rest = vec![0; n];
                        for slot in rest.iter_mut().rev() {
                            *slot = c % 4;
                            c /= 4;
                        }
                        xs.extend(&rest);
                        if is_penrose_pair(&theta, &VertexTuple(xs), &g).unwrap() {
                            brute.push(rest);
                        }
                    }
                    seen.sort();
                    assert_eq!(seen, brute, "{t} rooted at {x0}");
                }
            }
        }
    }
}
