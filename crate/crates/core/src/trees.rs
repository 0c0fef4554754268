//! Plane rooted trees, labeled rooted trees, and the maps between them.
//!
//! A [`PlaneRootedTree`] is always stored under its natural labeling: the root
//! is 0, its children are `1..=s_0` top to bottom, then the children of
//! vertex 1, and so on breadth first. Vertex identity and the plane-tree
//! order are therefore plain integer comparisons.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

pub const PLANE_TREE_CAP: usize = 10;
pub const LABELED_TREE_CAP: usize = 7;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PlaneRootedTree {
    parent: Vec<usize>,
    children: Vec<Vec<usize>>,
    depth: Vec<usize>,
}

impl PlaneRootedTree {
    pub fn root_only() -> Self {
        Self::from_child_counts(&[0]).expect("single vertex")
    }

    /// Builds the tree whose vertex `k` (natural label) has `counts[k]`
    /// children.
    pub fn from_child_counts(counts: &[usize]) -> Result<Self> {
        let n_vertices = counts.len();
        if n_vertices == 0 {
            return Err(Error::InvalidTree("no vertices".into()));
        }
        let mut parent = vec![0; n_vertices];
        let mut children = vec![Vec::new(); n_vertices];
        let mut depth = vec![0; n_vertices];
        let mut next = 1;
        for (k, &s) in counts.iter().enumerate() {
            if k >= next {
                return Err(Error::InvalidTree(format!(
                    "vertex {k} is unreachable from the root"
                )));
            }
            for _ in 0..s {
                if next >= n_vertices {
                    return Err(Error::InvalidTree("child counts exceed vertex count".into()));
                }
                parent[next] = k;
                depth[next] = depth[k] + 1;
                children[k].push(next);
                next += 1;
            }
        }
        if next != n_vertices {
            return Err(Error::InvalidTree("child counts do not cover all vertices".into()));
        }
        Ok(PlaneRootedTree {
            parent,
            children,
            depth,
        })
    }

    /// Builds from a nested child structure where `kids[v]` lists the
    /// children of `v` in plane order under arbitrary vertex names, `root`
    /// being the root's name. Renumbers to the natural labeling and returns
    /// `natural[name]`.
    pub fn from_ordered_children(kids: &[Vec<usize>], root: usize) -> Result<(Self, Vec<usize>)> {
        let n = kids.len();
        let mut natural = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::from([root]);
        natural[root] = 0;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &c in &kids[v] {
                if c >= n || natural[c] != usize::MAX {
                    return Err(Error::InvalidTree(format!("vertex {c} reached twice")));
                }
                natural[c] = order.len() + queue.len();
                queue.push_back(c);
            }
        }
        if order.len() != n {
            return Err(Error::InvalidTree("not connected".into()));
        }
        let counts: Vec<usize> = order.iter().map(|&v| kids[v].len()).collect();
        Ok((Self::from_child_counts(&counts)?, natural))
    }

    /// Number of vertices, `n + 1`.
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `n`, the number of non-root vertices.
    pub fn order(&self) -> usize {
        self.len() - 1
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        (v != 0).then(|| self.parent[v])
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn depths(&self) -> &[usize] {
        &self.depth
    }

    pub fn child_counts(&self) -> Vec<usize> {
        self.children.iter().map(Vec::len).collect()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..self.len()).map(|v| (self.parent[v], v))
    }

    /// Parenthesized form, e.g. a root with two leaf children is `(()())`.
    pub fn to_parens(&self) -> String {
        let mut out = String::with_capacity(2 * self.len());
        self.write_parens(0, &mut out);
        out
    }

    fn write_parens(&self, v: usize, out: &mut String) {
        out.push('(');
        for &c in &self.children[v] {
            self.write_parens(c, out);
        }
        out.push(')');
    }

    pub fn parse_parens(s: &str) -> Result<Self> {
        let mut kids: Vec<Vec<usize>> = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        let mut closed_root = false;
        for ch in s.trim().chars() {
            if closed_root {
                return Err(Error::InvalidTree("trailing input after root".into()));
            }
            match ch {
                '(' => {
                    let id = kids.len();
                    kids.push(Vec::new());
                    if let Some(&p) = stack.last() {
                        kids[p].push(id);
                    } else if id != 0 {
                        return Err(Error::InvalidTree("more than one root".into()));
                    }
                    stack.push(id);
                }
                ')' => {
                    stack
                        .pop()
                        .ok_or_else(|| Error::InvalidTree("unbalanced ')'".into()))?;
                    closed_root = stack.is_empty();
                }
                c if c.is_whitespace() => {}
                c => return Err(Error::InvalidTree(format!("unexpected character {c:?}"))),
            }
        }
        if !closed_root {
            return Err(Error::InvalidTree("unbalanced '('".into()));
        }
        Ok(Self::from_ordered_children(&kids, 0)?.0)
    }

    /// AHU canonical string of the underlying unlabeled rooted tree.
    pub fn unordered_canonical(&self) -> String {
        fn canon(t: &PlaneRootedTree, v: usize) -> String {
            let mut parts: Vec<String> = t.children[v].iter().map(|&c| canon(t, c)).collect();
            parts.sort();
            format!("({})", parts.concat())
        }
        canon(self, 0)
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.len() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.len(),
            })
        }
    }
}

impl fmt::Debug for PlaneRootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PlaneRootedTree{}", self.to_parens())
    }
}

impl fmt::Display for PlaneRootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_parens())
    }
}

/// Tree on `{0, .., n}` rooted at 0.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LabeledRootedTree {
    parent: Vec<usize>,
    depth: Vec<usize>,
    // children sorted by integer label
    children: Vec<Vec<usize>>,
}

impl LabeledRootedTree {
    pub fn from_edges(n_vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n_vertices == 0 {
            return Err(Error::InvalidTree("no vertices".into()));
        }
        if edges.len() + 1 != n_vertices {
            return Err(Error::InvalidTree(format!(
                "{} edges cannot span {n_vertices} vertices as a tree",
                edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); n_vertices];
        for &(a, b) in edges {
            if a >= n_vertices || b >= n_vertices || a == b {
                return Err(Error::InvalidTree(format!("bad edge {{{a},{b}}}")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut parent = vec![usize::MAX; n_vertices];
        parent[0] = 0;
        let mut queue = VecDeque::from([0]);
        let mut seen = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if parent[w] == usize::MAX {
                    parent[w] = v;
                    seen += 1;
                    queue.push_back(w);
                }
            }
        }
        if seen != n_vertices {
            return Err(Error::InvalidTree("edges do not form a spanning tree".into()));
        }
        Self::from_parents(parent)
    }

    /// `parent[0]` is ignored.
    pub fn from_parents(mut parent: Vec<usize>) -> Result<Self> {
        let n = parent.len();
        if n == 0 {
            return Err(Error::InvalidTree("no vertices".into()));
        }
        parent[0] = 0;
        let mut depth = vec![usize::MAX; n];
        depth[0] = 0;
        for v in 1..n {
            // walk up until a vertex of known depth
            let mut path = vec![v];
            let mut u = v;
            while depth[u] == usize::MAX {
                u = parent[u];
                if u >= n || path.len() > n {
                    return Err(Error::InvalidTree("parent array has a cycle".into()));
                }
                path.push(u);
            }
            let base = depth[u];
            for (k, &w) in path.iter().rev().enumerate().skip(1) {
                depth[w] = base + k;
            }
        }
        let mut children = vec![Vec::new(); n];
        for v in 1..n {
            children[parent[v]].push(v);
        }
        Ok(LabeledRootedTree {
            parent,
            depth,
            children,
        })
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        (v != 0).then(|| self.parent[v])
    }

    pub fn parents(&self) -> &[usize] {
        &self.parent
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn depths(&self) -> &[usize] {
        &self.depth
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    /// Edges `{parent, child}` listed by increasing child label.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (1..self.len()).map(|v| (self.parent[v], v)).collect()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        (a != 0 && self.parent[a] == b) || (b != 0 && self.parent[b] == a)
    }

    /// Natural label of every vertex in `m(θ)`, i.e. the rank of each vertex
    /// under the induced plane-tree order.
    pub fn plane_ranks(&self) -> Vec<usize> {
        let mut rank = vec![0; self.len()];
        let mut queue = VecDeque::from([0]);
        let mut next = 0;
        while let Some(v) = queue.pop_front() {
            rank[v] = next;
            next += 1;
            queue.extend(self.children[v].iter().copied());
        }
        rank
    }
}

impl fmt::Debug for LabeledRootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LabeledRootedTree{:?}", self.edges())
    }
}

/// Forgets the integer labels, ordering children by label.
pub fn map_m(theta: &LabeledRootedTree) -> PlaneRootedTree {
    PlaneRootedTree::from_ordered_children(&theta.children, 0)
        .expect("labeled tree is a valid rooted tree")
        .0
}

/// The labeled tree carrying the natural labels of `t`.
pub fn map_theta(t: &PlaneRootedTree) -> LabeledRootedTree {
    LabeledRootedTree::from_parents(t.parent.clone()).expect("plane tree is a valid rooted tree")
}

/// `|m^{-1}(t)| = n! / Π_v s_v!`.
pub fn preimage_size_of_m(t: &PlaneRootedTree) -> Result<u64> {
    let overflow = || Error::CapExceeded {
        what: "preimage size",
        got: t.order(),
        cap: 20,
    };
    let mut num: u128 = factorial(t.order()).ok_or_else(overflow)?;
    for kids in &t.children {
        num /= factorial(kids.len()).ok_or_else(overflow)?;
    }
    u64::try_from(num).map_err(|_| overflow())
}

/// Inverse of `n!/Π s_v!` as a float, used for series weights.
pub fn inverse_sibling_factorials(t: &PlaneRootedTree) -> f64 {
    t.children
        .iter()
        .map(|k| 1.0 / (1..=k.len()).map(|i| i as f64).product::<f64>())
        .product()
}

fn factorial(n: usize) -> Option<u128> {
    (1..=n as u128).try_fold(1u128, |acc, i| acc.checked_mul(i))
}

pub fn plane_order_compare(t: &PlaneRootedTree, u: usize, v: usize) -> Result<Ordering> {
    t.check_vertex(u)?;
    t.check_vertex(v)?;
    Ok(u.cmp(&v))
}

/// All plane rooted trees with `n + 1` vertices, in decreasing
/// lexicographic order of their breadth-first child-count sequences
/// (so the star comes first and the path last).
pub fn enumerate_plane_trees(n: usize) -> Result<Vec<PlaneRootedTree>> {
    if n > PLANE_TREE_CAP {
        return Err(Error::CapExceeded {
            what: "plane tree order",
            got: n,
            cap: PLANE_TREE_CAP,
        });
    }
    let mut out = Vec::new();
    let mut counts = Vec::with_capacity(n + 1);
    fill_counts(n, 0, &mut counts, &mut out);
    Ok(out)
}

fn fill_counts(n: usize, used: usize, counts: &mut Vec<usize>, out: &mut Vec<PlaneRootedTree>) {
    let k = counts.len();
    if k == n {
        // last vertex is a leaf
        if used == n {
            counts.push(0);
            out.push(PlaneRootedTree::from_child_counts(counts).expect("valid sequence"));
            counts.pop();
        }
        return;
    }
    // vertex k+1 must have been discovered once vertex k is processed
    let min = (k + 1).saturating_sub(used);
    for s in (min..=n - used).rev() {
        counts.push(s);
        fill_counts(n, used + s, counts, out);
        counts.pop();
    }
}

/// All labeled trees on `{0, .., n}` rooted at 0, in lexicographic order of
/// their Prüfer sequences.
pub fn enumerate_labeled_trees(n: usize) -> Result<Vec<LabeledRootedTree>> {
    if n > LABELED_TREE_CAP {
        return Err(Error::CapExceeded {
            what: "labeled tree order",
            got: n,
            cap: LABELED_TREE_CAP,
        });
    }
    let vertices = n + 1;
    if vertices == 1 {
        return Ok(vec![LabeledRootedTree::from_parents(vec![0])?]);
    }
    let len = vertices - 2;
    let total = vertices.pow(len as u32);
    let mut out = Vec::with_capacity(total);
    let mut seq = vec![0usize; len];
    for code in 0..total {
        let mut c = code;
        for slot in seq.iter_mut().rev() {
            *slot = c % vertices;
            c /= vertices;
        }
        let edges = prufer_decode(&seq, vertices);
        out.push(LabeledRootedTree::from_edges(vertices, &edges)?);
    }
    Ok(out)
}

fn prufer_decode(seq: &[usize], vertices: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; vertices];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(vertices - 1);
    for &s in seq {
        let leaf = (0..vertices).find(|&v| degree[v] == 1).expect("a leaf exists");
        edges.push((leaf, s));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..vertices).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

pub fn catalan(n: usize) -> u64 {
    (0..n).fold(1u64, |c, k| c * 2 * (2 * k as u64 + 1) / (k as u64 + 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{BTreeSet, HashMap};

    #[test]
    fn plane_tree_counts() {
        assert_eq!(enumerate_plane_trees(0).unwrap().len(), 1);
        assert_eq!(enumerate_plane_trees(2).unwrap().len(), 2);
        assert_eq!(enumerate_plane_trees(3).unwrap().len(), 5);
        for n in 0..=8 {
            assert_eq!(enumerate_plane_trees(n).unwrap().len() as u64, catalan(n));
        }
        assert!(enumerate_plane_trees(PLANE_TREE_CAP + 1).is_err());
    }

    #[test]
    fn plane_trees_of_two_edges_in_listing_order() {
        let ts: Vec<String> = enumerate_plane_trees(2)
            .unwrap()
            .iter()
            .map(|t| t.to_parens())
            .collect();
        assert_eq!(ts, vec!["(()())", "((()))"]);
    }

    #[test]
    fn plane_trees_distinct() {
        let ts = enumerate_plane_trees(6).unwrap();
        let set: BTreeSet<String> = ts.iter().map(|t| t.to_parens()).collect();
        assert_eq!(set.len(), ts.len());
    }

    #[test]
    fn labeled_tree_counts() {
        assert_eq!(enumerate_labeled_trees(1).unwrap().len(), 1);
        assert_eq!(enumerate_labeled_trees(2).unwrap().len(), 3);
        assert_eq!(enumerate_labeled_trees(3).unwrap().len(), 16);
        assert!(enumerate_labeled_trees(LABELED_TREE_CAP + 1).is_err());
        let ts = enumerate_labeled_trees(4).unwrap();
        let set: BTreeSet<Vec<(usize, usize)>> = ts.iter().map(|t| t.edges()).collect();
        assert_eq!(set.len(), 125);
    }

    #[test]
    fn unlabeled_count_at_four_vertices() {
        let classes: BTreeSet<String> = enumerate_plane_trees(3)
            .unwrap()
            .iter()
            .map(|t| t.unordered_canonical())
            .collect();
        assert_eq!(classes.len(), 4);
    }

    #[test]
    fn m_merges_and_separates_the_worked_examples() {
        let t1 = LabeledRootedTree::from_edges(5, &[(0, 3), (1, 3), (2, 3), (2, 4)]).unwrap();
        let t2 = LabeledRootedTree::from_edges(5, &[(0, 2), (1, 4), (2, 3), (2, 4)]).unwrap();
        let t3 = LabeledRootedTree::from_edges(5, &[(0, 2), (0, 3), (1, 3), (3, 4)]).unwrap();
        let t4 = LabeledRootedTree::from_edges(5, &[(0, 2), (0, 4), (2, 3), (1, 2)]).unwrap();
        assert_ne!(t1, t2);
        assert_eq!(map_m(&t1), map_m(&t2));
        assert_ne!(map_m(&t3), map_m(&t4));
        assert_eq!(map_m(&t3).unordered_canonical(), map_m(&t4).unordered_canonical());
        assert_eq!(map_m(&t1).to_parens(), "((()(())))");
    }

    #[test]
    fn m_of_single_edge() {
        let t = LabeledRootedTree::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(map_m(&t).to_parens(), "(())");
    }

    #[test]
    fn theta_examples() {
        let t = PlaneRootedTree::root_only();
        assert_eq!(map_theta(&t).len(), 1);
        let star = PlaneRootedTree::parse_parens("(()())").unwrap();
        assert_eq!(map_theta(&star).edges(), vec![(0, 1), (0, 2)]);
    }

    #[test]
    fn m_after_theta_is_identity() {
        for n in 0..=6 {
            for t in enumerate_plane_trees(n).unwrap() {
                assert_eq!(map_m(&map_theta(&t)), t);
            }
        }
    }

    #[test]
    fn preimage_sizes() {
        let path = PlaneRootedTree::parse_parens("(((())))").unwrap();
        assert_eq!(preimage_size_of_m(&path).unwrap(), 6);
        let star = PlaneRootedTree::parse_parens("(()()())").unwrap();
        assert_eq!(preimage_size_of_m(&star).unwrap(), 1);
        assert_eq!(preimage_size_of_m(&PlaneRootedTree::root_only()).unwrap(), 1);
    }

    #[test]
    fn preimage_law_by_brute_force() {
        for n in 0..=5 {
            let mut counts: HashMap<PlaneRootedTree, u64> = HashMap::new();
            for theta in enumerate_labeled_trees(n).unwrap() {
                *counts.entry(map_m(&theta)).or_default() += 1;
            }
            let planes = enumerate_plane_trees(n).unwrap();
            assert_eq!(counts.len(), planes.len());
            for t in planes {
                assert_eq!(counts[&t], preimage_size_of_m(&t).unwrap(), "{t}");
            }
        }
    }

    #[test]
    fn preimage_sizes_sum_to_cayley() {
        for n in 1..=6 {
            let total: u64 = enumerate_plane_trees(n)
                .unwrap()
                .iter()
                .map(|t| preimage_size_of_m(t).unwrap())
                .sum();
            assert_eq!(total, ((n + 1) as u64).pow(n as u32 - 1));
        }
    }

    #[test]
    fn plane_order_matches_depth_then_drawing_position() {
        // drawing position: preorder index ranks vertices top-to-bottom
        // within a level
        fn preorder(t: &PlaneRootedTree, v: usize, out: &mut Vec<usize>) {
            out.push(v);
            for &c in t.children(v) {
                preorder(t, c, out);
            }
        }
        for n in 0..=5 {
            for t in enumerate_plane_trees(n).unwrap() {
                let mut pre = Vec::new();
                preorder(&t, 0, &mut pre);
                let mut pos = vec![0; t.len()];
                for (i, &v) in pre.iter().enumerate() {
                    pos[v] = i;
                }
                for u in 0..t.len() {
                    for v in 0..t.len() {
                        let expected = (t.depth(u), pos[u]).cmp(&(t.depth(v), pos[v]));
                        assert_eq!(plane_order_compare(&t, u, v).unwrap(), expected);
                    }
                }
            }
        }
    }

    #[test]
    fn plane_order_rejects_foreign_vertex() {
        let t = PlaneRootedTree::parse_parens("(())").unwrap();
        assert!(plane_order_compare(&t, 0, 2).is_err());
        assert_eq!(plane_order_compare(&t, 0, 1).unwrap(), Ordering::Less);
    }

    #[test]
    fn parens_round_trip_and_errors() {
        for t in enumerate_plane_trees(5).unwrap() {
            assert_eq!(PlaneRootedTree::parse_parens(&t.to_parens()).unwrap(), t);
        }
        assert!(PlaneRootedTree::parse_parens("(()").is_err());
        assert!(PlaneRootedTree::parse_parens("()()").is_err());
        assert!(PlaneRootedTree::parse_parens("(x)").is_err());
    }

    #[test]
    fn plane_ranks_follow_label_ordered_bfs() {
        let t3 = LabeledRootedTree::from_edges(5, &[(0, 2), (0, 3), (1, 3), (3, 4)]).unwrap();
        // root 0; children 2,3; 3's children 1,4
        assert_eq!(t3.plane_ranks(), vec![0, 3, 1, 2, 4]);
    }

    #[test]
    fn catalan_numbers() {
        assert_eq!(
            (0..8).map(catalan).collect::<Vec<_>>(),
            vec![1, 1, 2, 5, 14, 42, 132, 429]
        );
    }
}
