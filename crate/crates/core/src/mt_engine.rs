//! The Moser-Tardos resampling algorithm, its execution log, and witness
//! trees extracted from the log.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Range;
use std::str::FromStr;
use std::sync::Arc;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::depgraph::{DependencyGraph, VertexId};
use crate::error::{Error, Result};
use crate::penrose::is_penrose_witness;
use crate::trees::PlaneRootedTree;

pub const DEFAULT_STEP_CAP: usize = 1_000_000;
pub const DEFAULT_SEED: u64 = 0x5EED;
/// Largest vbl domain product enumerated by [`exact_event_probability`].
pub const EXACT_PROBABILITY_CAP: usize = 1 << 20;

const SELECTION_STREAM: u64 = 1;

/// Independent finite random variables. Outcomes of variable `i` are
/// `0..domain_size(i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct VariableModel {
    probabilities: Vec<Vec<f64>>,
}

impl VariableModel {
    pub fn new(probabilities: Vec<Vec<f64>>) -> Result<Self> {
        for (i, dist) in probabilities.iter().enumerate() {
            if dist.is_empty() {
                return Err(Error::InvalidModel(format!("variable {i} has no outcomes")));
            }
            if dist.iter().any(|q| !q.is_finite() || *q < 0.0) {
                return Err(Error::InvalidModel(format!("variable {i} has a negative probability")));
            }
            let total: f64 = dist.iter().sum();
            if (total - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidModel(format!(
                    "variable {i}: probabilities sum to {total}"
                )));
            }
        }
        Ok(VariableModel { probabilities })
    }

    pub fn fair_bits(n: usize) -> Self {
        VariableModel {
            probabilities: vec![vec![0.5, 0.5]; n],
        }
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    pub fn domain_size(&self, var: usize) -> usize {
        self.probabilities[var].len()
    }

    pub fn probabilities(&self, var: usize) -> &[f64] {
        &self.probabilities[var]
    }
}

/// Predicate over the values of an event's variables, given in `vbl` order.
pub type Predicate = Arc<dyn Fn(&[usize]) -> bool + Send + Sync>;

#[derive(Clone)]
pub struct EventSpec {
    pub id: VertexId,
    /// Sorted, distinct variable ids.
    pub vbl: Vec<usize>,
    pub predicate: Predicate,
    pub p: f64,
}

impl EventSpec {
    pub fn new(id: VertexId, vbl: Vec<usize>, predicate: Predicate, p: f64) -> Self {
        let vbl: Vec<usize> = vbl.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        EventSpec { id, vbl, predicate, p }
    }

    /// Builds the event and sets `p` to its exact probability under `model`.
    pub fn with_exact_probability(
        id: VertexId,
        vbl: Vec<usize>,
        predicate: Predicate,
        model: &VariableModel,
    ) -> Result<Self> {
        let mut e = Self::new(id, vbl, predicate, 0.0);
        e.p = exact_event_probability(&e, model)?;
        Ok(e)
    }

    /// Whether the event occurs under the full assignment.
    pub fn holds(&self, assignment: &[usize], scratch: &mut Vec<usize>) -> bool {
        scratch.clear();
        scratch.extend(self.vbl.iter().map(|&v| assignment[v]));
        (self.predicate)(scratch)
    }
}

impl fmt::Debug for EventSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EventSpec")
            .field("id", &self.id)
            .field("vbl", &self.vbl)
            .field("p", &self.p)
            .finish_non_exhaustive()
    }
}

pub fn exact_event_probability(e: &EventSpec, m: &VariableModel) -> Result<f64> {
    exact_event_probability_capped(e, m, EXACT_PROBABILITY_CAP)
}

/// Enumerates the product of the vbl domains.
pub fn exact_event_probability_capped(e: &EventSpec, m: &VariableModel, cap: usize) -> Result<f64> {
    if let Some(&v) = e.vbl.iter().find(|&&v| v >= m.len()) {
        return Err(Error::Inconsistent(format!("event {} uses unknown variable {v}", e.id)));
    }
    let sizes: Vec<usize> = e.vbl.iter().map(|&v| m.domain_size(v)).collect();
    let mut total = 1usize;
    for &s in &sizes {
        total = total.saturating_mul(s);
        if total > cap {
            return Err(Error::CapExceeded {
                what: "event domain size",
                got: total,
                cap,
            });
        }
    }
    let mut values = vec![0usize; sizes.len()];
    let mut prob = 0.0;
    for _ in 0..total {
        if (e.predicate)(&values) {
            prob += values
                .iter()
                .zip(&e.vbl)
                .map(|(&val, &var)| m.probabilities(var)[val])
                .product::<f64>();
        }
        for (slot, &size) in values.iter_mut().zip(&sizes) {
            *slot += 1;
            if *slot < size {
                break;
            }
            *slot = 0;
        }
    }
    Ok(prob)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionRule {
    #[default]
    LowestIndex,
    UniformRandom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MtConfig {
    pub seed: u64,
    pub step_cap: usize,
    pub rule: SelectionRule,
}

impl Default for MtConfig {
    fn default() -> Self {
        MtConfig {
            seed: DEFAULT_SEED,
            step_cap: DEFAULT_STEP_CAP,
            rule: SelectionRule::LowestIndex,
        }
    }
}

impl MtConfig {
    pub fn with_seed(seed: u64) -> Self {
        MtConfig {
            seed,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExecutionLog {
    pub seed: u64,
    pub rule: SelectionRule,
    /// `C(1), C(2), ..` (stored 0-based).
    pub steps: Vec<VertexId>,
    /// False when the step cap ran out first.
    pub terminated: bool,
    pub counts: BTreeMap<VertexId, usize>,
    /// The final assignment (satisfying iff `terminated`).
    pub assignment: Vec<usize>,
}

impl ExecutionLog {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `C(s)` for `1 ≤ s ≤ len`.
    pub fn step(&self, s: usize) -> Result<VertexId> {
        if s == 0 || s > self.steps.len() {
            return Err(Error::StepOutOfRange {
                step: s,
                len: self.steps.len(),
            });
        }
        Ok(self.steps[s - 1])
    }

    pub fn count(&self, x: VertexId) -> usize {
        self.counts.get(&x).copied().unwrap_or(0)
    }
}

/// Checks that events are numbered `0..n` like the graph's vertices, their
/// variables exist, and every pair of events sharing a variable is adjacent.
pub fn check_consistency(m: &VariableModel, events: &[EventSpec], g: &DependencyGraph) -> Result<()> {
    if events.len() != g.len() {
        return Err(Error::Inconsistent(format!(
            "{} events but {} graph vertices",
            events.len(),
            g.len()
        )));
    }
    let mut users: Vec<Vec<VertexId>> = vec![Vec::new(); m.len()];
    for (x, e) in events.iter().enumerate() {
        if e.id != x {
            return Err(Error::Inconsistent(format!("event at position {x} has id {}", e.id)));
        }
        for &v in &e.vbl {
            if v >= m.len() {
                return Err(Error::Inconsistent(format!("event {x} uses unknown variable {v}")));
            }
            users[v].push(x);
        }
    }
    for (v, us) in users.iter().enumerate() {
        for (i, &a) in us.iter().enumerate() {
            for &b in &us[i + 1..] {
                if !g.is_adjacent(a, b) {
                    return Err(Error::Inconsistent(format!(
                        "events {a} and {b} share variable {v} but are not adjacent"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Runs the algorithm: sample every variable, then repeatedly pick a
/// violated event by `config.rule` and resample exactly its variables.
pub fn run_mt(
    m: &VariableModel,
    events: &[EventSpec],
    g: &DependencyGraph,
    config: &MtConfig,
) -> Result<ExecutionLog> {
    check_consistency(m, events, g)?;
    if config.step_cap == 0 {
        return Err(Error::Infeasible("step cap must be at least 1".into()));
    }
    let samplers: Vec<WeightedIndex<f64>> = (0..m.len())
        .map(|v| WeightedIndex::new(m.probabilities(v)).expect("validated distribution"))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut pick = ChaCha8Rng::seed_from_u64(config.seed);
    pick.set_stream(SELECTION_STREAM);

    let mut assignment: Vec<usize> = samplers.iter().map(|s| s.sample(&mut rng)).collect();
    let mut scratch = Vec::new();
    let mut violated: BTreeSet<VertexId> = events
        .iter()
        .filter(|e| e.holds(&assignment, &mut scratch))
        .map(|e| e.id)
        .collect();
    let mut steps = Vec::new();
    let mut terminated = true;
    while !violated.is_empty() {
        if steps.len() == config.step_cap {
            terminated = false;
            break;
        }
        let x = match config.rule {
            SelectionRule::LowestIndex => *violated.first().expect("nonempty"),
            SelectionRule::UniformRandom => {
                let k = pick.gen_range(0..violated.len());
                *violated.iter().nth(k).expect("in range")
            }
        };
        steps.push(x);
        for &v in &events[x].vbl {
            assignment[v] = samplers[v].sample(&mut rng);
        }
        for y in std::iter::once(x).chain(g.neighbors(x).iter().copied()) {
            if events[y].holds(&assignment, &mut scratch) {
                violated.insert(y);
            } else {
                violated.remove(&y);
            }
        }
    }
    let mut counts: BTreeMap<VertexId, usize> = (0..events.len()).map(|x| (x, 0)).collect();
    for &x in &steps {
        *counts.get_mut(&x).expect("event id") += 1;
    }
    Ok(ExecutionLog {
        seed: config.seed,
        rule: config.rule,
        steps,
        terminated,
        counts,
        assignment,
    })
}

/// Per-event resampling counts over a range of seeds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub runs: usize,
    pub all_terminated: bool,
    pub mean: Vec<f64>,
    pub std_err: Vec<f64>,
    pub max_steps: usize,
}

/// Runs one independent execution per seed in parallel and merges the
/// counts in seed order.
pub fn run_batch(
    m: &VariableModel,
    events: &[EventSpec],
    g: &DependencyGraph,
    seeds: Range<u64>,
    config: &MtConfig,
) -> Result<BatchSummary> {
    check_consistency(m, events, g)?;
    let per_run: Vec<(Vec<usize>, bool, usize)> = seeds
        .into_par_iter()
        .map(|seed| {
            let log = run_mt(m, events, g, &MtConfig { seed, ..*config })?;
            let counts = (0..events.len()).map(|x| log.count(x)).collect();
            Ok((counts, log.terminated, log.len()))
        })
        .collect::<Result<_>>()?;
    Ok(summarize(events.len(), &per_run))
}

fn summarize(n_events: usize, per_run: &[(Vec<usize>, bool, usize)]) -> BatchSummary {
    let runs = per_run.len();
    let mut mean = vec![0.0; n_events];
    let mut sq = vec![0.0; n_events];
    for (counts, _, _) in per_run {
        for (x, &c) in counts.iter().enumerate() {
            mean[x] += c as f64;
            sq[x] += (c * c) as f64;
        }
    }
    let r = runs.max(1) as f64;
    let std_err = mean
        .iter_mut()
        .zip(&sq)
        .map(|(m, &s)| {
            *m /= r;
            let var = if runs > 1 { (s - r * *m * *m) / (r - 1.0) } else { 0.0 };
            (var.max(0.0) / r).sqrt()
        })
        .collect();
    BatchSummary {
        runs,
        all_terminated: per_run.iter().all(|(_, t, _)| *t),
        mean,
        std_err,
        max_steps: per_run.iter().map(|(_, _, s)| *s).max().unwrap_or(0),
    }
}

/// Which vertex of maximal depth receives the next child when several are
/// incompatible with the incoming label.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieBreak {
    /// Largest natural label (drawn lowest).
    #[default]
    Youngest,
    /// Smallest natural label. The result need not be a Penrose tree.
    Oldest,
}

/// A plane rooted tree together with an event label per vertex, both in the
/// tree's natural labeling. Written as `x(y()z())`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WitnessTree {
    tree: PlaneRootedTree,
    labels: Vec<VertexId>,
}

impl WitnessTree {
    pub fn new(tree: PlaneRootedTree, labels: Vec<VertexId>) -> Result<Self> {
        if labels.len() != tree.len() {
            return Err(Error::LengthMismatch {
                expected: tree.len(),
                got: labels.len(),
            });
        }
        Ok(WitnessTree { tree, labels })
    }

    pub fn tree(&self) -> &PlaneRootedTree {
        &self.tree
    }

    pub fn labels(&self) -> &[VertexId] {
        &self.labels
    }

    pub fn root_label(&self) -> VertexId {
        self.labels[0]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Good-labeling check: labels are vertices of `g`, each child label is
    /// incompatible with its parent's, and sibling labels strictly increase.
    pub fn validate(&self, g: &DependencyGraph) -> Result<()> {
        for &x in &self.labels {
            g.check_vertex(x)?;
        }
        for v in 0..self.tree.len() {
            let kids = self.tree.children(v);
            for &c in kids {
                if g.compatible(self.labels[v], self.labels[c]) {
                    return Err(Error::InvalidWitnessTree(format!(
                        "child label {} is compatible with parent label {}",
                        self.labels[c], self.labels[v]
                    )));
                }
            }
            if kids.windows(2).any(|w| self.labels[w[0]] >= self.labels[w[1]]) {
                return Err(Error::InvalidWitnessTree(format!(
                    "children of vertex {v} are not in increasing label order"
                )));
            }
        }
        Ok(())
    }

    /// `Π_v p_{σ(v)}`.
    pub fn weight(&self, p: &[f64]) -> f64 {
        self.labels.iter().map(|&x| p[x]).product()
    }

    fn write_subtree(&self, v: usize, out: &mut String) {
        out.push_str(&self.labels[v].to_string());
        out.push('(');
        for &c in self.tree.children(v) {
            self.write_subtree(c, out);
        }
        out.push(')');
    }
}

impl fmt::Display for WitnessTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write_subtree(0, &mut s);
        f.write_str(&s)
    }
}

impl FromStr for WitnessTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bytes = s.trim().as_bytes();
        let mut kids: Vec<Vec<usize>> = Vec::new();
        let mut names: Vec<VertexId> = Vec::new();
        let mut pos = 0;
        let bad = |msg: &str| Error::InvalidWitnessTree(format!("cannot parse {s:?}: {msg}"));
        // iterative descent over "label(children)"
        let mut stack: Vec<usize> = Vec::new();
        loop {
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            if start == pos {
                return Err(bad("expected a label"));
            }
            let label: VertexId = s.trim()[start..pos].parse().map_err(|_| bad("label too large"))?;
            if pos >= bytes.len() || bytes[pos] != b'(' {
                return Err(bad("expected '('"));
            }
            pos += 1;
            let id = names.len();
            names.push(label);
            kids.push(Vec::new());
            if let Some(&parent) = stack.last() {
                kids[parent].push(id);
            }
            stack.push(id);
            while pos < bytes.len() && bytes[pos] == b')' {
                pos += 1;
                stack.pop();
                if stack.is_empty() {
                    break;
                }
            }
            if stack.is_empty() {
                break;
            }
        }
        if pos != bytes.len() {
            return Err(bad("trailing input"));
        }
        let (tree, natural) = PlaneRootedTree::from_ordered_children(&kids, 0)?;
        let mut labels = vec![0; names.len()];
        for (id, &nat) in natural.iter().enumerate() {
            labels[nat] = names[id];
        }
        WitnessTree::new(tree, labels)
    }
}

impl Serialize for WitnessTree {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for WitnessTree {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

struct GrowingTree {
    label: Vec<VertexId>,
    depth: Vec<usize>,
    kids: Vec<Vec<usize>>,
}

impl GrowingTree {
    /// Position of every vertex in breadth-first order (the natural label).
    fn natural(&self) -> Vec<usize> {
        let mut rank = vec![0; self.label.len()];
        let mut queue = std::collections::VecDeque::from([0usize]);
        let mut next = 0;
        while let Some(v) = queue.pop_front() {
            rank[v] = next;
            next += 1;
            queue.extend(self.kids[v].iter().copied());
        }
        rank
    }
}

/// The witness tree `τ(s)` of step `s` (1-based): root labeled `C(s)`, and
/// for `i = s-1, .., 1` a child labeled `C(i)` attached to the deepest vertex
/// whose label is incompatible with `C(i)`, ties broken by `tiebreak`.
/// Steps whose label is compatible with every current label are skipped.
pub fn witness_tree(
    log: &ExecutionLog,
    s: usize,
    g: &DependencyGraph,
    tiebreak: TieBreak,
) -> Result<WitnessTree> {
    let root = log.step(s)?;
    g.check_vertex(root)?;
    let mut t = GrowingTree {
        label: vec![root],
        depth: vec![0],
        kids: vec![Vec::new()],
    };
    for i in (1..s).rev() {
        let c = log.steps[i - 1];
        g.check_vertex(c)?;
        let mut best_depth = None;
        let mut candidates = Vec::new();
        for v in 0..t.label.len() {
            if g.compatible(t.label[v], c) {
                continue;
            }
            match best_depth {
                Some(d) if t.depth[v] < d => {}
                Some(d) if t.depth[v] == d => candidates.push(v),
                _ => {
                    best_depth = Some(t.depth[v]);
                    candidates.clear();
                    candidates.push(v);
                }
            }
        }
        let Some(d) = best_depth else { continue };
        let parent = if candidates.len() == 1 {
            candidates[0]
        } else {
            let rank = t.natural();
            let by_rank = candidates.iter().copied();
            match tiebreak {
                TieBreak::Youngest => by_rank.max_by_key(|&v| rank[v]),
                TieBreak::Oldest => by_rank.min_by_key(|&v| rank[v]),
            }
            .expect("nonempty")
        };
        let id = t.label.len();
        t.label.push(c);
        t.depth.push(d + 1);
        t.kids.push(Vec::new());
        let at = t.kids[parent].partition_point(|&k| t.label[k] < c);
        t.kids[parent].insert(at, id);
    }
    let (tree, natural) = PlaneRootedTree::from_ordered_children(&t.kids, 0)?;
    let mut labels = vec![0; t.label.len()];
    for (id, &nat) in natural.iter().enumerate() {
        labels[nat] = t.label[id];
    }
    WitnessTree::new(tree, labels)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessEntry {
    pub step: usize,
    pub tree: WitnessTree,
    pub penrose: bool,
    pub weight: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct WitnessStats {
    pub entries: Vec<WitnessEntry>,
    /// Distinct trees seen per root label.
    pub distinct_per_root: BTreeMap<VertexId, usize>,
    pub all_penrose: bool,
    /// No two sampled steps with equal root label share a tree.
    pub all_distinct: bool,
}

/// Witness trees (youngest tie-break) for the sampled steps, each with its
/// Penrose verdict and weight `Π_v p_{σ(v)}`.
pub fn collect_witness_stats(
    log: &ExecutionLog,
    g: &DependencyGraph,
    sample: &[usize],
    p: &[f64],
) -> Result<WitnessStats> {
    let mut stats = WitnessStats {
        all_penrose: true,
        all_distinct: true,
        ..Default::default()
    };
    let mut seen: BTreeMap<VertexId, BTreeSet<String>> = BTreeMap::new();
    for &s in sample {
        let tree = witness_tree(log, s, g, TieBreak::Youngest)?;
        let penrose = is_penrose_witness(&tree, g)?;
        stats.all_penrose &= penrose;
        if !seen.entry(tree.root_label()).or_default().insert(tree.to_string()) {
            stats.all_distinct = false;
        }
        stats.entries.push(WitnessEntry {
            step: s,
            weight: tree.weight(p),
            tree,
            penrose,
        });
    }
    stats.distinct_per_root = seen.into_iter().map(|(x, set)| (x, set.len())).collect();
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coin() -> (VariableModel, Vec<EventSpec>, DependencyGraph) {
        let m = VariableModel::fair_bits(1);
        let heads: Predicate = Arc::new(|v: &[usize]| v[0] == 1);
        let e = EventSpec::with_exact_probability(0, vec![0], heads, &m).unwrap();
        (m, vec![e], DependencyGraph::edgeless(1))
    }

    fn log_of(steps: Vec<usize>) -> ExecutionLog {
        ExecutionLog {
            seed: 0,
            rule: SelectionRule::LowestIndex,
            steps,
            terminated: true,
            counts: BTreeMap::new(),
            assignment: vec![],
        }
    }

    #[test]
    fn exact_probability_examples() {
        let (m, events, _) = coin();
        assert_eq!(events[0].p, 0.5);
        let m3 = VariableModel::fair_bits(3);
        let clause: Predicate = Arc::new(|v: &[usize]| v.iter().all(|&b| b == 0));
        let e = EventSpec::new(0, vec![0, 1, 2], clause, 0.0);
        assert_eq!(exact_event_probability(&e, &m3).unwrap(), 0.125);
        let never: Predicate = Arc::new(|_: &[usize]| false);
        let e = EventSpec::new(0, vec![0], never, 0.0);
        assert_eq!(exact_event_probability(&e, &m).unwrap(), 0.0);
        let big = VariableModel::fair_bits(21);
        let e = EventSpec::new(0, (0..21).collect(), Arc::new(|_: &[usize]| true), 0.0);
        assert!(matches!(exact_event_probability(&e, &big), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn model_validation() {
        assert!(VariableModel::new(vec![vec![0.3, 0.7]]).is_ok());
        assert!(VariableModel::new(vec![vec![0.3, 0.6]]).is_err());
        assert!(VariableModel::new(vec![vec![]]).is_err());
        assert!(VariableModel::new(vec![vec![-0.1, 1.1]]).is_err());
    }

    #[test]
    fn impossible_events_give_empty_log() {
        let m = VariableModel::fair_bits(2);
        let never: Predicate = Arc::new(|_: &[usize]| false);
        let events = vec![
            EventSpec::new(0, vec![0, 1], never.clone(), 0.0),
            EventSpec::new(1, vec![1], never, 0.0),
        ];
        let g = DependencyGraph::path(2);
        let log = run_mt(&m, &events, &g, &MtConfig::default()).unwrap();
        assert!(log.terminated && log.is_empty());
    }

    #[test]
    fn inconsistent_graph_rejected() {
        let m = VariableModel::fair_bits(1);
        let p: Predicate = Arc::new(|v: &[usize]| v[0] == 0);
        let events = vec![EventSpec::new(0, vec![0], p.clone(), 0.5), EventSpec::new(1, vec![0], p, 0.5)];
        let g = DependencyGraph::edgeless(2);
        assert!(matches!(run_mt(&m, &events, &g, &MtConfig::default()), Err(Error::Inconsistent(_))));
    }

    #[test]
    fn cap_exhaustion_is_flagged() {
        let m = VariableModel::fair_bits(1);
        let always: Predicate = Arc::new(|_: &[usize]| true);
        let events = vec![EventSpec::new(0, vec![0], always, 1.0)];
        let cfg = MtConfig { step_cap: 17, ..MtConfig::default() };
        let log = run_mt(&m, &events, &DependencyGraph::edgeless(1), &cfg).unwrap();
        assert!(!log.terminated);
        assert_eq!(log.len(), 17);
        assert_eq!(log.count(0), 17);
    }

    #[test]
    fn runs_are_deterministic_and_logged_events_were_violated() {
        let (m, events, g) = coin();
        for seed in 0..50 {
            let cfg = MtConfig::with_seed(seed);
            let a = run_mt(&m, &events, &g, &cfg).unwrap();
            let b = run_mt(&m, &events, &g, &cfg).unwrap();
            assert_eq!(a, b);
            assert!(a.terminated);
            assert_eq!(a.assignment, vec![0]);
        }
    }

    #[test]
    fn witness_tree_examples() {
        let g = DependencyGraph::path(2);
        let t = witness_tree(&log_of(vec![1]), 1, &g, TieBreak::Youngest).unwrap();
        assert_eq!(t.to_string(), "1()");
        let t = witness_tree(&log_of(vec![0, 0]), 2, &g, TieBreak::Youngest).unwrap();
        assert_eq!(t.to_string(), "0(0())");
        let two = DependencyGraph::edgeless(2);
        let t = witness_tree(&log_of(vec![1, 0]), 2, &two, TieBreak::Youngest).unwrap();
        assert_eq!(t.to_string(), "0()");
        assert!(matches!(
            witness_tree(&log_of(vec![1]), 2, &g, TieBreak::Youngest),
            Err(Error::StepOutOfRange { .. })
        ));
        assert!(witness_tree(&log_of(vec![1]), 0, &g, TieBreak::Youngest).is_err());
    }

    #[test]
    fn witness_tree_tiebreak() {
        // star: 0 adjacent to 1, 2, 3; 3 also adjacent to 1 and 2
        let g = DependencyGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)]).unwrap();
        // root 0, then 2 and 1 become children, then 3 can hang below 1 or 2
        let log = log_of(vec![3, 1, 2, 0]);
        let young = witness_tree(&log, 4, &g, TieBreak::Youngest).unwrap();
        let old = witness_tree(&log, 4, &g, TieBreak::Oldest).unwrap();
        assert_eq!(young.to_string(), "0(1()2(3()))");
        assert_eq!(old.to_string(), "0(1(3())2())");
        young.validate(&g).unwrap();
        old.validate(&g).unwrap();
    }

    #[test]
    fn witness_tree_text_round_trip() {
        for s in ["0()", "3(1()2())", "0(1(3())2())", "12(0(5()7())9())"] {
            let t: WitnessTree = s.parse().unwrap();
            assert_eq!(t.to_string(), s);
            let j = serde_json::to_string(&t).unwrap();
            assert_eq!(serde_json::from_str::<WitnessTree>(&j).unwrap(), t);
        }
        for bad in ["", "()", "1(", "1()2()", "a()", "1)"] {
            assert!(bad.parse::<WitnessTree>().is_err(), "{bad}");
        }
    }

    #[test]
    fn validate_rejects_bad_labelings() {
        let g = DependencyGraph::path(3);
        assert!("0(2())".parse::<WitnessTree>().unwrap().validate(&g).is_err());
        assert!("1(2()0())".parse::<WitnessTree>().unwrap().validate(&g).is_err());
        assert!("1(0()2())".parse::<WitnessTree>().unwrap().validate(&g).is_ok());
        assert!("1(1()1())".parse::<WitnessTree>().unwrap().validate(&g).is_err());
    }

    #[test]
    fn stats_on_empty_and_coin_logs() {
        let g = DependencyGraph::edgeless(1);
        let s = collect_witness_stats(&log_of(vec![]), &g, &[], &[0.5]).unwrap();
        assert!(s.entries.is_empty() && s.all_penrose && s.all_distinct);
        let log = log_of(vec![0, 0, 0]);
        let s = collect_witness_stats(&log, &g, &[1, 2, 3], &[0.5]).unwrap();
        assert!(s.all_penrose && s.all_distinct);
        assert_eq!(s.distinct_per_root[&0], 3);
        assert_eq!(s.entries[2].tree.to_string(), "0(0(0()))");
        assert_eq!(s.entries[2].weight, 0.125);
    }

    #[test]
    fn log_json_shape() {
        let (m, events, g) = coin();
        let log = run_mt(&m, &events, &g, &MtConfig::with_seed(3)).unwrap();
        let j = serde_json::to_value(&log).unwrap();
        for key in ["seed", "rule", "steps", "terminated", "counts", "assignment"] {
            assert!(j.get(key).is_some(), "{key}");
        }
        assert_eq!(j["rule"], "lowest_index");
        let back: ExecutionLog = serde_json::from_value(j).unwrap();
        assert_eq!(back, log);
    }
}
