//! Exhaustive oracle sweeps over small dependency graphs: the Ursell/Penrose
//! identity, the partition scheme, tree counts, and Penrose witness trees.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::depgraph::DependencyGraph;
use crate::error::Result;
use crate::mt_engine::{run_mt, witness_tree, EventSpec, MtConfig, Predicate, SelectionRule, TieBreak, VariableModel};
use crate::penrose::{is_penrose_witness, ursell_brute, ursell_penrose_with, verify_partition_scheme, PenroseRule, VertexTuple};
use crate::trees::{
    catalan, enumerate_labeled_trees, enumerate_plane_trees, inverse_sibling_factorials, map_m, map_theta,
    preimage_size_of_m,
};

pub const SCHEMA_VERSION: u32 = 1;

/// One representative of every isomorphism class of graphs on exactly `n`
/// vertices (`n ≤ 6`), in order of their canonical adjacency code.
pub fn graph_classes(n: usize) -> Vec<DependencyGraph> {
    assert!(n <= 6, "graph_classes supports n ≤ 6");
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let perms = permutations(n);
    let mut codes = BTreeSet::new();
    for mask in 0u32..(1 << pairs.len()) {
        let edges: Vec<(usize, usize)> =
            (0..pairs.len()).filter(|&e| mask >> e & 1 == 1).map(|e| pairs[e]).collect();
        let canon = perms
            .iter()
            .map(|p| {
                let mut code = 0u32;
                for &(a, b) in &edges {
                    let (x, y) = (p[a].min(p[b]), p[a].max(p[b]));
                    code |= 1 << pairs.iter().position(|&q| q == (x, y)).expect("pair");
                }
                code
            })
            .min()
            .unwrap_or(0);
        codes.insert(canon);
    }
    codes
        .into_iter()
        .map(|code| {
            let edges: Vec<_> = (0..pairs.len()).filter(|&e| code >> e & 1 == 1).map(|e| pairs[e]).collect();
            DependencyGraph::from_edges(n, &edges).expect("valid edges")
        })
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for k in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                (0..=k).map(move |i| {
                    let mut q = p.clone();
                    q.insert(i, k);
                    q
                })
            })
            .collect();
    }
    out
}

/// `count` graphs with `1..=max_n` vertices, each with its own edge density.
pub fn random_graphs(count: usize, max_n: usize, seed: u64) -> Vec<DependencyGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=max_n);
            let density: f64 = rng.gen();
            let edges: Vec<_> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|_| rng.gen_bool(density))
                .collect();
            DependencyGraph::from_edges(n, &edges).expect("valid edges")
        })
        .collect()
}

/// The default sweep: all classes on five vertices plus 200 random graphs on
/// at most five vertices.
pub fn default_sweep_graphs(seed: u64) -> Vec<DependencyGraph> {
    let mut gs = graph_classes(5);
    gs.extend(random_graphs(200, 5, seed));
    gs
}

/// Every tuple `(x_0, .., x_n)` over `0..n_vertices` with `n ≤ max_order`.
pub fn all_tuples(n_vertices: usize, max_order: usize) -> Vec<VertexTuple> {
    let mut out = Vec::new();
    for n in 0..=max_order {
        let len = n + 1;
        let total = n_vertices.pow(len as u32);
        for code in 0..total {
            let mut xs = vec![0; len];
            let mut c = code;
            for slot in xs.iter_mut().rev() {
                *slot = c % n_vertices;
                c /= n_vertices;
            }
            out.push(VertexTuple(xs));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyResult {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub pass: bool,
    pub counterexample: Option<Value>,
}

impl FamilyResult {
    fn new(name: &str, cases: usize, failures: Vec<Value>) -> Self {
        FamilyResult {
            name: name.to_string(),
            cases,
            failures: failures.len(),
            pass: failures.is_empty(),
            counterexample: failures.into_iter().next(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub seed: u64,
    pub mutate: bool,
    pub families: Vec<FamilyResult>,
    pub all_pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub max_order: usize,
    /// Drop the uncle rule from the Penrose condition.
    pub mutate: bool,
    pub witness_runs: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            max_order: 4,
            mutate: false,
            witness_runs: 200,
        }
    }
}

fn graph_json(g: &DependencyGraph) -> Value {
    json!({ "vertices": g.len(), "edges": g.edges() })
}

/// Ursell function computed both ways on every tuple of every graph.
pub fn ursell_family(graphs: &[DependencyGraph], max_order: usize, rule: PenroseRule) -> Result<FamilyResult> {
    let results: Vec<(usize, Vec<Value>)> = graphs
        .par_iter()
        .map(|g| {
            let mut failures = Vec::new();
            let tuples = all_tuples(g.len(), max_order);
            for t in &tuples {
                let brute = ursell_brute(t, g)?;
                let penrose = ursell_penrose_with(t, g, rule)?;
                if brute != penrose {
                    failures.push(json!({
                        "graph": graph_json(g), "tuple": t.0, "brute": brute, "penrose": penrose
                    }));
                }
            }
            Ok((tuples.len(), failures))
        })
        .collect::<Result<_>>()?;
    Ok(merge("ursell_identity", results))
}

/// The partition scheme, including `q` constant on every interval.
pub fn partition_family(graphs: &[DependencyGraph], max_order: usize) -> Result<FamilyResult> {
    let results: Vec<(usize, Vec<Value>)> = graphs
        .par_iter()
        .map(|g| {
            let mut failures = Vec::new();
            let tuples = all_tuples(g.len(), max_order);
            for t in &tuples {
                let c = verify_partition_scheme(t, g)?;
                if !c.holds {
                    failures.push(json!({
                        "graph": graph_json(g), "tuple": t.0, "detail": c.counterexample
                    }));
                }
            }
            Ok((tuples.len(), failures))
        })
        .collect::<Result<_>>()?;
    Ok(merge("partition_scheme", results))
}

fn merge(name: &str, results: Vec<(usize, Vec<Value>)>) -> FamilyResult {
    let cases = results.iter().map(|(c, _)| c).sum();
    FamilyResult::new(name, cases, results.into_iter().flat_map(|(_, f)| f).collect())
}

/// Plane/labeled/unlabeled counts, Catalan and Cayley numbers, and the
/// preimage law of `m`.
pub fn tree_family() -> Result<FamilyResult> {
    let mut cases = 0;
    let mut failures = Vec::new();
    let mut expect = |what: String, got: u64, want: u64| {
        cases += 1;
        if got != want {
            failures.push(json!({ "check": what, "got": got, "expected": want }));
        }
    };
    let plane3 = enumerate_plane_trees(3)?;
    expect("plane trees, 4 vertices".into(), plane3.len() as u64, 5);
    expect("labeled trees, 4 vertices".into(), enumerate_labeled_trees(3)?.len() as u64, 16);
    let shapes: BTreeSet<String> = plane3.iter().map(|t| t.unordered_canonical()).collect();
    expect("unlabeled rooted trees, 4 vertices".into(), shapes.len() as u64, 4);
    for n in 0..=8 {
        expect(format!("catalan {n}"), enumerate_plane_trees(n)?.len() as u64, catalan(n));
    }
    for n in 1..=6usize {
        let fact: f64 = (1..=n).map(|i| i as f64).product();
        let sum: f64 = enumerate_plane_trees(n)?
            .iter()
            .map(|t| fact * inverse_sibling_factorials(t))
            .sum();
        expect(format!("cayley sum {n}"), sum.round() as u64, ((n + 1) as u64).pow(n as u32 - 1));
    }
    for n in 0..=6 {
        let trees = enumerate_plane_trees(n)?;
        let identity = trees.iter().filter(|t| map_m(&map_theta(t)) == **t).count();
        expect(format!("m after theta is identity, {n}"), identity as u64, trees.len() as u64);
    }
    for n in 0..=5 {
        let mut counts = std::collections::BTreeMap::new();
        for theta in enumerate_labeled_trees(n)? {
            *counts.entry(map_m(&theta).to_parens()).or_insert(0u64) += 1;
        }
        for t in enumerate_plane_trees(n)? {
            let got = counts.get(&t.to_parens()).copied().unwrap_or(0);
            expect(format!("preimage of {t}"), got, preimage_size_of_m(&t)?);
        }
    }
    Ok(FamilyResult::new("tree_combinatorics", cases, failures))
}

/// A random variable-model instance on few events with mixed widths, built
/// so the algorithm terminates quickly.
pub fn random_small_instance(rng: &mut ChaCha8Rng) -> (VariableModel, Vec<EventSpec>, DependencyGraph) {
    let n_vars = rng.gen_range(2..=6);
    let n_events = rng.gen_range(1..=6);
    let model = VariableModel::fair_bits(n_vars);
    let events: Vec<EventSpec> = (0..n_events)
        .map(|x| {
            let k = rng.gen_range(1..=n_vars.min(3));
            let vbl = rand::seq::index::sample(rng, n_vars, k).into_vec();
            let target: usize = rng.gen_range(0..1 << k);
            let predicate: Predicate = Arc::new(move |vals: &[usize]| {
                vals.iter().enumerate().all(|(i, &v)| v == (target >> i) & 1)
            });
            EventSpec::new(x, vbl, predicate, 0.5f64.powi(k as i32))
        })
        .collect();
    let vbl: Vec<Vec<usize>> = events.iter().map(|e| e.vbl.clone()).collect();
    let graph = DependencyGraph::from_variable_sets(&vbl).expect("nonempty vbl");
    (model, events, graph)
}

/// Witness trees of every step of seeded runs, both selection rules.
pub fn witness_family(runs: usize, seed: u64) -> Result<FamilyResult> {
    let results: Vec<(usize, Vec<Value>)> = (0..runs as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9).wrapping_add(i));
            let (m, events, g) = random_small_instance(&mut rng);
            let mut cases = 0;
            let mut failures = Vec::new();
            for rule in [SelectionRule::LowestIndex, SelectionRule::UniformRandom] {
                let cfg = MtConfig { seed: i, step_cap: 300, rule };
                let log = run_mt(&m, &events, &g, &cfg)?;
                for s in 1..=log.len() {
                    let tau = witness_tree(&log, s, &g, TieBreak::Youngest)?;
                    cases += 1;
                    if !is_penrose_witness(&tau, &g)? {
                        failures.push(json!({
                            "graph": graph_json(&g), "steps": log.steps, "step": s, "tree": tau.to_string()
                        }));
                    }
                }
            }
            Ok((cases, failures))
        })
        .collect::<Result<_>>()?;
    Ok(merge("witness_trees_penrose", results))
}

/// Runs every family. With `mutate`, the Ursell family uses the Penrose
/// condition without its uncle rule and is expected to fail.
pub fn verify_suite(config: &VerifyConfig) -> Result<VerifyReport> {
    let graphs = default_sweep_graphs(config.seed);
    let rule = if config.mutate {
        PenroseRule::WithoutUncleRule
    } else {
        PenroseRule::Standard
    };
    let families = vec![
        ursell_family(&graphs, config.max_order, rule)?,
        partition_family(&graphs, config.max_order)?,
        tree_family()?,
        witness_family(config.witness_runs, config.seed)?,
    ];
    Ok(VerifyReport {
        schema_version: SCHEMA_VERSION,
        seed: config.seed,
        mutate: config.mutate,
        all_pass: families.iter().all(|f| f.pass),
        families,
    })
}
