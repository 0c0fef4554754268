//! Concrete encodings into (variable model, events, dependency graph):
//! k-SAT from DIMACS, random k-SAT, and hypergraph 2-coloring. Also reads a
//! bare dependency-graph format carrying only probabilities.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cluster::ActivityVector;
use crate::depgraph::DependencyGraph;
use crate::error::{Error, Result};
use crate::mt_engine::{EventSpec, Predicate, VariableModel};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnfFormula {
    pub n_vars: usize,
    /// Nonzero signed literals, variables numbered from 1.
    pub clauses: Vec<Vec<i64>>,
}

impl CnfFormula {
    pub fn new(n_vars: usize, clauses: Vec<Vec<i64>>) -> Result<Self> {
        for (i, c) in clauses.iter().enumerate() {
            if c.is_empty() {
                return Err(Error::Parse { line: 0, msg: format!("clause {i} is empty") });
            }
            for &l in c {
                if l == 0 || l.unsigned_abs() as usize > n_vars {
                    return Err(Error::Parse {
                        line: 0,
                        msg: format!("literal {l} out of range in clause {i}"),
                    });
                }
            }
        }
        Ok(CnfFormula { n_vars, clauses })
    }

    pub fn is_tautology(clause: &[i64]) -> bool {
        clause.iter().any(|&l| clause.contains(&-l))
    }

    /// `assignment[v]` is the value (0 or 1) of variable `v + 1`.
    pub fn is_satisfied_by(&self, assignment: &[usize]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter()
                .any(|&l| (assignment[l.unsigned_abs() as usize - 1] == 1) == (l > 0))
        })
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.n_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                s.push_str(&l.to_string());
                s.push(' ');
            }
            s.push_str("0\n");
        }
        s
    }
}

/// Reads DIMACS CNF. Clauses may span lines; a `%` line ends the input.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<i64> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(Error::Parse { line: line_no, msg: "duplicate header".into() });
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let parsed = match parts.as_slice() {
                ["p", "cnf", v, c] => v.parse().ok().zip(c.parse().ok()),
                _ => None,
            };
            header = Some(parsed.ok_or_else(|| Error::Parse {
                line: line_no,
                msg: format!("malformed header {line:?}"),
            })?);
            continue;
        }
        let Some((n_vars, _)) = header else {
            return Err(Error::Parse { line: line_no, msg: "missing header".into() });
        };
        for tok in line.split_whitespace() {
            let l: i64 = tok.parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad literal {tok:?}"),
            })?;
            if l == 0 {
                if current.is_empty() {
                    return Err(Error::Parse { line: line_no, msg: "empty clause".into() });
                }
                clauses.push(std::mem::take(&mut current));
                continue;
            }
            if l.unsigned_abs() as usize > n_vars {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("literal {l} out of range for {n_vars} variables"),
                });
            }
            current.push(l);
        }
    }
    let Some((n_vars, n_clauses)) = header else {
        return Err(Error::Parse { line: 0, msg: "missing header".into() });
    };
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != n_clauses {
        return Err(Error::Parse {
            line: 0,
            msg: format!("header declares {n_clauses} clauses, found {}", clauses.len()),
        });
    }
    for (i, c) in clauses.iter().enumerate() {
        if CnfFormula::is_tautology(c) {
            log::warn!("clause {i} is a tautology (kept; its event never occurs)");
        }
    }
    CnfFormula::new(n_vars, clauses)
}

/// A problem in the variable framework: fair or arbitrary finite
/// variables, one event per constraint, the overlap graph, and `p`.
#[derive(Clone, Debug)]
pub struct LllInstance {
    pub model: VariableModel,
    pub events: Vec<EventSpec>,
    pub graph: DependencyGraph,
    pub p: ActivityVector,
}

impl LllInstance {
    /// Assembles an instance, building the graph from variable overlaps.
    pub fn from_events(model: VariableModel, events: Vec<EventSpec>) -> Result<Self> {
        let vbl: Vec<Vec<usize>> = events.iter().map(|e| e.vbl.clone()).collect();
        let graph = DependencyGraph::from_variable_sets(&vbl)?;
        let p = ActivityVector::new(events.iter().map(|e| e.p).collect());
        Ok(LllInstance { model, events, graph, p })
    }
}

/// Event `x`: clause `x` is falsified. Variables are fair bits.
pub fn sat_to_lll(f: &CnfFormula) -> Result<LllInstance> {
    let events = f
        .clauses
        .iter()
        .enumerate()
        .map(|(x, clause)| {
            let mut vbl: Vec<usize> = clause.iter().map(|l| l.unsigned_abs() as usize - 1).collect();
            vbl.sort_unstable();
            vbl.dedup();
            // (position in vbl, value that makes the literal false)
            let falsifying: Vec<(usize, usize)> = clause
                .iter()
                .map(|&l| {
                    let var = l.unsigned_abs() as usize - 1;
                    (vbl.binary_search(&var).expect("present"), usize::from(l < 0))
                })
                .collect();
            let p = if CnfFormula::is_tautology(clause) {
                0.0
            } else {
                0.5f64.powi(vbl.len() as i32)
            };
            let predicate: Predicate =
                Arc::new(move |vals: &[usize]| falsifying.iter().all(|&(i, b)| vals[i] == b));
            EventSpec::new(x, vbl, predicate, p)
        })
        .collect();
    LllInstance::from_events(VariableModel::fair_bits(f.n_vars), events)
}

/// `n_clauses` clauses, each on a uniform `k`-subset of the variables with
/// uniform signs. Duplicate clauses may occur.
pub fn random_ksat(n_vars: usize, n_clauses: usize, k: usize, seed: u64) -> Result<CnfFormula> {
    if k == 0 || k > n_vars {
        return Err(Error::Infeasible(format!("clause width {k} with {n_vars} variables")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let clauses = (0..n_clauses)
        .map(|_| {
            let mut vars = rand::seq::index::sample(&mut rng, n_vars, k).into_vec();
            vars.sort_unstable();
            vars.into_iter()
                .map(|v| {
                    let l = v as i64 + 1;
                    if rng.gen_bool(0.5) { l } else { -l }
                })
                .collect()
        })
        .collect();
    CnfFormula::new(n_vars, clauses)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypergraph {
    pub n_vertices: usize,
    /// Vertex ids are 0-based.
    pub edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    pub fn new(n_vertices: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        for (i, e) in edges.iter().enumerate() {
            if e.len() < 2 {
                return Err(Error::Parse { line: 0, msg: format!("edge {i} has fewer than 2 vertices") });
            }
            if let Some(&v) = e.iter().find(|&&v| v >= n_vertices) {
                return Err(Error::Parse { line: 0, msg: format!("edge {i}: vertex {v} out of range") });
            }
            let mut s = e.clone();
            s.sort_unstable();
            s.dedup();
            if s.len() != e.len() {
                return Err(Error::Parse { line: 0, msg: format!("edge {i} repeats a vertex") });
            }
        }
        Ok(Hypergraph { n_vertices, edges })
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('c') && !l.starts_with('#'))
}

fn parse_numbers<T: std::str::FromStr>(line_no: usize, line: &str) -> Result<Vec<T>> {
    line.split_whitespace()
        .map(|t| {
            t.parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad number {t:?}"),
            })
        })
        .collect()
}

fn parse_counts(tag: &str, lines: &mut dyn Iterator<Item = (usize, &str)>) -> Result<(usize, usize)> {
    let (line_no, line) = lines
        .next()
        .ok_or(Error::Parse { line: 0, msg: "missing header".into() })?;
    let parts: Vec<&str> = line.split_whitespace().collect();
    match parts.as_slice() {
        [t, a, b] if *t == tag => match (a.parse(), b.parse()) {
            (Ok(a), Ok(b)) => Ok((a, b)),
            _ => Err(Error::Parse { line: line_no, msg: format!("malformed header {line:?}") }),
        },
        _ => Err(Error::Parse { line: line_no, msg: format!("malformed header {line:?}") }),
    }
}

/// Format: `h V E`, then one line of space-separated vertex ids per edge.
pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    let mut lines = content_lines(text);
    let (n, m) = parse_counts("h", &mut lines)?;
    let edges = lines
        .map(|(no, l)| parse_numbers::<usize>(no, l))
        .collect::<Result<Vec<_>>>()?;
    if edges.len() != m {
        return Err(Error::Parse {
            line: 0,
            msg: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    Hypergraph::new(n, edges)
}

/// Event `x`: edge `x` is monochromatic under a uniform 2-coloring.
pub fn hypergraph_coloring_to_lll(h: &Hypergraph) -> Result<LllInstance> {
    let mono: Predicate = Arc::new(|vals: &[usize]| vals.windows(2).all(|w| w[0] == w[1]));
    let events = h
        .edges
        .iter()
        .enumerate()
        .map(|(x, e)| EventSpec::new(x, e.clone(), mono.clone(), 0.5f64.powi(e.len() as i32 - 1)))
        .collect();
    LllInstance::from_events(VariableModel::fair_bits(h.n_vertices), events)
}

/// Format: `g V E`, one line of `V` probabilities, then `E` lines `u v`
/// (0-based). Describes an abstract dependency graph with no variables.
pub fn parse_graph_instance(text: &str) -> Result<(DependencyGraph, ActivityVector)> {
    let mut lines = content_lines(text);
    let (n, m) = parse_counts("g", &mut lines)?;
    let (no, line) = lines
        .next()
        .ok_or(Error::Parse { line: 0, msg: "missing probability line".into() })?;
    let p: Vec<f64> = parse_numbers(no, line)?;
    if p.len() != n {
        return Err(Error::Parse { line: no, msg: format!("expected {n} probabilities, got {}", p.len()) });
    }
    if let Some(q) = p.iter().find(|q| !(0.0..=1.0).contains(*q)) {
        return Err(Error::Parse { line: no, msg: format!("probability {q} outside [0, 1]") });
    }
    let mut edges = Vec::with_capacity(m);
    for (no, line) in lines {
        match parse_numbers::<usize>(no, line)?.as_slice() {
            &[u, v] => edges.push((u, v)),
            _ => return Err(Error::Parse { line: no, msg: "expected an edge 'u v'".into() }),
        }
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: 0,
            msg: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    Ok((DependencyGraph::from_edges(n, &edges)?, ActivityVector::new(p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mt_engine::exact_event_probability;

    #[test]
    fn dimacs_examples() {
        let f = parse_dimacs("p cnf 2 1\n1 -2 0").unwrap();
        assert_eq!(f.n_vars, 2);
        assert_eq!(f.clauses, vec![vec![1, -2]]);
        assert!(parse_dimacs("p cnf 2 2\n1 -2 0\n").is_err());
        let e = parse_dimacs("c nothing\nc here\n").unwrap_err();
        assert!(e.to_string().contains("missing header"));
        assert!(parse_dimacs("p cnf x 1\n1 0").unwrap_err().to_string().contains("malformed header"));
        assert!(parse_dimacs("p cnf 2 1\n3 0").unwrap_err().to_string().contains("out of range"));
        assert!(parse_dimacs("1 2 0\np cnf 2 1\n").unwrap_err().to_string().contains("missing header"));
    }

    #[test]
    fn dimacs_multiline_and_tautology() {
        let f = parse_dimacs("c x\np cnf 3 2\n1 2\n3 0 -1 1 0\n%\n0\n").unwrap();
        assert_eq!(f.clauses, vec![vec![1, 2, 3], vec![-1, 1]]);
        let inst = sat_to_lll(&f).unwrap();
        assert_eq!(inst.p.as_slice(), &[0.125, 0.0]);
        assert_eq!(exact_event_probability(&inst.events[1], &inst.model).unwrap(), 0.0);
        assert_eq!(inst.events[1].vbl, vec![0]);
        assert_eq!(parse_dimacs(&f.to_dimacs()).unwrap(), f);
    }

    #[test]
    fn sat_to_lll_examples() {
        let one = sat_to_lll(&parse_dimacs("p cnf 3 1\n1 2 -3 0").unwrap()).unwrap();
        assert_eq!(one.p.as_slice(), &[0.125]);
        let disjoint = sat_to_lll(&parse_dimacs("p cnf 4 2\n1 2 0\n3 4 0").unwrap()).unwrap();
        assert_eq!(disjoint.graph.edge_count(), 0);
        let shared = sat_to_lll(&parse_dimacs("p cnf 3 2\n1 2 0\n-2 3 0").unwrap()).unwrap();
        assert_eq!(shared.graph.edges(), vec![(0, 1)]);
    }

    #[test]
    fn clause_predicate_matches_formula() {
        let f = random_ksat(6, 8, 3, 5).unwrap();
        let inst = sat_to_lll(&f).unwrap();
        let mut scratch = Vec::new();
        for bits in 0..64usize {
            let a: Vec<usize> = (0..6).map(|v| (bits >> v) & 1).collect();
            let none_violated = inst.events.iter().all(|e| !e.holds(&a, &mut scratch));
            assert_eq!(none_violated, f.is_satisfied_by(&a));
        }
    }

    #[test]
    fn generated_events_match_closed_forms() {
        for seed in 0..20 {
            let f = random_ksat(8, 10, 1 + (seed as usize % 5), seed).unwrap();
            let inst = sat_to_lll(&f).unwrap();
            for e in &inst.events {
                assert_eq!(exact_event_probability(e, &inst.model).unwrap(), e.p);
            }
            // independent double loop for the overlap graph
            for a in 0..f.clauses.len() {
                for b in a + 1..f.clauses.len() {
                    let share = f.clauses[a]
                        .iter()
                        .any(|l| f.clauses[b].iter().any(|m| m.abs() == l.abs()));
                    assert_eq!(share, inst.graph.is_adjacent(a, b));
                }
            }
        }
        let h = Hypergraph::new(6, vec![vec![0, 1, 2], vec![2, 3], vec![1, 3, 4, 5]]).unwrap();
        let inst = hypergraph_coloring_to_lll(&h).unwrap();
        for e in &inst.events {
            assert_eq!(exact_event_probability(e, &inst.model).unwrap(), e.p);
        }
    }

    #[test]
    fn random_ksat_examples() {
        let f = random_ksat(5, 1, 5, 1).unwrap();
        let mut vars: Vec<i64> = f.clauses[0].iter().map(|l| l.abs()).collect();
        vars.sort();
        assert_eq!(vars, vec![1, 2, 3, 4, 5]);
        assert_eq!(random_ksat(30, 20, 3, 9).unwrap(), random_ksat(30, 20, 3, 9).unwrap());
        assert_ne!(random_ksat(30, 20, 3, 9).unwrap(), random_ksat(30, 20, 3, 10).unwrap());
        assert!(matches!(random_ksat(2, 1, 3, 0), Err(Error::Infeasible(_))));
        let f = random_ksat(50, 30, 3, 7).unwrap();
        let inst = sat_to_lll(&f).unwrap();
        assert!(inst.graph.max_degree() < 30);
    }

    #[test]
    fn hypergraph_examples() {
        let h = parse_hypergraph("h 3 1\n0 1 2\n").unwrap();
        let inst = hypergraph_coloring_to_lll(&h).unwrap();
        assert_eq!(inst.p.as_slice(), &[0.25]);
        let h = parse_hypergraph("h 4 2\n0 1\n2 3\n").unwrap();
        assert_eq!(hypergraph_coloring_to_lll(&h).unwrap().graph.edge_count(), 0);
        let h = parse_hypergraph("h 3 2\n0 1\n1 2\n").unwrap();
        assert_eq!(hypergraph_coloring_to_lll(&h).unwrap().graph.edges(), vec![(0, 1)]);
        assert!(parse_hypergraph("h 3 1\n0 0\n").is_err());
        assert!(parse_hypergraph("h 3 1\n0 3\n").is_err());
        assert!(parse_hypergraph("h 3 2\n0 1\n").is_err());
        assert!(parse_hypergraph("").is_err());
    }

    #[test]
    fn graph_format() {
        let (g, p) = parse_graph_instance("g 3 3\n0.4 0.4 0.4\n0 1\n1 2\n0 2\n").unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(p.as_slice(), &[0.4; 3]);
        assert!(parse_graph_instance("g 2 0\n0.5\n").is_err());
        assert!(parse_graph_instance("g 2 0\n0.5 1.5\n").is_err());
        assert!(parse_graph_instance("g 2 1\n0.5 0.5\n0 2\n").is_err());
    }
}
