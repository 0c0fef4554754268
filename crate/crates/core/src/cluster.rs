//! Hard-core lattice gas on a dependency graph: partition function,
//! pressure, the one-point function `Π_x`, its Penrose-tree series, and the
//! sufficient criteria for the cluster expansion to converge.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::depgraph::{DependencyGraph, VertexId, VertexSubset, EXACT_CAP};
use crate::error::{Error, Result};
use crate::penrose::for_each_penrose_labeling;
use crate::trees::{enumerate_plane_trees, inverse_sibling_factorials, PLANE_TREE_CAP};

/// Subset count above which the exhaustive Shearer check refuses to run.
pub const EXHAUSTIVE_CAP: usize = 24;
pub const DEFAULT_GUARD: f64 = 1e-12;
pub const MU_SEARCH_ITERATIONS: usize = 1000;

/// Per-vertex weights: activities `w`, radii `ρ`, probabilities `p`, or `μ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ActivityVector(pub Vec<f64>);

impl ActivityVector {
    pub fn new(values: Vec<f64>) -> Self {
        ActivityVector(values)
    }

    pub fn uniform(n: usize, value: f64) -> Self {
        ActivityVector(vec![value; n])
    }

    pub fn zeros(n: usize) -> Self {
        Self::uniform(n, 0.0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn negated(&self) -> Self {
        ActivityVector(self.0.iter().map(|v| -v).collect())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        ActivityVector(self.0.iter().map(|v| v * factor).collect())
    }

    fn check_len(&self, g: &DependencyGraph) -> Result<()> {
        if self.len() == g.len() {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected: g.len(),
                got: self.len(),
            })
        }
    }

    fn check_finite(&self) -> Result<()> {
        match self.0.iter().position(|v| !v.is_finite()) {
            Some(x) => Err(Error::InvalidActivity {
                vertex: x,
                value: self.0[x],
            }),
            None => Ok(()),
        }
    }

    fn check_nonnegative(&self) -> Result<()> {
        self.check_finite()?;
        match self.0.iter().position(|&v| v < 0.0) {
            Some(x) => Err(Error::InvalidActivity {
                vertex: x,
                value: self.0[x],
            }),
            None => Ok(()),
        }
    }
}

impl std::ops::Index<VertexId> for ActivityVector {
    type Output = f64;

    fn index(&self, x: VertexId) -> &f64 {
        &self.0[x]
    }
}

/// Memoized evaluation of `Ξ_S(w)` through the deletion recursion
/// `Ξ_S = Ξ_{S∖x} + w_x Ξ_{S∖Γ*(x)}`, `x` the lowest vertex of `S`.
///
/// The memo belongs to one evaluator; share results by sharing the evaluator
/// behind a lock, not by cloning.
pub struct PartitionFunction<'g> {
    graph: &'g DependencyGraph,
    masks: &'g [u64],
    w: Vec<f64>,
    memo: HashMap<u64, f64>,
}

impl<'g> PartitionFunction<'g> {
    pub fn new(graph: &'g DependencyGraph, w: &ActivityVector) -> Result<Self> {
        let masks = graph.require_exact()?;
        w.check_len(graph)?;
        w.check_finite()?;
        Ok(PartitionFunction {
            graph,
            masks,
            w: w.0.clone(),
            memo: HashMap::new(),
        })
    }

    pub fn xi(&mut self, s: VertexSubset) -> f64 {
        if s.is_empty() {
            return 1.0;
        }
        if let Some(&v) = self.memo.get(&s.0) {
            return v;
        }
        let x = s.first().expect("nonempty");
        let without = self.xi(s.remove(x));
        let value = if self.w[x] == 0.0 {
            without
        } else {
            without + self.w[x] * self.xi(VertexSubset(s.0 & !self.masks[x]))
        };
        self.memo.insert(s.0, value);
        value
    }

    pub fn xi_all(&mut self) -> f64 {
        self.xi(self.graph.all())
    }

    /// `Π_x = Ξ_{X∖Γ*(x)} / Ξ_X`.
    pub fn pi(&mut self, x: VertexId) -> Result<f64> {
        self.graph.check_vertex(x)?;
        let all = self.graph.all();
        let denominator = self.xi(all);
        if denominator == 0.0 {
            return Err(Error::VanishingPartitionFunction);
        }
        Ok(self.xi(all.minus(VertexSubset(self.masks[x]))) / denominator)
    }

    /// Subsets evaluated so far, with their values.
    pub fn evaluated(&self) -> impl Iterator<Item = (VertexSubset, f64)> + '_ {
        self.memo.iter().map(|(&s, &v)| (VertexSubset(s), v))
    }
}

pub fn partition_function(
    g: &DependencyGraph,
    w: &ActivityVector,
    domain: VertexSubset,
) -> Result<f64> {
    let mut pf = PartitionFunction::new(g, w)?;
    if !domain.is_subset_of(g.all()) {
        let bad = domain.minus(g.all()).first().unwrap_or(0);
        return Err(Error::VertexOutOfRange {
            vertex: bad,
            n: g.len(),
        });
    }
    Ok(pf.xi(domain))
}

/// `(1/|X|) log Ξ_X(w)`.
pub fn pressure(g: &DependencyGraph, w: &ActivityVector) -> Result<f64> {
    if g.is_empty() {
        return Err(Error::NoEvents);
    }
    let xi = PartitionFunction::new(g, w)?.xi_all();
    if xi <= 0.0 {
        return Err(Error::OutsideZeroFreeRegion { value: xi });
    }
    Ok(xi.ln() / g.len() as f64)
}

pub fn pi_exact(g: &DependencyGraph, x0: VertexId, w: &ActivityVector) -> Result<f64> {
    PartitionFunction::new(g, w)?.pi(x0)
}

/// Partial sums `S_0 ≤ S_1 ≤ .. ≤ S_{n_max}` of `Π_{x0}(-ρ)` written as a sum
/// over plane rooted trees with the natural labeling, each tree weighted by
/// `Π_v 1/s_v!` and summed over all Penrose labelings.
pub fn pi_series_truncated(
    g: &DependencyGraph,
    x0: VertexId,
    rho: &ActivityVector,
    n_max: usize,
) -> Result<Vec<f64>> {
    series(g, x0, rho, n_max, false)
}

/// The same partial sums computed over Penrose witness trees (sibling labels
/// increasing) with unit weight. Equals [`pi_series_truncated`] order by order.
pub fn witness_series_truncated(
    g: &DependencyGraph,
    x0: VertexId,
    rho: &ActivityVector,
    n_max: usize,
) -> Result<Vec<f64>> {
    series(g, x0, rho, n_max, true)
}

fn series(
    g: &DependencyGraph,
    x0: VertexId,
    rho: &ActivityVector,
    n_max: usize,
    ordered: bool,
) -> Result<Vec<f64>> {
    g.check_vertex(x0)?;
    rho.check_len(g)?;
    rho.check_nonnegative()?;
    if n_max > PLANE_TREE_CAP {
        return Err(Error::CapExceeded {
            what: "series order",
            got: n_max,
            cap: PLANE_TREE_CAP,
        });
    }
    let mut sums = Vec::with_capacity(n_max + 1);
    let mut acc = 0.0;
    for n in 0..=n_max {
        let mut term = 0.0;
        for t in enumerate_plane_trees(n)? {
            let weight = if ordered { 1.0 } else { inverse_sibling_factorials(&t) };
            let mut tree_sum = 0.0;
            for_each_penrose_labeling(&t, x0, g, ordered, |xs| {
                tree_sum += xs.iter().map(|&x| rho[x]).product::<f64>();
            })?;
            term += weight * tree_sum;
        }
        acc += term;
        sums.push(acc);
    }
    Ok(sums)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    Dobrushin,
    Fp,
    MtBounds,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexVerdict {
    pub id: VertexId,
    pub pass: bool,
    pub slack: f64,
    pub t_bound: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub criterion: Criterion,
    pub per_vertex: Vec<VertexVerdict>,
    pub all_pass: bool,
    pub total_bound: Option<f64>,
    pub xi_at_minus_p: Option<f64>,
    /// `|X| · |P(-p)|`, reported next to the total for comparison.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pressure_bound: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<f64>>,
}

fn criterion_report(
    criterion: Criterion,
    p: &ActivityVector,
    mu: &ActivityVector,
    thresholds: Vec<f64>,
) -> ConvergenceReport {
    let per_vertex: Vec<VertexVerdict> = thresholds
        .iter()
        .enumerate()
        .map(|(x, &th)| VertexVerdict {
            id: x,
            pass: p[x] <= th,
            slack: th - p[x],
            t_bound: None,
        })
        .collect();
    let all_pass = per_vertex.iter().all(|v| v.pass);
    let mut report = ConvergenceReport {
        criterion,
        per_vertex,
        all_pass,
        total_bound: None,
        xi_at_minus_p: None,
        pressure_bound: None,
        mu: Some(mu.0.clone()),
    };
    if all_pass {
        for v in &mut report.per_vertex {
            v.t_bound = Some(mu[v.id]);
        }
        report.total_bound = Some(mu.0.iter().sum());
    }
    report
}

fn check_inputs(g: &DependencyGraph, p: &ActivityVector, mu: &ActivityVector) -> Result<()> {
    p.check_len(g)?;
    mu.check_len(g)?;
    p.check_nonnegative()?;
    mu.check_nonnegative()
}

/// `Π_{y∈Γ*(x)} (1 + μ_y)`.
pub fn dobrushin_denominator(g: &DependencyGraph, mu: &[f64], x: VertexId) -> f64 {
    (1.0 + mu[x]) * g.neighbors(x).iter().map(|&y| 1.0 + mu[y]).product::<f64>()
}

/// `Σ_{R ⊆ Γ*(x), R independent} Π_{y∈R} μ_y`.
pub fn fp_denominator(g: &DependencyGraph, mu: &[f64], x: VertexId) -> Result<f64> {
    let hood = g.closed_neighborhood(x);
    if hood.len() > EXACT_CAP {
        return Err(Error::GraphTooLarge {
            n: hood.len(),
            cap: EXACT_CAP,
        });
    }
    let local = g.induced(&hood);
    let w = ActivityVector(hood.iter().map(|&y| mu[y]).collect());
    Ok(PartitionFunction::new(&local, &w)?.xi_all())
}

/// Passes at `x` iff `p_x ≤ μ_x / Π_{y∈Γ*(x)}(1 + μ_y)`.
pub fn check_dobrushin(
    g: &DependencyGraph,
    p: &ActivityVector,
    mu: &ActivityVector,
) -> Result<ConvergenceReport> {
    check_inputs(g, p, mu)?;
    let th = (0..g.len())
        .map(|x| mu[x] / dobrushin_denominator(g, &mu.0, x))
        .collect();
    Ok(criterion_report(Criterion::Dobrushin, p, mu, th))
}

/// Passes at `x` iff `p_x ≤ μ_x / Σ_{R⊆Γ*(x) indep} Π_{y∈R} μ_y`.
pub fn check_fp(
    g: &DependencyGraph,
    p: &ActivityVector,
    mu: &ActivityVector,
) -> Result<ConvergenceReport> {
    check_inputs(g, p, mu)?;
    let th = (0..g.len())
        .map(|x| Ok(mu[x] / fp_denominator(g, &mu.0, x)?))
        .collect::<Result<Vec<f64>>>()?;
    Ok(criterion_report(Criterion::Fp, p, mu, th))
}

/// Result of the fixed-point search for `μ`.
#[derive(Clone, Debug, PartialEq)]
pub struct MuSearch {
    pub mu: ActivityVector,
    pub converged: bool,
    pub iterations: usize,
}

/// Iterates `μ ← p ⊙ D(μ)` from `μ = p`, `D` being the criterion's
/// denominator, and then inflates the limit slightly so that the
/// (non-strict) criterion holds at it. `converged` is false on divergence.
pub fn auto_mu(
    g: &DependencyGraph,
    p: &ActivityVector,
    criterion: Criterion,
) -> Result<MuSearch> {
    p.check_len(g)?;
    p.check_nonnegative()?;
    let denom = |mu: &[f64], x: VertexId| -> Result<f64> {
        match criterion {
            Criterion::Dobrushin => Ok(dobrushin_denominator(g, mu, x)),
            _ => fp_denominator(g, mu, x),
        }
    };
    let passes = |mu: &[f64]| -> Result<bool> {
        for x in 0..g.len() {
            if p[x] > mu[x] / denom(mu, x)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let mut mu = p.0.clone();
    let mut iterations = 0;
    let mut settled = false;
    while iterations < MU_SEARCH_ITERATIONS {
        iterations += 1;
        let next = (0..g.len())
            .map(|x| Ok(p[x] * denom(&mu, x)?))
            .collect::<Result<Vec<f64>>>()?;
        let delta = next
            .iter()
            .zip(&mu)
            .map(|(a, b)| (a - b).abs() / a.abs().max(1e-300))
            .fold(0.0, f64::max);
        mu = next;
        if mu.iter().any(|v| !v.is_finite() || *v > 1e12) {
            break;
        }
        if delta < 1e-13 {
            settled = true;
            break;
        }
    }
    if settled {
        for inflate in [0.0, 1e-10, 1e-8, 1e-6, 1e-4, 1e-2] {
            let candidate: Vec<f64> = mu.iter().map(|v| v * (1.0 + inflate)).collect();
            if passes(&candidate)? {
                return Ok(MuSearch {
                    mu: ActivityVector(candidate),
                    converged: true,
                    iterations,
                });
            }
        }
    }
    Ok(MuSearch {
        mu: ActivityVector(mu),
        converged: false,
        iterations,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShearerOptions {
    /// Check every subset of `X` rather than those the recursion visits.
    pub exhaustive: bool,
    /// Values in `(0, guard]` count as positive but mark the result marginal.
    pub guard: f64,
}

impl Default for ShearerOptions {
    fn default() -> Self {
        ShearerOptions {
            exhaustive: false,
            guard: DEFAULT_GUARD,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShearerReport {
    pub in_region: bool,
    pub marginal: bool,
    pub exhaustive: bool,
    pub subsets_checked: usize,
    /// Smallest violating subset (by size, then bitmask).
    pub witness: Option<VertexSubset>,
    pub xi_at_minus_p: f64,
}

/// Membership of `p` in the convergence region, checked as positivity of
/// `Ξ_Y(-p)` over the subsets `Y` reached by the deletion recursion from `X`
/// (or over all subsets in exhaustive mode).
pub fn check_shearer_region(
    g: &DependencyGraph,
    p: &ActivityVector,
    options: ShearerOptions,
) -> Result<ShearerReport> {
    p.check_len(g)?;
    p.check_nonnegative()?;
    let w = p.negated();
    let values: Vec<(VertexSubset, f64)> = if options.exhaustive {
        if g.len() > EXHAUSTIVE_CAP {
            return Err(Error::GraphTooLarge {
                n: g.len(),
                cap: EXHAUSTIVE_CAP,
            });
        }
        all_subset_values(g, &w)
    } else {
        let mut pf = PartitionFunction::new(g, &w)?;
        pf.xi_all();
        let mut v: Vec<_> = pf.evaluated().collect();
        v.push((VertexSubset::EMPTY, 1.0));
        v
    };
    let xi_all = values
        .iter()
        .find(|(s, _)| *s == g.all())
        .map(|&(_, v)| v)
        .unwrap_or(1.0);
    let witness = values
        .iter()
        .filter(|(_, v)| *v <= 0.0)
        .map(|&(s, _)| s)
        .min_by_key(|s| (s.len(), s.0));
    let marginal = values.iter().any(|&(_, v)| v > 0.0 && v <= options.guard);
    Ok(ShearerReport {
        in_region: witness.is_none(),
        marginal,
        exhaustive: options.exhaustive,
        subsets_checked: values.len(),
        witness,
        xi_at_minus_p: xi_all,
    })
}

fn all_subset_values(g: &DependencyGraph, w: &ActivityVector) -> Vec<(VertexSubset, f64)> {
    let n = g.len();
    let mut xi = vec![0.0f64; 1 << n];
    xi[0] = 1.0;
    for s in 1usize..(1 << n) {
        let x = s.trailing_zeros() as usize;
        let rest = s & !(1 << x);
        let outside = s & !(g.closed_mask(x).0 as usize);
        xi[s] = xi[rest] + w[x] * xi[outside];
    }
    xi.into_iter()
        .enumerate()
        .map(|(s, v)| (VertexSubset(s as u64), v))
        .collect()
}

/// Expected-resampling bounds `T_x = p_x Π_x(-p)` and their total, valid when
/// `p` lies in the convergence region. The per-vertex `slack` is
/// `Ξ_X(-p)`, the distance of the full partition function from zero.
pub fn mt_bounds(g: &DependencyGraph, p: &ActivityVector) -> Result<ConvergenceReport> {
    let region = check_shearer_region(g, p, ShearerOptions::default())?;
    if let Some(witness) = region.witness {
        return Err(Error::OutsideRegion { witness });
    }
    let mut pf = PartitionFunction::new(g, &p.negated())?;
    let xi = pf.xi_all();
    let per_vertex = (0..g.len())
        .map(|x| {
            Ok(VertexVerdict {
                id: x,
                pass: true,
                slack: xi,
                t_bound: Some(p[x] * pf.pi(x)?),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let total = per_vertex.iter().filter_map(|v| v.t_bound).sum();
    Ok(ConvergenceReport {
        criterion: Criterion::MtBounds,
        per_vertex,
        all_pass: true,
        total_bound: Some(total),
        xi_at_minus_p: Some(xi),
        pressure_bound: Some(xi.ln().abs()),
        mu: None,
    })
}
