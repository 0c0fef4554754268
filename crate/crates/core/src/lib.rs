//! Moser-Tardos resampling and the cluster expansion of the hard-core
//! lattice gas that bounds it.
//!
//! The crate is organized bottom-up:
//!
//! - [`depgraph`]: dependency graphs, compatibility, independent sets.
//! - [`trees`]: plane and labeled rooted trees and the maps between them.
//! - [`penrose`]: Penrose trees, Ursell coefficients, the partition scheme.
//! - [`cluster`]: partition function, pressure, `Π_x`, convergence criteria.
//! - [`mt_engine`]: the resampling algorithm, logs, witness trees.
//! - [`instances`]: k-SAT, random k-SAT, hypergraph 2-coloring.
//! - [`sweep`]: exhaustive oracle sweeps over small graphs.
//! - [`cli`]: the `check`, `run`, `verify`, `enumerate` commands.
//!
//! The `examples/` directory holds one runnable program per capability.

pub mod cli;
pub mod cluster;
pub mod depgraph;
pub mod error;
pub mod instances;
pub mod mt_engine;
pub mod penrose;
pub mod sweep;
pub mod trees;

pub use cluster::{
    auto_mu, check_dobrushin, check_fp, check_shearer_region, mt_bounds, partition_function, pi_exact,
    pi_series_truncated, pressure, witness_series_truncated, ActivityVector, ConvergenceReport, Criterion,
    PartitionFunction, ShearerOptions, ShearerReport,
};
pub use depgraph::{DependencyGraph, VertexId, VertexSubset};
pub use error::{Error, Result};
pub use instances::{
    hypergraph_coloring_to_lll, parse_dimacs, parse_hypergraph, random_ksat, sat_to_lll, CnfFormula, Hypergraph,
    LllInstance,
};
pub use mt_engine::{
    collect_witness_stats, exact_event_probability, run_batch, run_mt, witness_tree, EventSpec, ExecutionLog,
    MtConfig, SelectionRule, TieBreak, VariableModel, WitnessTree,
};
pub use penrose::{is_penrose_pair, is_penrose_witness, ursell_brute, ursell_penrose, verify_partition_scheme, VertexTuple};
pub use trees::{LabeledRootedTree, PlaneRootedTree};
