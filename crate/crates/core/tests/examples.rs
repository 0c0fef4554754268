//! Every program in `examples/` runs to completion.

#[allow(dead_code)]
mod convergence_criteria {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/convergence_criteria.rs"));
}

#[allow(dead_code)]
mod dimacs_check {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/dimacs_check.rs"));
}

#[allow(dead_code)]
mod hard_core_gas {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/hard_core_gas.rs"));
}

#[allow(dead_code)]
mod hypergraph_coloring {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/hypergraph_coloring.rs"));
}

#[allow(dead_code)]
mod oracle_sweep {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/oracle_sweep.rs"));
}

#[allow(dead_code)]
mod penrose_identity {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/penrose_identity.rs"));
}

#[allow(dead_code)]
mod resample_ksat {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/resample_ksat.rs"));
}

#[allow(dead_code)]
mod tree_enumeration {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/tree_enumeration.rs"));
}

#[allow(dead_code)]
mod tree_series {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/tree_series.rs"));
}

#[allow(dead_code)]
mod witness_trees {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/witness_trees.rs"));
}

#[test]
fn convergence_criteria_example_runs() {
    convergence_criteria::run_example().expect("convergence_criteria example should run");
}

#[test]
fn dimacs_check_example_runs() {
    dimacs_check::run_example().expect("dimacs_check example should run");
}

#[test]
fn hard_core_gas_example_runs() {
    hard_core_gas::run_example().expect("hard_core_gas example should run");
}

#[test]
fn hypergraph_coloring_example_runs() {
    hypergraph_coloring::run_example().expect("hypergraph_coloring example should run");
}

#[test]
fn oracle_sweep_example_runs() {
    oracle_sweep::run_example().expect("oracle_sweep example should run");
}

#[test]
fn penrose_identity_example_runs() {
    penrose_identity::run_example().expect("penrose_identity example should run");
}

#[test]
fn resample_ksat_example_runs() {
    resample_ksat::run_example().expect("resample_ksat example should run");
}

#[test]
fn tree_enumeration_example_runs() {
    tree_enumeration::run_example().expect("tree_enumeration example should run");
}

#[test]
fn tree_series_example_runs() {
    tree_series::run_example().expect("tree_series example should run");
}

#[test]
fn witness_trees_example_runs() {
    witness_trees::run_example().expect("witness_trees example should run");
}
