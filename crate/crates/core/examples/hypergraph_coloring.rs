// Proper 2-coloring of a sparse 4-uniform hypergraph by resampling.

use mtcluster::instances::{hypergraph_coloring_to_lll, parse_hypergraph};
use mtcluster::{check_shearer_region, mt_bounds, run_mt, MtConfig, ShearerOptions};

pub fn run_example() -> mtcluster::Result<()> {
    let h = parse_hypergraph("h 10 5\n0 1 2 3\n3 4 5 6\n6 7 8 9\n9 0 1 5\n2 4 7 8\n")?;
    let inst = hypergraph_coloring_to_lll(&h)?;
    let region = check_shearer_region(&inst.graph, &inst.p, ShearerOptions::default())?;
    println!("5 edges of size 4, p = {:?}, in region: {}", inst.p.as_slice(), region.in_region);
    let bounds = mt_bounds(&inst.graph, &inst.p)?;
    let log = run_mt(&inst.model, &inst.events, &inst.graph, &MtConfig::with_seed(2))?;
    println!(
        "coloring {:?} after {} resamplings (expected at most {:.3})",
        log.assignment,
        log.len(),
        bounds.total_bound.unwrap_or(f64::NAN)
    );
    for e in &h.edges {
        assert!(e.iter().any(|&v| log.assignment[v] != log.assignment[e[0]]));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example failed");
}
