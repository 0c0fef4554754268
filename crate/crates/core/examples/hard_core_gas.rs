// Partition function, pressure and the one-point function of the hard-core
// gas on a 5-cycle, at positive activities and at `w = -p`.

use mtcluster::{partition_function, pi_exact, pressure, ActivityVector, DependencyGraph, PartitionFunction};

pub fn run_example() -> mtcluster::Result<()> {
    let g = DependencyGraph::cycle(5);
    let w = ActivityVector::uniform(5, 0.5);
    let xi = partition_function(&g, &w, g.all())?;
    println!("C5, w = 0.5: Xi = {xi:.6}, pressure = {:.6}", pressure(&g, &w)?);
    assert!((xi - (1.0 + 5.0 * 0.5 + 5.0 * 0.25)).abs() < 1e-12);

    let p = ActivityVector::uniform(5, 0.2);
    let mut pf = PartitionFunction::new(&g, &p.negated())?;
    println!("C5, w = -0.2: Xi = {:.6}", pf.xi_all());
    for x in 0..g.len() {
        let pi = pf.pi(x)?;
        assert_eq!(pi, pi_exact(&g, x, &p.negated())?);
        println!("  Pi_{x}(-p) = {pi:.6}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example failed");
}
