// Partial sums of the plane-tree series for `Π_x(-ρ)` climbing to the
// exact ratio on a path of three events.

use mtcluster::{pi_exact, pi_series_truncated, witness_series_truncated, ActivityVector, DependencyGraph};

pub fn run_example() -> mtcluster::Result<()> {
    let g = DependencyGraph::path(3);
    let rho = ActivityVector::new(vec![0.1, 0.15, 0.1]);
    let exact = pi_exact(&g, 1, &rho.negated())?;
    let sums = pi_series_truncated(&g, 1, &rho, 8)?;
    let witness = witness_series_truncated(&g, 1, &rho, 8)?;
    for (n, (s, w)) in sums.iter().zip(&witness).enumerate() {
        println!("n = {n}: S_n = {s:.10}  (witness form {w:.10})");
        assert!((s - w).abs() < 1e-12);
    }
    println!("exact Pi_1(-rho) = {exact:.10}");
    assert!(sums.windows(2).all(|w| w[0] <= w[1]));
    assert!(exact - sums[8] < 1e-4);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example failed");
}
