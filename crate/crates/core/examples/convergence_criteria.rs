// Dobrushin, FP and the exact region check on a star,
// with the weights μ found automatically.

use mtcluster::{
    auto_mu, check_dobrushin, check_fp, check_shearer_region, mt_bounds, ActivityVector, Criterion,
    DependencyGraph, ShearerOptions,
};

pub fn run_example() -> mtcluster::Result<()> {
    let star = DependencyGraph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)])?;
    for q in [0.05, 0.12, 0.2, 0.3] {
        let p = ActivityVector::uniform(5, q);
        let dob = auto_mu(&star, &p, Criterion::Dobrushin)?;
        let fp = auto_mu(&star, &p, Criterion::Fp)?;
        let d = dob.converged && check_dobrushin(&star, &p, &dob.mu)?.all_pass;
        let f = fp.converged && check_fp(&star, &p, &fp.mu)?.all_pass;
        let region = check_shearer_region(&star, &p, ShearerOptions::default())?;
        println!("p = {q}: dobrushin {d}, fp {f}, region {}", region.in_region);
        assert!(!d || f);
        assert!(!f || region.in_region);
        if region.in_region {
            let b = mt_bounds(&star, &p)?;
            println!("  expected resamplings <= {:.4}", b.total_bound.unwrap_or(f64::NAN));
        } else {
            println!("  smallest violating subset {:?}", region.witness);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example failed");
}
