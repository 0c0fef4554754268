// Random 3-SAT solved by resampling, with the per-clause bound on the
// expected number of resamplings next to Monte Carlo averages.

use mtcluster::{
    auto_mu, check_fp, mt_bounds, random_ksat, run_batch, run_mt, sat_to_lll, Criterion, MtConfig,
};

pub fn run_example() -> mtcluster::Result<()> {
    let f = random_ksat(40, 16, 3, 3)?;
    let inst = sat_to_lll(&f)?;
    let search = auto_mu(&inst.graph, &inst.p, Criterion::Fp)?;
    let certified = search.converged && check_fp(&inst.graph, &inst.p, &search.mu)?.all_pass;
    println!("40 variables, 16 clauses, max overlap degree {}, FP certified: {certified}", inst.graph.max_degree());

    let log = run_mt(&inst.model, &inst.events, &inst.graph, &MtConfig::with_seed(1))?;
    assert!(log.terminated && f.is_satisfied_by(&log.assignment));
    println!("seed 1: satisfied after {} resamplings", log.len());

    let bounds = mt_bounds(&inst.graph, &inst.p)?;
    let batch = run_batch(&inst.model, &inst.events, &inst.graph, 0..2000, &MtConfig::default())?;
    for x in 0..4 {
        let t = bounds.per_vertex[x].t_bound.unwrap_or(f64::NAN);
        println!("clause {x}: mean resamplings {:.4} +- {:.4}, bound {t:.4}", batch.mean[x], batch.std_err[x]);
    }
    println!("total bound {:.4}", bounds.total_bound.unwrap_or(f64::NAN));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example failed");
}
