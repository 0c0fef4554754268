// Witness trees read off an execution log, checked to be Penrose trees,
// under both tie-break rules.

use mtcluster::{collect_witness_stats, is_penrose_witness, random_ksat, run_mt, sat_to_lll, witness_tree};
use mtcluster::{MtConfig, SelectionRule, TieBreak};

pub fn run_example() -> mtcluster::Result<()> {
    let inst = sat_to_lll(&random_ksat(10, 24, 3, 11)?)?;
    let cfg = MtConfig { seed: 5, step_cap: 2000, rule: SelectionRule::UniformRandom };
    let log = run_mt(&inst.model, &inst.events, &inst.graph, &cfg)?;
    println!("{} resamplings, terminated {}", log.len(), log.terminated);
    for s in 1..=log.len().min(6) {
        let young = witness_tree(&log, s, &inst.graph, TieBreak::Youngest)?;
        let old = witness_tree(&log, s, &inst.graph, TieBreak::Oldest)?;
        println!("step {s}: {young}  (oldest tie-break {old})");
        assert!(is_penrose_witness(&young, &inst.graph)?);
    }
    let sample: Vec<usize> = (1..=log.len()).collect();
    let stats = collect_witness_stats(&log, &inst.graph, &sample, inst.p.as_slice())?;
    println!("all Penrose: {}, all distinct per root: {}", stats.all_penrose, stats.all_distinct);
    assert!(stats.all_penrose && stats.all_distinct);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example failed");
}
