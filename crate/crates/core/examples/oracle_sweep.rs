// A reduced oracle sweep, then the same sweep with the uncle rule removed
// to show the suite catches it.

use mtcluster::penrose::PenroseRule;
use mtcluster::sweep::{graph_classes, partition_family, tree_family, ursell_family};

pub fn run_example() -> mtcluster::Result<()> {
    let graphs: Vec<_> = (1..=4).flat_map(graph_classes).collect();
    let ursell = ursell_family(&graphs, 3, PenroseRule::Standard)?;
    let scheme = partition_family(&graphs, 3)?;
    let trees = tree_family()?;
    for f in [&ursell, &scheme, &trees] {
        println!("{}: {} cases, pass {}", f.name, f.cases, f.pass);
        assert!(f.pass);
    }
    let broken = ursell_family(&graphs, 3, PenroseRule::WithoutUncleRule)?;
    println!("without the uncle rule: {} failures, e.g. {}", broken.failures, broken.counterexample.clone().unwrap_or_default());
    assert!(!broken.pass);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example failed");
}
