// The Ursell function of a tuple computed from connected subgraphs and
// from Penrose trees, plus the partition scheme behind the equality.

use mtcluster::penrose::{penrose_trees, ursell_brute, ursell_penrose, verify_partition_scheme, VertexTuple};
use mtcluster::DependencyGraph;

pub fn run_example() -> mtcluster::Result<()> {
    let g = DependencyGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 2)])?;
    for xs in [vec![0, 1, 2], vec![0, 2, 2, 3], vec![1, 1, 0, 3, 2]] {
        let t = VertexTuple(xs.clone());
        let brute = ursell_brute(&t, &g)?;
        let penrose = ursell_penrose(&t, &g)?;
        let scheme = verify_partition_scheme(&t, &g)?;
        println!(
            "{xs:?}: phi = {brute} (penrose {penrose}), {} connected subgraphs, {} spanning trees, {} Penrose",
            scheme.connected_subgraphs, scheme.spanning_trees, scheme.penrose_trees
        );
        assert_eq!(brute, penrose);
        assert!(scheme.holds);
    }
    let tri = DependencyGraph::complete(3);
    let trees = penrose_trees(&VertexTuple(vec![0, 1, 2]), &tri)?;
    println!("triangle tuple: Penrose trees {:?}", trees.iter().map(|t| t.edges()).collect::<Vec<_>>());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example failed");
}
