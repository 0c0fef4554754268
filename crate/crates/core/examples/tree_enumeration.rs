// Plane and labeled rooted trees, and the map that forgets labels.

use std::collections::BTreeMap;

use mtcluster::trees::{catalan, enumerate_labeled_trees, enumerate_plane_trees, map_m, preimage_size_of_m};

pub fn run_example() -> mtcluster::Result<()> {
    for n in 0..=4 {
        let plane = enumerate_plane_trees(n)?;
        println!("n = {n}: {} plane trees (Catalan {})", plane.len(), catalan(n));
    }
    let mut fibers: BTreeMap<String, u64> = BTreeMap::new();
    for theta in enumerate_labeled_trees(3)? {
        *fibers.entry(map_m(&theta).to_parens()).or_default() += 1;
    }
    for t in enumerate_plane_trees(3)? {
        let got = fibers[&t.to_parens()];
        println!("  {t}: {got} labeled preimages");
        assert_eq!(got, preimage_size_of_m(&t)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example failed");
}
