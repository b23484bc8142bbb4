//! Maps a person in one family tree to the person in the same position
//! of another tree.

use gc_vsa::experiments::{analogy, FamilyTree, TreeSymbols};
use gc_vsa::GridConfig;

fn main() -> gc_vsa::Result<()> {
    let config = GridConfig::default().shared()?;
    let (a, b) = (FamilyTree::tree_a(), FamilyTree::tree_b());
    let symbols = TreeSymbols::random(&config, &[&a, &b], 0)?;

    for name in a.names() {
        let r = analogy(&a, &b, name, &symbols)?;
        println!(
            "{name:<10} -> {:<10} similarity {:.3}",
            r.answer, r.similarity
        );
    }

    let r = analogy(&a, &b, "Charles", &symbols)?;
    println!("\nprofile for Charles:");
    for (name, s) in &r.profile {
        println!("  {name:<10} {s:+.3}");
    }
    Ok(())
}
