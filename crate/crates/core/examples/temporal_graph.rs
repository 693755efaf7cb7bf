//! Ingest a follow stream and query snapshots of it.

use reciprocity_delay::{DynamicDigraph, Result};

const EDGES: &str = "\
# src\tdst\tday
alice\tbob\t0
carol\tbob\t1
bob\talice\t3
carol\talice\t4
alice\tbob\t9
dave\tcarol\t6
carol\tdave\t6
";

fn main() -> Result<()> {
    let g = DynamicDigraph::from_reader(EDGES.as_bytes())?;
    // the second alice -> bob record is a later duplicate and is ignored
    println!("{} nodes, {} edges, last day {:?}", g.node_count(), g.edge_count(), g.max_day());

    let (alice, bob, carol) = (g.node("alice")?, g.node("bob")?, g.node("carol")?);
    for t in [0, 3, 6] {
        let (n, e) = g.snapshot_counts(t);
        println!(
            "day {t}: n={n} e={e} indeg(bob)={} outdeg(carol)={} common followees(alice, carol)={}",
            g.indegree_at(bob, t),
            g.outdegree_at(carol, t),
            g.common_followees_at(alice, carol, t),
        );
    }
    println!("bob joined on day {}", g.join_day(bob));
    Ok(())
}
