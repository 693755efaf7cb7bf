//! Generate a follow stream with planted delays and check it against the truth.

use std::collections::HashMap;

use reciprocity_delay::analytics::extract_reciprocal_relations;
use reciprocity_delay::synth::{generate, SynthConfig};
use reciprocity_delay::{DynamicDigraph, Result};

fn main() -> Result<()> {
    let cfg = SynthConfig { users: 400, seed: 42, ..Default::default() };
    let out = generate(&cfg)?;
    let g = DynamicDigraph::from_edges(&out.edges)?;
    let relations = extract_reciprocal_relations(&g);
    println!("{} users, {} follows, {} planted follow-backs", g.node_count(), out.edges.len(), out.truth.len());

    let planted: HashMap<(&str, &str), u32> = out.truth.iter().map(|t| ((t.u.as_str(), t.v.as_str()), t.planted_delay)).collect();
    let matched = relations
        .iter()
        .filter(|r| planted.get(&(g.name(r.u), g.name(r.v))) == Some(&r.delay))
        .count();
    println!("{matched} of {} extracted relations carry their planted delay", relations.len());

    print!("{}", out.truth_table().to_csv().lines().take(6).collect::<Vec<_>>().join("\n"));
    println!();
    Ok(())
}
