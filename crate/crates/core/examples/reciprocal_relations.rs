//! Extract follow-back relations and the network growth series.

use reciprocity_delay::analytics::{extract_reciprocal_relations, growth_series, reciprocity_rate_series};
use reciprocity_delay::synth::{generate, SynthConfig};
use reciprocity_delay::{DynamicDigraph, Result};

fn main() -> Result<()> {
    let out = generate(&SynthConfig { users: 200, horizon: 90, censor_day: 89, seed: 1, ..Default::default() })?;
    let g = DynamicDigraph::from_edges(&out.edges)?;
    let relations = extract_reciprocal_relations(&g);
    println!("{} edges, {} reciprocal relations", g.edge_count(), relations.len());
    for r in relations.iter().take(5) {
        println!("  {} -> {} on day {}, followed back on day {} (delay {})", g.name(r.u), g.name(r.v), r.t1, r.t2, r.delay);
    }

    let growth = growth_series(&g);
    let rate = reciprocity_rate_series(&g);
    println!("t,nodes,edges,reciprocal_pairs,rate");
    for (row, (_, r)) in growth.iter().zip(&rate).step_by(15) {
        println!("{},{},{},{},{r:.4}", row.t, row.nodes, row.edges, row.reciprocal);
    }
    Ok(())
}
