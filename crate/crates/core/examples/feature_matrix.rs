//! Build the feature matrix of every follow-back and round-trip it through CSV.

use reciprocity_delay::analytics::extract_reciprocal_relations;
use reciprocity_delay::calendar::DEFAULT_ANCHOR;
use reciprocity_delay::features::{
    build_dataset, extract_features, read_dataset_csv, write_dataset_csv, DelayHistory, FeatureConfig,
    RelationQuery, FEATURE_NAMES,
};
use reciprocity_delay::synth::{generate, SynthConfig};
use reciprocity_delay::{DynamicDigraph, Result};

fn main() -> Result<()> {
    let g = DynamicDigraph::from_edges(&generate(&SynthConfig { users: 300, seed: 2, ..Default::default() })?.edges)?;
    let relations = extract_reciprocal_relations(&g);

    let history = DelayHistory::from_relations(&relations);
    let r = relations[relations.len() / 2];
    let x = extract_features(&g, &history, RelationQuery::from(&r), 4, 10.0, DEFAULT_ANCHOR)?;
    println!("{} -> {} on day {}:", g.name(r.u), g.name(r.v), r.t1);
    for (name, v) in FEATURE_NAMES.iter().zip(x.as_slice()) {
        println!("  {name:>22} {v}");
    }

    let ds = build_dataset(&g, &relations, &FeatureConfig::default())?;
    let s = ds.standardizer.as_ref().expect("standardized by default");
    println!("\n{} rows x {} columns, cold-start fill {:.3}", ds.len(), ds.dim(), ds.fill_value);
    println!("target indegree: mean {:.3}, std {:.3}", s.mean[8], s.std[8]);

    let mut buf = Vec::new();
    write_dataset_csv(&mut buf, &ds)?;
    let back = read_dataset_csv(buf.as_slice())?;
    assert_eq!(back.x, ds.x);
    println!("CSV round trip: {} bytes, identical rows", buf.len());
    Ok(())
}
