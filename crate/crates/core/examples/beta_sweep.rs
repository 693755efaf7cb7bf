//! Network-lasso weight sweep on one split.

use reciprocity_delay::analytics::extract_reciprocal_relations;
use reciprocity_delay::dprr::DprrConfig;
use reciprocity_delay::eval::sweep::sweep_table;
use reciprocity_delay::eval::{beta_sweep_split, DEFAULT_BETA_GRID};
use reciprocity_delay::features::{build_dataset, FeatureConfig};
use reciprocity_delay::synth::{generate, SynthConfig};
use reciprocity_delay::{DynamicDigraph, Result};

fn main() -> Result<()> {
    let g = DynamicDigraph::from_edges(&generate(&SynthConfig { seed: 7, ..Default::default() })?.edges)?;
    let relations = extract_reciprocal_relations(&g);
    let pool = build_dataset(&g, &relations, &FeatureConfig { standardize: false, ..Default::default() })?;
    let cfg = DprrConfig::default();
    let rows = beta_sweep_split(&pool, 2000, 50, 1, &cfg, &DEFAULT_BETA_GRID)?;
    print!("{}", sweep_table(&rows).to_csv());
    Ok(())
}
