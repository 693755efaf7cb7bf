//! Compare all predictors over repeated random splits of a synthetic pool.

use reciprocity_delay::analytics::extract_reciprocal_relations;
use reciprocity_delay::eval::{run_benchmark, BenchmarkConfig};
use reciprocity_delay::features::{build_dataset, FeatureConfig};
use reciprocity_delay::synth::{generate, SynthConfig};
use reciprocity_delay::{DynamicDigraph, Result};

fn main() -> Result<()> {
    let g = DynamicDigraph::from_edges(&generate(&SynthConfig { seed: 7, ..Default::default() })?.edges)?;
    let relations = extract_reciprocal_relations(&g);
    let pool = build_dataset(&g, &relations, &FeatureConfig { standardize: false, ..Default::default() })?;

    let cfg = BenchmarkConfig {
        ratios: vec![50],
        trials: 3,
        ..Default::default()
    };
    let report = run_benchmark(&pool, &cfg)?;
    print!("{}", report.summary_table().to_csv());
    Ok(())
}
