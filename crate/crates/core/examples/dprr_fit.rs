//! Fit the network-lasso delay model, score new relations, and persist it.

use reciprocity_delay::analytics::extract_reciprocal_relations;
use reciprocity_delay::dprr::{self, DprrConfig};
use reciprocity_delay::eval::{mae, rmse, sample_split_indices};
use reciprocity_delay::eval::benchmark::prepare_split;
use reciprocity_delay::features::{build_dataset, FeatureConfig};
use reciprocity_delay::persist::{read_model, write_model, SavedModel};
use reciprocity_delay::synth::{generate, SynthConfig};
use reciprocity_delay::{DynamicDigraph, Result};

fn main() -> Result<()> {
    let g = DynamicDigraph::from_edges(&generate(&SynthConfig { seed: 7, ..Default::default() })?.edges)?;
    let relations = extract_reciprocal_relations(&g);
    let pool = build_dataset(&g, &relations, &FeatureConfig { standardize: false, ..Default::default() })?;
    let (tr, te) = sample_split_indices(pool.len(), 2000, 50, 1)?;
    let (train, test) = prepare_split(&pool, &tr, &te, true)?;

    let cfg = DprrConfig::default();
    let groups = dprr::groups_for(&train, &cfg);
    let model = dprr::fit(&train, &groups, &cfg)?;
    let d = &model.diagnostics;
    println!(
        "{} rows, {} targets, {} pairs; objective {:.2} -> {:.2} in {} iterations",
        train.len(),
        model.target_points.len(),
        groups.n_pairs(),
        d.initial_objective,
        d.objective,
        d.iterations
    );

    let y = test.targets()?;
    let p = model.predict_dataset(&test)?;
    println!("test MAE {:.4} RMSE {:.4}", mae(y, &p)?, rmse(y, &p)?);

    let mut buf = Vec::new();
    write_model(&mut buf, &SavedModel::from(model))?;
    let back = read_model(buf.as_slice())?;
    assert_eq!(back.predict_dataset(&test)?, p);
    println!("saved {} model: {} bytes of JSON", back.kind_name(), buf.len());
    Ok(())
}
