//! Predict each delay from the target's previous ones.

use reciprocity_delay::analytics::{extract_reciprocal_relations, sequential_pk_error, DEFAULT_DELAY_CUTOFF};
use reciprocity_delay::baselines::{predict_p1, predict_pk};
use reciprocity_delay::synth::{generate, SynthConfig};
use reciprocity_delay::{DynamicDigraph, Result};

fn main() -> Result<()> {
    let history = [12.0, 3.0, 8.0, 5.0];
    println!("P1 = {}, P3 = {}", predict_p1(&history, 0.0), predict_pk(&history, 3, 0.0));

    // bias-only planting: delays scatter around a per-target mean
    let mut w_star = vec![0.0; 14];
    w_star[13] = 15.0;
    let cfg = SynthConfig { w_star, sigma_u: 5.0, sigma_eps: 3.0, seed: 5, ..Default::default() };
    let g = DynamicDigraph::from_edges(&generate(&cfg)?.edges)?;
    let relations = extract_reciprocal_relations(&g);
    let ks: Vec<usize> = (1..=8).collect();
    println!("k,mae,rmse,predictions");
    for e in sequential_pk_error(&relations, &ks, DEFAULT_DELAY_CUTOFF) {
        println!("{},{:.4},{:.4},{}", e.k, e.mae, e.rmse, e.predictions);
    }
    Ok(())
}
