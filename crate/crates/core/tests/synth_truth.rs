use std::collections::HashMap;

use reciprocity_delay::analytics::reciprocity::extract_reciprocal_relations;
use reciprocity_delay::features::{extract_features, DelayHistory, RelationQuery};
use reciprocity_delay::linalg::dot;
use reciprocity_delay::synth::{generate, planted_delay, SynthConfig, SynthOutput};
use reciprocity_delay::DynamicDigraph;

fn noiseless(seed: u64) -> SynthConfig {
    SynthConfig {
        users: 300,
        horizon: 120,
        censor_day: 119,
        sigma_u: 0.0,
        sigma_eps: 0.0,
        seed,
        ..Default::default()
    }
}

fn check_truth(cfg: &SynthConfig, out: &SynthOutput, exact_formula: bool) {
    let g = DynamicDigraph::from_edges(&out.edges).unwrap();
    let rels = extract_reciprocal_relations(&g);
    let history = DelayHistory::from_relations(&rels);
    assert_eq!(rels.len(), out.truth.len());
    let truth: HashMap<(&str, &str), _> = out.truth.iter().map(|t| ((t.u.as_str(), t.v.as_str()), t)).collect();
    for r in &rels {
        let t = truth[&(g.name(r.u), g.name(r.v))];
        assert_eq!((t.t1, t.t2), (r.t1, r.t2));
        assert_eq!(t.planted_delay, r.delay);
        assert!(r.delay >= 1);
        let x = extract_features(&g, &history, RelationQuery::from(r), cfg.k, cfg.fill, cfg.anchor).unwrap();
        assert_eq!(x.0.as_slice(), t.x.as_slice(), "features of {}->{} differ", t.u, t.v);
        if exact_formula {
            assert_eq!(t.offset_v, 0.0);
            assert_eq!(r.delay, planted_delay(dot(&t.x, &cfg.w_star)));
        }
    }
}

#[test]
fn noiseless_delays_follow_the_planted_formula() {
    for seed in [1, 2, 3] {
        let cfg = noiseless(seed);
        let out = generate(&cfg).unwrap();
        assert!(out.truth.len() > 50);
        check_truth(&cfg, &out, true);
    }
}

#[test]
fn noisy_streams_still_match_their_ground_truth() {
    let cfg = SynthConfig { seed: 4, ..Default::default() };
    let out = generate(&cfg).unwrap();
    check_truth(&cfg, &out, false);
    let mut offsets: HashMap<&str, f64> = HashMap::new();
    for t in &out.truth {
        let o = *offsets.entry(t.v.as_str()).or_insert(t.offset_v);
        assert_eq!(o, t.offset_v, "target {} has two offsets", t.v);
        assert!(t.t2 <= cfg.censor_day && t.t2 < cfg.horizon);
    }
}

#[test]
fn same_seed_same_network() {
    let cfg = SynthConfig { users: 200, horizon: 80, censor_day: 79, seed: 12, ..Default::default() };
    let a = generate(&cfg).unwrap();
    assert_eq!(a, generate(&cfg).unwrap());
    assert_eq!(a.truth_table().to_csv(), generate(&cfg).unwrap().truth_table().to_csv());
    let b = generate(&SynthConfig { seed: 13, ..cfg }).unwrap();
    assert_ne!(a.edges, b.edges);
}

