mod common;

use std::collections::HashMap;

use proptest::prelude::*;

use common::{dist, norm, Instance};
use reciprocity_delay::baselines::fit_pd;
use reciprocity_delay::dprr::admm::pair_prox;
use reciprocity_delay::dprr::{
    build_same_target_groups, fit, groups_for, objective, weber_cost, weber_point, DprrConfig,
};
use reciprocity_delay::linalg::dot;

fn tight(alpha: f64, beta: f64) -> DprrConfig {
    DprrConfig {
        alpha,
        beta,
        max_iterations: 200_000,
        eps_primal: 1e-10,
        eps_dual: 1e-10,
        ..Default::default()
    }
}

fn points(max_d: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1..=max_d).prop_flat_map(|d| prop::collection::vec(prop::collection::vec(-10.0f64..10.0, d), 1..9))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weber_point_dominates_inputs_and_centroid(p in points(3)) {
        let b = weber_point(&p);
        let cost = weber_cost(&b, &p);
        let slack = 1e-9 * (1.0 + cost);
        for q in &p {
            prop_assert!(cost <= weber_cost(q, &p) + slack);
        }
        let d = p[0].len();
        let centroid: Vec<f64> = (0..d).map(|k| p.iter().map(|q| q[k]).sum::<f64>() / p.len() as f64).collect();
        prop_assert!(cost <= weber_cost(&centroid, &p) + slack);
    }

    #[test]
    fn weber_point_is_translation_equivariant(p in points(3), shift in prop::collection::vec(-10.0f64..10.0, 3)) {
        let d = p[0].len();
        let moved: Vec<Vec<f64>> = p.iter().map(|q| q.iter().zip(&shift).map(|(a, c)| a + c).collect()).collect();
        let b = weber_point(&p);
        let bm = weber_point(&moved);
        let expected: Vec<f64> = b.iter().zip(&shift).map(|(a, c)| a + c).collect();
        prop_assert_eq!(bm.len(), d);
        prop_assert!(dist(&bm, &expected) < 1e-8 * (1.0 + norm(&expected)), "{:?} vs {:?}", bm, expected);
    }

    #[test]
    fn pair_prox_satisfies_optimality(
        c1 in prop::collection::vec(-5.0f64..5.0, 3),
        c2 in prop::collection::vec(-5.0f64..5.0, 3),
        beta in 0.0f64..3.0,
        rho in 0.1f64..5.0,
    ) {
        let (mut z1, mut z2) = (vec![0.0; 3], vec![0.0; 3]);
        pair_prox(&c1, &c2, beta, rho, &mut z1, &mut z2);
        let gap = dist(&z1, &z2);
        // the pair's midpoint is never moved by the coupling term
        for k in 0..3 {
            prop_assert!((z1[k] + z2[k] - c1[k] - c2[k]).abs() < 1e-12);
        }
        if gap > 1e-12 {
            for k in 0..3 {
                let unit = (z1[k] - z2[k]) / gap;
                prop_assert!((2.0 * beta * unit + rho * (z1[k] - c1[k])).abs() < 1e-9);
                prop_assert!((-2.0 * beta * unit + rho * (z2[k] - c2[k])).abs() < 1e-9);
            }
        } else {
            let r: Vec<f64> = (0..3).map(|k| rho * (c1[k] - z1[k])).collect();
            prop_assert!(norm(&r) <= 2.0 * beta + 1e-9);
        }
    }

    #[test]
    fn groups_are_symmetric_cliques_of_equal_targets(targets in prop::collection::vec(0usize..6, 1..40), cap in 2usize..12, seed in 0u64..100) {
        let g = build_same_target_groups(&targets, cap, seed);
        let mut sizes: HashMap<usize, usize> = HashMap::new();
        for &t in &targets {
            *sizes.entry(t).or_default() += 1;
        }
        prop_assert_eq!(g.members.len(), sizes.len());
        for (gi, rows) in g.members.iter().enumerate() {
            prop_assert_eq!(rows.len(), sizes[&g.keys[gi]]);
            for &r in rows {
                prop_assert_eq!(targets[r], g.keys[gi]);
                prop_assert_eq!(g.row_group[r], gi);
            }
        }
        prop_assert_eq!(g.pairs.len() % 2, 0);
        for (p, &(i, j)) in g.pairs.iter().enumerate() {
            prop_assert!(i != j);
            prop_assert_eq!(targets[i], targets[j]);
            prop_assert_eq!(g.pairs[p ^ 1], (j, i));
            prop_assert!(g.row_pairs[i].contains(&p));
        }
        let full: usize = sizes.values().filter(|&&s| s <= cap).map(|&s| s * (s - 1)).sum();
        let from_full_groups = g.pairs.iter().filter(|&&(i, _)| sizes[&targets[i]] <= cap).count();
        prop_assert_eq!(from_full_groups, full);
        for (i, &t) in targets.iter().enumerate() {
            if sizes[&t] > cap {
                prop_assert!(g.partners(i) <= cap);
            }
        }
    }
}

#[test]
fn fitted_objective_never_exceeds_first_iterate() {
    let mut r = common::rng(11);
    for case in 0..30 {
        let n = 4 + case % 10;
        let groups = 1 + case % 3;
        let inst = Instance::random(&mut r, n, 1 + case % 3, groups);
        let ds = inst.dataset();
        let beta = [0.1, 1.0, 10.0][case % 3];
        let cfg = DprrConfig { beta, ..Default::default() };
        let m = fit(&ds, &groups_for(&ds, &cfg), &cfg).unwrap();
        assert!(
            m.diagnostics.objective <= m.diagnostics.initial_objective,
            "case {case}: {} > {}",
            m.diagnostics.objective,
            m.diagnostics.initial_objective
        );
        let direct = inst.objective(&m.w, &m.local, cfg.alpha, beta);
        assert!((direct - m.diagnostics.objective).abs() <= 1e-9 * (1.0 + direct));
    }
}

#[test]
fn zero_coupling_matches_personal_only_fit() {
    let mut r = common::rng(5);
    for _ in 0..10 {
        let inst = Instance::random(&mut r, 12, 3, 3);
        let ds = inst.dataset();
        let cfg = tight(1.0, 0.0);
        let groups = groups_for(&ds, &cfg);
        let full = fit(&ds, &groups, &cfg).unwrap();
        let pd = fit_pd(&ds, &groups, &cfg).unwrap();
        assert!(full.diagnostics.objective < 1e-6);
        assert!(pd.diagnostics.objective < 1e-6);
        assert!(norm(&full.w) < 1e-3);
        assert!(pd.w.iter().all(|&v| v == 0.0));
        for i in 0..ds.len() {
            let a = dot(&inst.x[i], &full.w) + dot(&inst.x[i], &full.local[i]);
            let b = dot(&inst.x[i], &pd.local[i]);
            assert!((a - inst.y[i]).abs() < 1e-3 && (b - inst.y[i]).abs() < 1e-3);
        }
    }
}

#[test]
fn objective_matches_term_by_term_evaluation() {
    let mut r = common::rng(3);
    for _ in 0..50 {
        let inst = Instance::random(&mut r, 9, 2, 3);
        let ds = inst.dataset();
        let g = groups_for(&ds, &DprrConfig::default());
        let w = common::normals(&mut r, 2);
        let local: Vec<Vec<f64>> = (0..9).map(|_| common::normals(&mut r, 2)).collect();
        let got = objective(&ds, &g, &w, &local, 0.7, 1.3).unwrap();
        let want = inst.objective(&w, &local, 0.7, 1.3);
        assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0));
    }
}

#[test]
fn repeated_fits_are_bit_identical() {
    let mut r = common::rng(21);
    let inst = Instance::random(&mut r, 15, 3, 2);
    let ds = inst.dataset();
    let cfg = DprrConfig::default();
    let g = groups_for(&ds, &cfg);
    let a = fit(&ds, &g, &cfg).unwrap();
    let b = fit(&ds, &g, &cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.local, b.local);
}
