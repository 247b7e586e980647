mod common;

use common::{arb_graph_and_set, planted};
use irls_core::quality::f1;
use irls_core::spectral::{build_basis, modified_losp, sparsest_indicator, LospParams};
use proptest::prelude::*;

fn small_params(dim: usize) -> LospParams {
    LospParams {
        dim,
        max_seed_set: 4,
        max_community: 10,
        ..LospParams::synthetic()
    }
}

proptest! {
    #[test]
    fn basis_is_orthonormal((g, seeds) in arb_graph_and_set(20), dim in 1usize..5) {
        prop_assume!(!seeds.is_empty());
        let basis = build_basis(&g, &seeds, &small_params(dim)).unwrap();
        prop_assert!(basis.dim() <= dim);
        prop_assert_eq!(basis.rank_deficient, basis.dim() < dim);
        for (i, a) in basis.columns().iter().enumerate() {
            for (j, b) in basis.columns().iter().enumerate() {
                let d: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                prop_assert!((d - expected).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn indicator_is_feasible((g, seeds) in arb_graph_and_set(16), dim in 1usize..4) {
        prop_assume!(!seeds.is_empty());
        let basis = build_basis(&g, &seeds, &small_params(dim)).unwrap();
        prop_assume!(basis.dim() > 0);
        if let Ok(ind) = sparsest_indicator(&basis, &seeds) {
            let bound = 1.0 / seeds.len() as f64;
            for (v, &y) in ind.scores.iter().enumerate() {
                prop_assert!(y >= -1e-9);
                if seeds.contains(v) {
                    prop_assert!(y >= bound - 1e-9);
                }
            }
            let total: f64 = ind.scores.iter().sum();
            prop_assert!((total - ind.objective).abs() <= 1e-9 * (1.0 + total.abs()));
        }
    }

    #[test]
    fn detected_community_contains_seed((g, _) in arb_graph_and_set(20), seed in 0usize..20, known in proptest::option::of(1usize..8)) {
        let seed = seed % g.node_count();
        prop_assume!(g.degree(seed) > 0);
        if let Ok(c) = modified_losp(&g, seed, &small_params(3), known) {
            prop_assert!(c.contains(seed));
            if let Some(k) = known {
                prop_assert_eq!(c.len(), k.min(g.node_count()));
            }
        }
    }
}

#[test]
fn planted_blocks_are_recovered() {
    let mut scores = Vec::new();
    for seed in 0..5 {
        let (g, truth) = planted(30, 2, &[0.5], 0.03, seed);
        let params = LospParams {
            max_seed_set: 8,
            max_community: 40,
            ..LospParams::synthetic()
        };
        for v in [0, 17, 42] {
            let c = modified_losp(&g, v, &params, None).unwrap();
            scores.push(f1(&c, truth.layers[0].community_of(v).unwrap()));
        }
    }
    let mean = scores.iter().sum::<f64>() / scores.len() as f64;
    assert!(mean >= 0.9, "mean F1 {mean}, scores {scores:?}");
}

#[test]
fn known_size_cut() {
    let (g, truth) = planted(30, 2, &[0.6], 0.02, 9);
    let c = modified_losp(&g, 3, &LospParams::synthetic(), Some(30)).unwrap();
    assert_eq!(c.len(), 30);
    assert!(f1(&c, truth.layers[0].community_of(3).unwrap()) >= 0.9);
}
