mod common;

use common::planted;
use irls_core::irls::{hicode_refine, irls_detect, IrlsConfig, Truncation};
use irls_core::quality::{f1, partition_modularity};

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

#[test]
fn irls_recovers_both_layers() {
    let (g, truth) = planted(50, 12, &[0.5, 0.2], 0.005, 7);
    let cfg = IrlsConfig {
        iterations: 3,
        ..IrlsConfig::new(2)
    };
    let mut scores = [Vec::new(), Vec::new()];
    for seed in [3, 101, 250, 377, 590] {
        let res = irls_detect(&g, seed, &cfg).unwrap();
        for (i, layer) in truth.layers.iter().enumerate() {
            scores[i].push(f1(&res.communities[i], layer.community_of(seed).unwrap()));
        }
    }
    let means: Vec<f64> = scores.iter().map(|s| mean(s)).collect();
    assert!(mean(&means) >= 0.85, "layer means {means:?}");
}

#[test]
fn known_sizes_are_respected() {
    let (g, _) = planted(40, 10, &[0.5, 0.25], 0.005, 3);
    let cfg = IrlsConfig {
        iterations: 2,
        truncation: Truncation::GroundTruth(vec![40, 40]),
        ..IrlsConfig::new(2)
    };
    let res = irls_detect(&g, 12, &cfg).unwrap();
    assert!(res.communities.iter().all(|c| c.len() == 40 && c.contains(12)));
    assert_eq!(res.trace.len(), 2);
}

#[test]
fn hicode_finds_dominant_layer() {
    let (g, truth) = planted(50, 12, &[0.5, 0.2], 0.005, 7);
    let planted_q = partition_modularity(&g, &truth.layers[0]).unwrap();
    let layers = hicode_refine(&g, 2, 3, Some(1));
    let found: Vec<f64> = layers.iter().map(|l| partition_modularity(&g, l).unwrap()).collect();
    assert!(
        found.iter().any(|q| (q - planted_q).abs() <= 0.05),
        "planted {planted_q}, found {found:?}"
    );
}
