#![allow(dead_code)]

use irls_core::synth::{generate, GeneratorSpec, GroundTruth, LayerSpec, Sizing};
use irls_core::{NodeSet, WeightedGraph};
use proptest::prelude::*;

/// Random simple graph on `n` nodes from a strategy-chosen edge mask.
pub fn arb_graph(max_n: usize) -> impl Strategy<Value = WeightedGraph> {
    (2..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        (Just(n), prop::collection::vec(prop::option::weighted(0.3, 0.1f64..5.0), pairs))
    })
    .prop_map(|(n, mask)| {
        let mut edges = Vec::new();
        let mut k = 0;
        for u in 0..n {
            for v in u + 1..n {
                if let Some(w) = mask[k] {
                    edges.push((u, v, w));
                }
                k += 1;
            }
        }
        WeightedGraph::from_index_edges(n, edges).unwrap()
    })
}

/// A graph together with a random subset of its nodes.
pub fn arb_graph_and_set(max_n: usize) -> impl Strategy<Value = (WeightedGraph, NodeSet)> {
    arb_graph(max_n).prop_flat_map(|g| {
        let n = g.node_count();
        (Just(g), prop::collection::vec(any::<bool>(), n))
            .prop_map(|(g, keep)| {
                let set = keep.iter().enumerate().filter(|(_, &k)| k).map(|(i, _)| i).collect();
                (g, set)
            })
    })
}

/// Planted communities of exactly `size` nodes, one layer per `(count, p)`.
pub fn planted(size: usize, count: usize, layers: &[f64], p_out: f64, seed: u64) -> (WeightedGraph, GroundTruth) {
    let spec = GeneratorSpec {
        n: size * count,
        layers: layers
            .iter()
            .map(|&p| LayerSpec {
                sizing: Sizing::PowerLaw {
                    exponent: 1.0,
                    min_size: size,
                    max_size: size,
                },
                p,
            })
            .collect(),
        p0: p_out,
        rng_seed: seed,
    };
    generate(&spec).unwrap()
}
