//! Seed eligibility and per-layer scoring against planted communities.

use alloc::vec::Vec;

use crate::graph::{NodeSet, WeightedGraph};
use crate::partition::Layer;
use crate::quality::f1;

/// Nodes whose community in every layer has more than `n_set` members and
/// contains at least one of their neighbours.
pub fn potential_seeds(truth: &[Layer], g: &WeightedGraph, n_set: usize) -> NodeSet {
    let n = g.node_count();
    let assignments: Vec<Vec<usize>> = truth.iter().map(|l| l.assignment(n)).collect();
    (0..n)
        .filter(|&v| {
            truth.iter().zip(&assignments).all(|(layer, assign)| {
                let c = assign[v];
                c != usize::MAX
                    && layer.communities()[c].len() > n_set
                    && g.neighbors(v).any(|(u, _)| assign[u] == c)
            })
        })
        .collect()
}

/// F1 of each detected community against the seed's planted community in the
/// layer at the same position. Layers without a planted community for the
/// seed score 0.
pub fn layer_scores(detected: &[NodeSet], truth: &[Layer], seed: usize) -> Vec<f64> {
    detected
        .iter()
        .zip(truth)
        .map(|(c, layer)| layer.community_of(seed).map_or(0.0, |t| f1(c, t)))
        .collect()
}
