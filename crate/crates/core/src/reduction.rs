//! Layer weakening by weight reduction.
//!
//! The internal edges of a community are scaled by `q/p` so that its interior
//! density drops to the density of its connections to the rest of the graph.
//! The factor is clamped to 1: a community no denser than its background is
//! left alone.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Result;
use crate::graph::{NodeSet, WeightedGraph};
use crate::partition::Layer;
use crate::quality::densities_with;

/// Scale factor `min(1, q/p)` for a community; `None` when it has no internal edges.
fn reduction_factor(g: &WeightedGraph, c: &NodeSet, mark: &mut [bool]) -> Result<Option<f64>> {
    let d = densities_with(g, c, mark)?;
    if d.p <= 0.0 {
        return Ok(None);
    }
    Ok(Some((d.q / d.p).min(1.0)))
}

/// Weakens a single community in place and returns the applied factor.
pub fn reduce_community(g: &mut WeightedGraph, c: &NodeSet) -> Result<f64> {
    let mut mark = vec![false; g.node_count()];
    let Some(factor) = reduction_factor(g, c, &mut mark)? else {
        return Ok(1.0);
    };
    if factor < 1.0 {
        let mut group = vec![usize::MAX; g.node_count()];
        for v in c.iter() {
            group[v] = 0;
        }
        g.scale_within_groups(&group, &[factor]);
    }
    Ok(factor)
}

/// Weakens every community of `layer` with at least two members.
///
/// All factors are computed from the weights as they were on entry, so the
/// order of communities within the layer does not matter. Returns the factor
/// applied to each community (1 for skipped ones).
pub fn weaken_layer(g: &mut WeightedGraph, layer: &Layer) -> Vec<f64> {
    let n = g.node_count();
    let mut mark = vec![false; n];
    let factors: Vec<f64> = layer
        .communities()
        .iter()
        .map(|c| match reduction_factor(g, c, &mut mark) {
            Ok(Some(f)) => f,
            Ok(None) | Err(_) => 1.0,
        })
        .collect();
    if factors.iter().any(|&f| f < 1.0) {
        g.scale_within_groups(&layer.assignment(n), &factors);
    }
    factors
}

#[cfg(test)]
mod tests {
    use crate::error::Error;
    use super::*;
    use crate::quality::community_densities;

    fn set(v: &[usize]) -> NodeSet {
        NodeSet::new(v.to_vec())
    }

    fn clique_with_tail() -> WeightedGraph {
        WeightedGraph::from_index_edges(
            6,
            vec![(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0), (2, 3, 1.0), (4, 5, 1.0)],
        )
        .unwrap()
    }

    #[test]
    fn reduces_to_background() {
        let mut g = clique_with_tail();
        let c = set(&[0, 1, 2]);
        let f = reduce_community(&mut g, &c).unwrap();
        assert!((f - 1.0 / 9.0).abs() < 1e-15);
        assert!((g.weight(0, 1).unwrap() - 1.0 / 9.0).abs() < 1e-15);
        assert_eq!(g.weight(2, 3), Some(1.0));
        assert_eq!(g.weight(4, 5), Some(1.0));
        let d = community_densities(&g, &c).unwrap();
        assert!((d.p - 1.0 / 9.0).abs() < 1e-12);
        assert!(g.is_consistent());
    }

    #[test]
    fn sparse_community_is_untouched() {
        // Path 0-1-2 inside a 4-node graph where 0,1,2 all link to 3: p = 2/3, q = 1.
        let mut g = WeightedGraph::from_index_edges(
            4,
            vec![(0, 1, 1.0), (1, 2, 1.0), (0, 3, 1.0), (1, 3, 1.0), (2, 3, 1.0)],
        )
        .unwrap();
        let before = g.clone();
        assert_eq!(reduce_community(&mut g, &set(&[0, 1, 2])).unwrap(), 1.0);
        assert_eq!(g, before);
    }

    #[test]
    fn zero_background_removes_internal_edges() {
        let mut g = clique_with_tail();
        reduce_community(&mut g, &set(&[4, 5])).unwrap();
        assert_eq!(g.weight(4, 5), None);
        assert!(g.is_consistent());
    }

    #[test]
    fn degenerate_is_an_error() {
        let mut g = clique_with_tail();
        assert!(matches!(
            reduce_community(&mut g, &set(&[0])),
            Err(Error::DegenerateCommunity { .. })
        ));
    }

    #[test]
    fn weaken_layer_is_order_independent() {
        // Two triangles {0,1,2}, {3,4,5} in a 10-node graph with a few external edges.
        let edges = vec![
            (0, 1, 1.0),
            (1, 2, 1.0),
            (0, 2, 1.0),
            (3, 4, 1.0),
            (4, 5, 1.0),
            (3, 5, 1.0),
            (2, 3, 1.0),
            (0, 6, 1.0),
            (5, 7, 1.0),
            (4, 8, 1.0),
            (8, 9, 1.0),
        ];
        let g = WeightedGraph::from_index_edges(10, edges).unwrap();
        let a = set(&[0, 1, 2]);
        let b = set(&[3, 4, 5]);
        let mut g1 = g.clone();
        let f1 = weaken_layer(&mut g1, &Layer::new(vec![a.clone(), b.clone()]));
        let mut g2 = g.clone();
        let f2 = weaken_layer(&mut g2, &Layer::new(vec![b, a]));
        assert_eq!(g1, g2);
        assert_eq!(f1[0], f2[1]);
        // {0,1,2}: p = 1, two external edges, q = 2/21.
        assert!((f1[0] - 2.0 / 21.0).abs() < 1e-15);
        // {3,4,5}: p = 1, three external edges, q = 3/21.
        assert!((f1[1] - 3.0 / 21.0).abs() < 1e-15);
    }

    #[test]
    fn trivial_layers_are_noops() {
        let g = clique_with_tail();
        let mut h = g.clone();
        weaken_layer(&mut h, &Layer::new(vec![set(&[0]), set(&[3])]));
        assert_eq!(h, g);
        weaken_layer(&mut h, &Layer::empty());
        assert_eq!(h, g);
    }
}
