//! Community scoring: weighted local modularity, partition modularity,
//! interior/background densities and F1.
//!
//! `w_C` always denotes the degree sum of a node set, `2·w_Cin + w_Cout`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{NodeSet, WeightedGraph};
use crate::partition::Layer;

/// Interior density `p` and background density `q` of a community.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityPair {
    pub p: f64,
    pub q: f64,
}

/// Internal weight and degree sum of a node set.
pub(crate) fn inner_and_volume(g: &WeightedGraph, members: &[usize], mark: &mut [bool]) -> (f64, f64) {
    for &v in members {
        mark[v] = true;
    }
    let mut twice_inner = 0.0;
    let mut volume = 0.0;
    for &u in members {
        for (v, w) in g.neighbors(u) {
            volume += w;
            if mark[v] {
                twice_inner += w;
            }
        }
    }
    for &v in members {
        mark[v] = false;
    }
    (twice_inner / 2.0, volume)
}

fn local_modularity(inner: f64, volume: f64, size: usize, total: f64) -> f64 {
    let share = volume / (2.0 * total);
    (inner / total - share * share) / size as f64
}

/// `Q(C) = (w_Cin / w_G − (w_C / 2w_G)²) / n_C`.
pub fn weighted_local_modularity(g: &WeightedGraph, c: &NodeSet) -> Result<f64> {
    if c.is_empty() {
        return Err(Error::EmptySet);
    }
    if g.total_weight() <= 0.0 {
        return Err(Error::NoEdges);
    }
    let mut mark = vec![false; g.node_count()];
    let (inner, volume) = inner_and_volume(g, c.as_slice(), &mut mark);
    Ok(local_modularity(inner, volume, c.len(), g.total_weight()))
}

/// `Q` of every prefix `order[..j]`, `j = 1..=min(limit, order.len())`.
///
/// Each added node costs one pass over its neighbours. An edgeless graph
/// yields `NaN`-free zeros.
pub fn prefix_modularity_scan(g: &WeightedGraph, order: &[usize], limit: usize) -> Vec<f64> {
    let total = g.total_weight();
    let len = limit.min(order.len());
    let mut mark = vec![false; g.node_count()];
    let mut inner = 0.0;
    let mut volume = 0.0;
    let mut out = Vec::with_capacity(len);
    for (j, &v) in order[..len].iter().enumerate() {
        for (u, w) in g.neighbors(v) {
            volume += w;
            if mark[u] {
                inner += w;
            }
        }
        mark[v] = true;
        out.push(if total > 0.0 {
            local_modularity(inner, volume, j + 1, total)
        } else {
            0.0
        });
    }
    out
}

/// Newman modularity of a layer, `Σ_C (w_Cin / w_G − (w_C / 2w_G)²)`.
///
/// Nodes the layer does not cover contribute nothing.
pub fn partition_modularity(g: &WeightedGraph, layer: &Layer) -> Result<f64> {
    let total = g.total_weight();
    if total <= 0.0 {
        return Err(Error::NoEdges);
    }
    let mut mark = vec![false; g.node_count()];
    Ok(layer
        .communities()
        .iter()
        .map(|c| {
            let (inner, volume) = inner_and_volume(g, c.as_slice(), &mut mark);
            let share = volume / (2.0 * total);
            inner / total - share * share
        })
        .sum())
}

/// `p = w_Cin / (n_C(n_C−1)/2)` and `q = w_Cout / (n_C(n−n_C))`.
pub fn community_densities(g: &WeightedGraph, c: &NodeSet) -> Result<DensityPair> {
    let mut mark = vec![false; g.node_count()];
    densities_with(g, c, &mut mark)
}

pub(crate) fn densities_with(g: &WeightedGraph, c: &NodeSet, mark: &mut [bool]) -> Result<DensityPair> {
    let n = g.node_count();
    let size = c.len();
    if size < 2 || size >= n {
        return Err(Error::DegenerateCommunity { size, n });
    }
    let (inner, volume) = inner_and_volume(g, c.as_slice(), mark);
    let outer = (volume - 2.0 * inner).max(0.0);
    let nc = size as f64;
    Ok(DensityPair {
        p: inner / (0.5 * nc * (nc - 1.0)),
        q: outer / (nc * (n - size) as f64),
    })
}

/// Harmonic mean of precision and recall; zero when either set is empty or
/// they do not intersect.
pub fn f1(detected: &NodeSet, truth: &NodeSet) -> f64 {
    if detected.is_empty() || truth.is_empty() {
        return 0.0;
    }
    let hit = detected.overlap(truth) as f64;
    if hit == 0.0 {
        return 0.0;
    }
    let precision = hit / detected.len() as f64;
    let recall = hit / truth.len() as f64;
    2.0 * precision * recall / (precision + recall)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::NodeSet;

    fn set(v: &[usize]) -> NodeSet {
        NodeSet::new(v.to_vec())
    }

    /// Two 4-cliques {0..3}, {4..7} joined by the edge 3–4.
    pub(crate) fn two_cliques() -> WeightedGraph {
        let mut edges = Vec::new();
        for base in [0, 4] {
            for i in 0..4 {
                for j in i + 1..4 {
                    edges.push((base + i, base + j, 1.0));
                }
            }
        }
        edges.push((3, 4, 1.0));
        WeightedGraph::from_index_edges(8, edges).unwrap()
    }

    fn two_triangles() -> WeightedGraph {
        WeightedGraph::from_index_edges(
            6,
            vec![
                (0, 1, 1.0),
                (1, 2, 1.0),
                (0, 2, 1.0),
                (3, 4, 1.0),
                (4, 5, 1.0),
                (3, 5, 1.0),
                (2, 3, 1.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn local_modularity_examples() {
        let g = two_cliques();
        let q = weighted_local_modularity(&g, &set(&[0, 1, 2, 3])).unwrap();
        let expected = (6.0 / 13.0 - 0.25) / 4.0;
        assert!((q - expected).abs() < 1e-12);
        assert!((q - 0.052885).abs() < 1e-6);
        assert_eq!(weighted_local_modularity(&g, &set(&[0, 1, 2, 3, 4, 5, 6, 7])).unwrap(), 0.0);

        // Triangle 0-1-2 with pendant 3 on node 2: node 0 has degree 2, w_G = 4.
        let tp = WeightedGraph::from_index_edges(
            4,
            vec![(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0), (2, 3, 1.0)],
        )
        .unwrap();
        assert_eq!(weighted_local_modularity(&tp, &set(&[0])).unwrap(), -0.0625);

        assert_eq!(weighted_local_modularity(&g, &NodeSet::empty()), Err(Error::EmptySet));
        let edgeless = WeightedGraph::from_index_edges(2, vec![]).unwrap();
        assert_eq!(weighted_local_modularity(&edgeless, &set(&[0])), Err(Error::NoEdges));
    }

    #[test]
    fn prefix_scan_matches_single_and_full() {
        let g = two_cliques();
        let order = [3, 0, 1, 2, 4, 5, 6, 7];
        let scan = prefix_modularity_scan(&g, &order, 100);
        assert_eq!(scan.len(), 8);
        assert!((scan[0] - weighted_local_modularity(&g, &set(&[3])).unwrap()).abs() < 1e-15);
        assert!(scan[7].abs() < 1e-15);
        assert_eq!(prefix_modularity_scan(&g, &order, 1).len(), 1);
    }

    #[test]
    fn partition_modularity_examples() {
        let g = two_triangles();
        let layer = Layer::new(vec![set(&[0, 1, 2]), set(&[3, 4, 5])]);
        let q = partition_modularity(&g, &layer).unwrap();
        assert!((q - 2.0 * (3.0 / 7.0 - 0.25)).abs() < 1e-12);
        assert!((q - 0.357143).abs() < 1e-6);
        let whole = Layer::new(vec![set(&[0, 1, 2, 3, 4, 5])]);
        assert!(partition_modularity(&g, &whole).unwrap().abs() < 1e-15);

        let tri =
            WeightedGraph::from_index_edges(3, vec![(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        let singles = Layer::new(vec![set(&[0]), set(&[1]), set(&[2])]);
        assert!((partition_modularity(&tri, &singles).unwrap() + 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn densities() {
        // 3-clique {0,1,2}, edge 2–3, and 4,5 joined elsewhere: n = 6.
        let g = WeightedGraph::from_index_edges(
            6,
            vec![(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0), (2, 3, 1.0), (4, 5, 1.0)],
        )
        .unwrap();
        let d = community_densities(&g, &set(&[0, 1, 2])).unwrap();
        assert!((d.p - 1.0).abs() < 1e-15);
        assert!((d.q - 1.0 / 9.0).abs() < 1e-15);
        let d = community_densities(&g, &set(&[4, 5])).unwrap();
        assert_eq!(d.q, 0.0);
        assert!(matches!(
            community_densities(&g, &set(&[0])),
            Err(Error::DegenerateCommunity { size: 1, n: 6 })
        ));
    }

    #[test]
    fn f1_examples() {
        assert_eq!(f1(&set(&[1, 2]), &set(&[1, 2])), 1.0);
        assert_eq!(f1(&set(&[1, 2]), &set(&[3])), 0.0);
        assert_eq!(f1(&set(&[1, 2, 3, 4]), &set(&[3, 4, 5, 6])), 0.5);
        assert_eq!(f1(&NodeSet::empty(), &set(&[3])), 0.0);
    }
}
