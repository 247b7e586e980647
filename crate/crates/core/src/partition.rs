//! Layers (sets of disjoint communities) and weighted Louvain partitioning.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{NodeSet, WeightedGraph};

/// Disjoint, non-empty communities over (a subset of) the nodes of a graph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Layer {
    communities: Vec<NodeSet>,
}

impl Layer {
    /// Drops empty communities. Callers guarantee disjointness.
    pub fn new(communities: Vec<NodeSet>) -> Self {
        let communities: Vec<NodeSet> = communities.into_iter().filter(|c| !c.is_empty()).collect();
        debug_assert!(Self::disjoint(&communities));
        Layer { communities }
    }

    fn disjoint(communities: &[NodeSet]) -> bool {
        let mut all: Vec<usize> = communities.iter().flat_map(|c| c.iter()).collect();
        let len = all.len();
        all.sort_unstable();
        all.dedup();
        all.len() == len
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn communities(&self) -> &[NodeSet] {
        &self.communities
    }

    pub fn len(&self) -> usize {
        self.communities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.communities.is_empty()
    }

    /// Number of covered nodes.
    pub fn covers(&self) -> usize {
        self.communities.iter().map(NodeSet::len).sum()
    }

    /// Community index of every node in `0..n`, `usize::MAX` when uncovered.
    pub fn assignment(&self, n: usize) -> Vec<usize> {
        let mut out = vec![usize::MAX; n];
        for (i, c) in self.communities.iter().enumerate() {
            for v in c.iter() {
                out[v] = i;
            }
        }
        out
    }

    pub fn community_of(&self, v: usize) -> Option<&NodeSet> {
        self.communities.iter().find(|c| c.contains(v))
    }

    /// Maps every member through `map`.
    pub fn map(&self, map: &[usize]) -> Layer {
        Layer {
            communities: self.communities.iter().map(|c| c.map(map)).collect(),
        }
    }

    pub fn push(&mut self, community: NodeSet) {
        if !community.is_empty() {
            self.communities.push(community);
        }
    }
}

/// Smallest modularity increase that still counts as progress.
pub const MIN_GAIN: f64 = 1e-9;

/// Louvain result with the modularity reached after every aggregation pass.
#[derive(Debug, Clone)]
pub struct LouvainTrace {
    pub layer: Layer,
    pub pass_modularity: Vec<f64>,
}

/// Weighted Louvain with resolution 1.
///
/// Nodes are visited in ascending order unless `order_seed` is given, in which
/// case every pass uses a seeded shuffle. The result covers every node.
pub fn louvain(g: &WeightedGraph, order_seed: Option<u64>) -> Layer {
    louvain_with_trace(g, order_seed).layer
}

pub fn louvain_with_trace(g: &WeightedGraph, order_seed: Option<u64>) -> LouvainTrace {
    let n = g.node_count();
    let mut level = Level::from_graph(g);
    let mut membership: Vec<usize> = (0..n).collect();
    let mut rng = order_seed.map(ChaCha8Rng::seed_from_u64);
    let mut pass_modularity = Vec::new();
    if level.two_m > 0.0 {
        let mut current = level.modularity(&(0..n).collect::<Vec<_>>());
        loop {
            let mut order: Vec<usize> = (0..level.len()).collect();
            if let Some(rng) = rng.as_mut() {
                order.shuffle(rng);
            }
            let (comm, moved) = level.local_moves(&order);
            if !moved {
                break;
            }
            let (comm, count) = renumber(&comm);
            let q = level.modularity(&comm);
            if q - current <= MIN_GAIN {
                break;
            }
            for m in membership.iter_mut() {
                *m = comm[*m];
            }
            current = q;
            pass_modularity.push(q);
            level = level.aggregate(&comm, count);
        }
    }
    let count = membership.iter().copied().max().map_or(0, |m| m + 1);
    let mut groups = vec![Vec::new(); count];
    for (v, &c) in membership.iter().enumerate() {
        groups[c].push(v);
    }
    let mut communities: Vec<NodeSet> = groups.into_iter().map(NodeSet::new).collect();
    communities.sort_unstable_by_key(|c| c.as_slice().first().copied());
    LouvainTrace {
        layer: Layer::new(communities),
        pass_modularity,
    }
}

/// Louvain on the graph induced by the nodes outside `removed`, mapped back to
/// indices of `g`.
pub fn partition_without(g: &WeightedGraph, removed: &NodeSet, order_seed: Option<u64>) -> Layer {
    let keep: NodeSet = (0..g.node_count()).filter(|&v| !removed.contains(v)).collect();
    if keep.is_empty() {
        return Layer::empty();
    }
    let (sub, map) = g.induced_subgraph(&keep);
    louvain(&sub, order_seed).map(&map)
}

fn renumber(comm: &[usize]) -> (Vec<usize>, usize) {
    let mut ids = vec![usize::MAX; comm.len()];
    let mut next = 0;
    let out = comm
        .iter()
        .map(|&c| {
            if ids[c] == usize::MAX {
                ids[c] = next;
                next += 1;
            }
            ids[c]
        })
        .collect();
    (out, next)
}

/// Aggregated graph of one Louvain level. `self_loops[c]` is the internal
/// weight of super-node `c`, counted once.
struct Level {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
    self_loops: Vec<f64>,
    strength: Vec<f64>,
    two_m: f64,
}

impl Level {
    fn from_graph(g: &WeightedGraph) -> Self {
        let n = g.node_count();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::with_capacity(2 * g.edge_count());
        let mut weights = Vec::with_capacity(2 * g.edge_count());
        offsets.push(0);
        for v in 0..n {
            for (u, w) in g.neighbors(v) {
                targets.push(u);
                weights.push(w);
            }
            offsets.push(targets.len());
        }
        Self::finish(offsets, targets, weights, vec![0.0; n])
    }

    fn finish(offsets: Vec<usize>, targets: Vec<usize>, weights: Vec<f64>, self_loops: Vec<f64>) -> Self {
        let n = self_loops.len();
        let strength: Vec<f64> = (0..n)
            .map(|v| weights[offsets[v]..offsets[v + 1]].iter().sum::<f64>() + 2.0 * self_loops[v])
            .collect();
        let two_m = strength.iter().sum();
        Level {
            offsets,
            targets,
            weights,
            self_loops,
            strength,
            two_m,
        }
    }

    fn len(&self) -> usize {
        self.self_loops.len()
    }

    fn modularity(&self, comm: &[usize]) -> f64 {
        let n = self.len();
        let mut inner = vec![0.0; n];
        let mut tot = vec![0.0; n];
        for v in 0..n {
            let c = comm[v];
            tot[c] += self.strength[v];
            inner[c] += 2.0 * self.self_loops[v];
            for e in self.offsets[v]..self.offsets[v + 1] {
                if comm[self.targets[e]] == c {
                    inner[c] += self.weights[e];
                }
            }
        }
        inner
            .iter()
            .zip(&tot)
            .map(|(i, t)| i / self.two_m - (t / self.two_m) * (t / self.two_m))
            .sum()
    }

    /// Repeated sweeps of single-node moves until a sweep moves nothing.
    fn local_moves(&self, order: &[usize]) -> (Vec<usize>, bool) {
        let n = self.len();
        let mut comm: Vec<usize> = (0..n).collect();
        let mut tot = self.strength.clone();
        let mut link = vec![0.0; n];
        let mut seen = vec![false; n];
        let mut touched = Vec::new();
        let mut any = false;
        // A move must raise modularity by more than this (in weight units of 2m).
        let threshold = 1e-12 * self.two_m;
        loop {
            let mut moved = false;
            for &v in order {
                let own = comm[v];
                let k = self.strength[v];
                for e in self.offsets[v]..self.offsets[v + 1] {
                    let c = comm[self.targets[e]];
                    if !seen[c] {
                        seen[c] = true;
                        touched.push(c);
                    }
                    link[c] += self.weights[e];
                }
                tot[own] -= k;
                let ratio = k / self.two_m;
                let mut best = own;
                let mut best_gain = link[own] - tot[own] * ratio;
                for &c in &touched {
                    let gain = link[c] - tot[c] * ratio;
                    if gain > best_gain + threshold {
                        best = c;
                        best_gain = gain;
                    }
                }
                tot[best] += k;
                if best != own {
                    comm[v] = best;
                    moved = true;
                }
                for &c in &touched {
                    link[c] = 0.0;
                    seen[c] = false;
                }
                link[own] = 0.0;
                touched.clear();
            }
            if !moved {
                break;
            }
            any = true;
        }
        (comm, any)
    }

    fn aggregate(&self, comm: &[usize], count: usize) -> Level {
        let mut self_loops = vec![0.0; count];
        let mut cross: Vec<(usize, usize, f64)> = Vec::new();
        for v in 0..self.len() {
            let cv = comm[v];
            self_loops[cv] += self.self_loops[v];
            for e in self.offsets[v]..self.offsets[v + 1] {
                let cu = comm[self.targets[e]];
                if cu == cv {
                    self_loops[cv] += self.weights[e] / 2.0;
                } else {
                    cross.push((cv, cu, self.weights[e]));
                }
            }
        }
        cross.sort_unstable_by_key(|a| (a.0, a.1));
        let mut offsets = vec![0usize; count + 1];
        let mut targets = Vec::new();
        let mut weights: Vec<f64> = Vec::new();
        let mut row = 0;
        for (a, b, w) in cross {
            while row < a {
                row += 1;
                offsets[row] = targets.len();
            }
            if targets.len() > offsets[a] && *targets.last().unwrap() == b {
                *weights.last_mut().unwrap() += w;
            } else {
                targets.push(b);
                weights.push(w);
            }
        }
        while row < count {
            row += 1;
            offsets[row] = targets.len();
        }
        Level::finish(offsets, targets, weights, self_loops)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quality::partition_modularity;

    fn set(v: &[usize]) -> NodeSet {
        NodeSet::new(v.to_vec())
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
    fn two_triangles_split() {
        let g = two_triangles();
        let layer = louvain(&g, None);
        assert_eq!(layer.communities(), &[set(&[0, 1, 2]), set(&[3, 4, 5])]);
        let q = partition_modularity(&g, &layer).unwrap();
        assert!((q - 0.357143).abs() < 1e-6);
    }

    #[test]
    fn edgeless_gives_singletons() {
        let g = WeightedGraph::from_index_edges(4, vec![]).unwrap();
        let layer = louvain(&g, Some(3));
        assert_eq!(layer.len(), 4);
        assert!(layer.communities().iter().all(|c| c.len() == 1));
    }

    #[test]
    fn ring_of_cliques() {
        let mut edges = Vec::new();
        for k in 0..4 {
            let base = 5 * k;
            for i in 0..5 {
                for j in i + 1..5 {
                    edges.push((base + i, base + j, 1.0));
                }
            }
            edges.push((base + 4, (base + 5) % 20, 1.0));
        }
        let g = WeightedGraph::from_index_edges(20, edges).unwrap();
        for seed in [None, Some(1), Some(99)] {
            let layer = louvain(&g, seed);
            let expected: Vec<NodeSet> = (0..4).map(|k| (5 * k..5 * k + 5).collect()).collect();
            assert_eq!(layer.communities(), expected.as_slice());
        }
    }

    #[test]
    fn partition_without_examples() {
        let g = two_triangles();
        let layer = partition_without(&g, &set(&[0, 1, 2]), None);
        assert_eq!(layer.communities(), &[set(&[3, 4, 5])]);
        assert_eq!(partition_without(&g, &NodeSet::empty(), None), louvain(&g, None));
        assert!(partition_without(&g, &set(&[0, 1, 2, 3, 4, 5]), None).is_empty());
    }

    #[test]
    fn layer_helpers() {
        let layer = Layer::new(vec![set(&[1, 2]), NodeSet::empty(), set(&[4])]);
        assert_eq!(layer.len(), 2);
        assert_eq!(layer.covers(), 3);
        assert_eq!(layer.assignment(5), vec![usize::MAX, 0, 0, usize::MAX, 1]);
        assert_eq!(layer.community_of(4), Some(&set(&[4])));
    }
}
