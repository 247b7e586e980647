//! Weighted undirected graphs with dense node indices and external labels.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// An ordered set of node indices without duplicates.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeSet(Vec<usize>);

impl NodeSet {
    pub fn new(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        NodeSet(members)
    }

    pub fn empty() -> Self {
        NodeSet(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    /// Size of the intersection with `other` (linear merge).
    pub fn overlap(&self, other: &NodeSet) -> usize {
        let (mut i, mut j, mut n) = (0, 0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                core::cmp::Ordering::Less => i += 1,
                core::cmp::Ordering::Greater => j += 1,
                core::cmp::Ordering::Equal => {
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }

    /// Maps every member through `map` (e.g. local to original indices).
    pub fn map(&self, map: &[usize]) -> NodeSet {
        NodeSet::new(self.0.iter().map(|&v| map[v]).collect())
    }
}

impl FromIterator<usize> for NodeSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        NodeSet::new(iter.into_iter().collect())
    }
}

#[derive(Debug, Default, PartialEq, Eq)]
struct LabelMap {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
}

impl LabelMap {
    fn from_names(names: Vec<String>) -> Self {
        let index = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        LabelMap { names, index }
    }
}

/// Undirected graph with strictly positive edge weights, stored in CSR form.
///
/// Every undirected edge appears once in the adjacency of each endpoint with
/// the same weight. Neighbor lists are sorted by index. There are no
/// self-loops and no parallel edges.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
    labels: Arc<LabelMap>,
    total_weight: f64,
}

impl WeightedGraph {
    /// Builds a graph over `labels.len()` nodes from undirected edges.
    ///
    /// Labels must be distinct. Edges may be given in either orientation.
    pub fn from_edges<I>(labels: Vec<String>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let n = labels.len();
        let mut list: Vec<(usize, usize, f64)> = Vec::new();
        for (u, v, w) in edges {
            let limit = n;
            if u >= n {
                return Err(Error::OutOfRange { index: u, limit });
            }
            if v >= n {
                return Err(Error::OutOfRange { index: v, limit });
            }
            if u == v {
                return Err(Error::SelfLoop(labels[u].clone()));
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::BadWeight(labels[u].clone(), labels[v].clone(), w));
            }
            list.push((u.min(v), u.max(v), w));
        }
        list.sort_unstable_by_key(|a| (a.0, a.1));
        for pair in list.windows(2) {
            if pair[0].0 == pair[1].0 && pair[0].1 == pair[1].1 {
                return Err(Error::DuplicateEdge(
                    labels[pair[0].0].clone(),
                    labels[pair[0].1].clone(),
                ));
            }
        }
        let labels = LabelMap::from_names(labels);
        if labels.index.len() != labels.names.len() {
            return Err(Error::InvalidParameter("node labels must be distinct"));
        }
        Ok(Self::from_sorted_edges(n, &list, Arc::new(labels)))
    }

    /// Nodes labelled `"0"`, `"1"`, ... `n-1`.
    pub fn from_index_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        Self::from_edges((0..n).map(|i| i.to_string()).collect(), edges)
    }

    /// `edges` must be sorted by `(u, v)` with `u < v` and contain no duplicates.
    fn from_sorted_edges(n: usize, edges: &[(usize, usize, f64)], labels: Arc<LabelMap>) -> Self {
        let mut deg = alloc::vec![0usize; n + 1];
        for &(u, v, _) in edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0;
        offsets.push(0);
        for d in deg.iter().take(n) {
            acc += d;
            offsets.push(acc);
        }
        let mut cursor: Vec<usize> = offsets[..n].to_vec();
        let mut targets = alloc::vec![0usize; acc];
        let mut weights = alloc::vec![0f64; acc];
        // Sorted (u, v) input with u < v fills each row in ascending order:
        // row x first receives its smaller neighbours (as v), then larger ones (as u).
        for &(u, v, w) in edges {
            targets[cursor[v]] = u;
            weights[cursor[v]] = w;
            cursor[v] += 1;
        }
        for &(u, v, w) in edges {
            targets[cursor[u]] = v;
            weights[cursor[u]] = w;
            cursor[u] += 1;
        }
        let total_weight = edges.iter().map(|e| e.2).sum();
        WeightedGraph {
            offsets,
            targets,
            weights,
            labels,
            total_weight,
        }
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    /// Sum of edge weights, each undirected edge counted once.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels.names[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels.names
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.index.get(label).copied()
    }

    /// Resolves a label or fails with [`Error::UnknownLabel`].
    pub fn resolve(&self, label: &str) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Neighbours of `v` with edge weights, ascending by index.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.offsets[v]..self.offsets[v + 1];
        self.targets[range.clone()]
            .iter()
            .copied()
            .zip(self.weights[range].iter().copied())
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Sum of the weights of edges incident to `v`.
    pub fn weighted_degree(&self, v: usize) -> Result<f64> {
        if v >= self.node_count() {
            return Err(Error::OutOfRange {
                index: v,
                limit: self.node_count(),
            });
        }
        Ok(self.strength(v))
    }

    /// Unchecked variant of [`weighted_degree`](Self::weighted_degree).
    pub fn strength(&self, v: usize) -> f64 {
        self.weights[self.offsets[v]..self.offsets[v + 1]].iter().sum()
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<f64> {
        let range = self.offsets[u]..self.offsets[u + 1];
        self.targets[range.clone()]
            .binary_search(&v)
            .ok()
            .map(|i| self.weights[range.start + i])
    }

    /// Undirected edges `(u, v, w)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&(v, _)| u < v)
                .map(move |(v, w)| (u, v, w))
        })
    }

    /// The subgraph spanned by `nodes` together with the local-to-original map.
    ///
    /// Local index `i` corresponds to the `i`-th smallest member of `nodes`.
    pub fn induced_subgraph(&self, nodes: &NodeSet) -> (WeightedGraph, Vec<usize>) {
        let to_original: Vec<usize> = nodes.as_slice().to_vec();
        let to_local: BTreeMap<usize, usize> =
            to_original.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        // Dense lookup is cheaper when the subgraph is a sizeable fraction.
        let dense = to_original.len() * 8 >= self.node_count();
        let mut local = Vec::new();
        if dense {
            local = alloc::vec![usize::MAX; self.node_count()];
            for (i, &v) in to_original.iter().enumerate() {
                local[v] = i;
            }
        }
        let lookup = |v: usize| -> Option<usize> {
            if dense {
                let l = local[v];
                (l != usize::MAX).then_some(l)
            } else {
                to_local.get(&v).copied()
            }
        };
        let mut edges = Vec::new();
        for (i, &u) in to_original.iter().enumerate() {
            for (v, w) in self.neighbors(u) {
                if v > u {
                    if let Some(j) = lookup(v) {
                        edges.push((i, j, w));
                    }
                }
            }
        }
        edges.sort_unstable_by_key(|a| (a.0, a.1));
        let names = to_original
            .iter()
            .map(|&v| self.labels.names[v].clone())
            .collect();
        let labels = Arc::new(LabelMap::from_names(names));
        (
            Self::from_sorted_edges(to_original.len(), &edges, labels),
            to_original,
        )
    }

    /// Multiplies the weight of every edge whose endpoints share a group by that
    /// group's factor.
    ///
    /// `group[v]` is the group of node `v` or `usize::MAX` for none. Factors must
    /// lie in `[0, 1]`; edges that end up with weight zero are removed.
    pub fn scale_within_groups(&mut self, group: &[usize], factors: &[f64]) {
        debug_assert_eq!(group.len(), self.node_count());
        let mut zeroed = false;
        for u in 0..self.node_count() {
            let g = group[u];
            if g == usize::MAX {
                continue;
            }
            let f = factors[g];
            if f == 1.0 {
                continue;
            }
            for e in self.offsets[u]..self.offsets[u + 1] {
                if group[self.targets[e]] == g {
                    self.weights[e] *= f;
                    zeroed |= self.weights[e] <= 0.0;
                }
            }
        }
        if zeroed {
            let edges: Vec<_> = self.edges().filter(|e| e.2 > 0.0).collect();
            *self = Self::from_sorted_edges(self.node_count(), &edges, self.labels.clone());
        } else {
            self.total_weight = self.edges().map(|e| e.2).sum();
        }
    }

    /// Checks the structural invariants: symmetric weights, sorted rows, no
    /// self-loops or zero weights, and a consistent cached total.
    pub fn is_consistent(&self) -> bool {
        let n = self.node_count();
        let mut total = 0.0;
        for u in 0..n {
            let row = &self.targets[self.offsets[u]..self.offsets[u + 1]];
            if row.windows(2).any(|p| p[0] >= p[1]) {
                return false;
            }
            for (v, w) in self.neighbors(u) {
                if v == u || v >= n || !(w > 0.0) || self.weight(v, u) != Some(w) {
                    return false;
                }
                if u < v {
                    total += w;
                }
            }
        }
        libm::fabs(total - self.total_weight) <= 1e-9 * total.max(1.0)
    }
}

impl PartialEq for WeightedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.offsets == other.offsets
            && self.targets == other.targets
            && self.weights == other.weights
            && self.labels.names == other.labels.names
    }
}

/// Incremental construction keyed by label, used by text loaders.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
    edges: Vec<(usize, usize, f64)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Index of `label`, allocating the next dense index on first appearance.
    pub fn node(&mut self, label: &str) -> usize {
        if let Some(&i) = self.index.get(label) {
            return i;
        }
        let i = self.names.len();
        self.names.push(label.to_string());
        self.index.insert(label.to_string(), i);
        i
    }

    pub fn edge(&mut self, u: &str, v: &str, w: f64) -> Result<()> {
        if u == v {
            return Err(Error::SelfLoop(u.to_string()));
        }
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::BadWeight(u.to_string(), v.to_string(), w));
        }
        let (a, b) = (self.node(u), self.node(v));
        self.edges.push((a, b, w));
        Ok(())
    }

    pub fn build(self) -> Result<WeightedGraph> {
        WeightedGraph::from_edges(self.names, self.edges)
    }
}
