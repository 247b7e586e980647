//! Seed-centred subgraph sampling: a filtered breadth-first search followed,
//! when the sample is too large, by random-walk trimming.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{NodeSet, WeightedGraph};

#[derive(Debug, Clone, PartialEq)]
pub struct SamplingParams {
    pub bfs_steps: usize,
    /// Minimal fraction of a candidate's edge weight that must attach to
    /// already admitted nodes.
    pub inward_threshold: f64,
    pub max_nodes: usize,
    pub walk_steps: usize,
}

impl Default for SamplingParams {
    fn default() -> Self {
        Self::synthetic()
    }
}

impl SamplingParams {
    pub fn synthetic() -> Self {
        SamplingParams {
            bfs_steps: 3,
            inward_threshold: 0.1,
            max_nodes: 10_000,
            walk_steps: 3,
        }
    }

    pub fn real() -> Self {
        SamplingParams {
            max_nodes: 5_000,
            ..Self::synthetic()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.bfs_steps == 0 || self.max_nodes == 0 || self.walk_steps == 0 {
            return Err(Error::InvalidParameter("sampling counts must be positive"));
        }
        if !(0.0..=1.0).contains(&self.inward_threshold) {
            return Err(Error::InvalidParameter("inward threshold must lie in [0, 1]"));
        }
        Ok(())
    }
}

/// A sampled subgraph and its embedding into the original graph.
#[derive(Debug, Clone)]
pub struct SampleResult {
    pub subgraph: WeightedGraph,
    /// Local index → original index, strictly increasing.
    pub to_original: Vec<usize>,
    pub seed_local: usize,
}

impl SampleResult {
    /// The whole graph as its own sample.
    pub fn identity(g: &WeightedGraph, seed: usize) -> Self {
        SampleResult {
            subgraph: g.clone(),
            to_original: (0..g.node_count()).collect(),
            seed_local: seed,
        }
    }

    pub fn local_of(&self, original: usize) -> Option<usize> {
        self.to_original.binary_search(&original).ok()
    }
}

/// Samples the neighbourhood of `seed`.
///
/// Breadth-first search collects the ball of radius `bfs_steps`. The seed and
/// its neighbours are always kept; every other node of the ball is kept when
/// the share of its weighted degree that stays inside the ball reaches the
/// inward threshold. If more than `max_nodes` nodes remain, the sample is
/// trimmed by walk mass while keeping the seed and its neighbours.
pub fn bfs_sample(g: &WeightedGraph, seed: usize, params: &SamplingParams) -> Result<SampleResult> {
    params.validate()?;
    if g.weighted_degree(seed)? <= 0.0 {
        return Err(Error::IsolatedSeed(seed));
    }
    let n = g.node_count();
    let mut in_ball = vec![false; n];
    in_ball[seed] = true;
    let mut ball = vec![seed];
    let mut frontier = vec![seed];
    for _ in 0..params.bfs_steps {
        let mut next = Vec::new();
        for &u in &frontier {
            for (v, _) in g.neighbors(u) {
                if !in_ball[v] {
                    in_ball[v] = true;
                    next.push(v);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        ball.extend_from_slice(&next);
        frontier = next;
    }
    let forced = 1 + g.degree(seed);

    let mut members: Vec<usize> = ball[..forced].to_vec();
    members.extend(ball[forced..].iter().copied().filter(|&v| {
        let total = g.strength(v);
        let inward: f64 = g.neighbors(v).filter(|&(u, _)| in_ball[u]).map(|(_, w)| w).sum();
        inward >= params.inward_threshold * total
    }));

    let keep: NodeSet = if members.len() > params.max_nodes {
        let kept: NodeSet = members.iter().copied().collect();
        let (kept_graph, map) = g.induced_subgraph(&kept);
        let local = |v: usize| map.binary_search(&v).expect("member of the sample");
        let forced_local: Vec<usize> = members[..forced].iter().map(|&v| local(v)).collect();
        trim_by_walk(&kept_graph, local(seed), &forced_local, params.max_nodes, params.walk_steps).map(&map)
    } else {
        members.into_iter().collect()
    };
    let (subgraph, to_original) = g.induced_subgraph(&keep);
    let seed_local = to_original.binary_search(&seed).expect("seed is always kept");
    Ok(SampleResult {
        subgraph,
        to_original,
        seed_local,
    })
}

/// Keeps `seed` plus the `max_nodes − 1` other nodes with the largest mass
/// after `walk_steps` steps of the plain random walk started at `seed`.
/// Ties go to the smaller index.
pub fn random_walk_trim(g: &WeightedGraph, seed: usize, max_nodes: usize, walk_steps: usize) -> NodeSet {
    trim_by_walk(g, seed, &[seed], max_nodes, walk_steps)
}

fn trim_by_walk(g: &WeightedGraph, seed: usize, forced: &[usize], max_nodes: usize, walk_steps: usize) -> NodeSet {
    let n = g.node_count();
    if max_nodes >= n {
        return (0..n).collect();
    }
    let strength: Vec<f64> = (0..n).map(|v| g.strength(v)).collect();
    let mut p = vec![0.0; n];
    p[seed] = 1.0;
    let mut next = vec![0.0; n];
    for _ in 0..walk_steps {
        next.fill(0.0);
        for u in 0..n {
            if p[u] == 0.0 {
                continue;
            }
            if strength[u] <= 0.0 {
                next[u] += p[u];
                continue;
            }
            let share = p[u] / strength[u];
            for (v, w) in g.neighbors(u) {
                next[v] += share * w;
            }
        }
        core::mem::swap(&mut p, &mut next);
    }
    let mut keep = vec![false; n];
    let mut count = 0;
    for &v in forced {
        if !keep[v] {
            keep[v] = true;
            count += 1;
        }
    }
    let mut order: Vec<usize> = (0..n).filter(|&v| !keep[v]).collect();
    order.sort_by(|&a, &b| p[b].total_cmp(&p[a]).then(a.cmp(&b)));
    for v in order.into_iter().take(max_nodes.saturating_sub(count)) {
        keep[v] = true;
    }
    (0..n).filter(|&v| keep[v]).collect()
}
