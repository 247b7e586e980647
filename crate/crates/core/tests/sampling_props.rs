mod common;

use std::collections::VecDeque;

use common::arb_graph;
use irls_core::sampling::{bfs_sample, SamplingParams};
use irls_core::{NodeSet, WeightedGraph};
use proptest::prelude::*;

fn distances(g: &WeightedGraph, seed: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.node_count()];
    dist[seed] = 0;
    let mut queue = VecDeque::from([seed]);
    while let Some(u) = queue.pop_front() {
        for (v, _) in g.neighbors(u) {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

proptest! {
    #[test]
    fn unfiltered_sample_is_the_ball(g in arb_graph(30), seed in 0usize..30, steps in 1usize..4) {
        let seed = seed % g.node_count();
        prop_assume!(g.degree(seed) > 0);
        let params = SamplingParams { bfs_steps: steps, inward_threshold: 0.0, max_nodes: 1000, walk_steps: 3 };
        let s = bfs_sample(&g, seed, &params).unwrap();
        let dist = distances(&g, seed);
        let ball: Vec<usize> = (0..g.node_count()).filter(|&v| dist[v] <= steps).collect();
        prop_assert_eq!(&s.to_original, &ball);
        prop_assert_eq!(s.to_original[s.seed_local], seed);
    }

    #[test]
    fn sample_invariants(
        g in arb_graph(30),
        seed in 0usize..30,
        threshold in 0.0f64..=1.0,
        max_nodes in 1usize..12,
        steps in 1usize..4,
    ) {
        let seed = seed % g.node_count();
        prop_assume!(g.degree(seed) > 0);
        let params = SamplingParams { bfs_steps: steps, inward_threshold: threshold, max_nodes, walk_steps: 2 };
        let s = bfs_sample(&g, seed, &params).unwrap();
        let set = NodeSet::new(s.to_original.clone());
        prop_assert!(s.to_original.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(set.contains(seed));
        for (v, _) in g.neighbors(seed) {
            prop_assert!(set.contains(v));
        }
        prop_assert!(set.len() <= max_nodes.max(1 + g.degree(seed)));
        let dist = distances(&g, seed);
        prop_assert!(set.iter().all(|v| dist[v] <= steps));
        let (direct, _) = g.induced_subgraph(&set);
        prop_assert_eq!(&s.subgraph, &direct);
    }
}

#[test]
fn isolated_seed_rejected() {
    let g = WeightedGraph::from_index_edges(3, vec![(0, 1, 1.0)]).unwrap();
    assert_eq!(bfs_sample(&g, 2, &SamplingParams::default()).unwrap_err().name(), "IsolatedSeed");
}
