//! Dataset summary: size, planted-layer modularity and community sizes.

use serde::Serialize;

use irls_core::quality::partition_modularity;
use irls_core::synth::GroundTruth;
use irls_core::WeightedGraph;

use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayerStats {
    pub communities: usize,
    pub mean_size: f64,
    pub modularity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphStats {
    pub nodes: usize,
    pub edges: usize,
    pub total_weight: f64,
    pub layers: Vec<LayerStats>,
}

pub fn graph_stats(g: &WeightedGraph, truth: &GroundTruth) -> Result<GraphStats> {
    let layers = truth
        .layers
        .iter()
        .map(|l| {
            Ok(LayerStats {
                communities: l.len(),
                mean_size: if l.is_empty() { 0.0 } else { l.covers() as f64 / l.len() as f64 },
                modularity: partition_modularity(g, l)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(GraphStats {
        nodes: g.node_count(),
        edges: g.edge_count(),
        total_weight: g.total_weight(),
        layers,
    })
}

impl std::fmt::Display for GraphStats {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "nodes {}", self.nodes)?;
        writeln!(f, "edges {}", self.edges)?;
        for (i, l) in self.layers.iter().enumerate() {
            writeln!(
                f,
                "layer {i} communities {} mean_size {:.2} modularity {:.4}",
                l.communities, l.mean_size, l.modularity
            )?;
        }
        Ok(())
    }
}
