//! Iterative local refinement over layers, and the global refinement baseline.
//!
//! For a query node the neighbourhood is sampled once. Each layer keeps a
//! partition of the sample that persists across rounds. To refresh layer `i`
//! the pristine sample is copied, every other known layer is weakened on the
//! copy, the seed's community is detected locally and the remainder is
//! partitioned with Louvain.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{NodeSet, WeightedGraph};
use crate::partition::{louvain, partition_without, Layer};
use crate::reduction::weaken_layer;
use crate::sampling::{bfs_sample, SampleResult, SamplingParams};
use crate::spectral::{modified_losp, LospParams};

#[derive(Debug, Clone, PartialEq)]
pub enum Truncation {
    /// Cut at the prefix of maximal weighted local modularity.
    Auto,
    /// Cut every layer at a known community size.
    GroundTruth(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct IrlsConfig {
    pub n_layers: usize,
    pub iterations: usize,
    pub losp: LospParams,
    pub sampling: SamplingParams,
    pub truncation: Truncation,
    /// Shuffles the Louvain visiting order when set.
    pub order_seed: Option<u64>,
}

impl IrlsConfig {
    pub fn new(n_layers: usize) -> Self {
        IrlsConfig {
            n_layers,
            iterations: 10,
            losp: LospParams::synthetic(),
            sampling: SamplingParams::synthetic(),
            truncation: Truncation::Auto,
            order_seed: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_layers == 0 || self.iterations == 0 {
            return Err(Error::InvalidParameter("layer and iteration counts must be positive"));
        }
        if let Truncation::GroundTruth(sizes) = &self.truncation {
            if sizes.len() != self.n_layers || sizes.contains(&0) {
                return Err(Error::InvalidParameter("need one positive size per layer"));
            }
        }
        self.losp.validate()?;
        self.sampling.validate()
    }

    fn known_size(&self, layer: usize) -> Option<usize> {
        match &self.truncation {
            Truncation::Auto => None,
            Truncation::GroundTruth(sizes) => Some(sizes[layer]),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionResult {
    /// The seed's community in each layer, in original indices.
    pub communities: Vec<NodeSet>,
    /// Final partition of the sample for each layer, in original indices.
    pub layers: Vec<Layer>,
    /// `trace[t][i]`: the community found for layer `i` in round `t`.
    pub trace: Vec<Vec<NodeSet>>,
    pub sample_size: usize,
}

/// Samples around `seed` and runs the refinement on the sample.
pub fn irls_detect(g: &WeightedGraph, seed: usize, cfg: &IrlsConfig) -> Result<DetectionResult> {
    cfg.validate()?;
    let sample = bfs_sample(g, seed, &cfg.sampling)?;
    irls_on_sample(&sample, cfg)
}

/// Label-based entry point.
pub fn irls_detect_label(g: &WeightedGraph, seed: &str, cfg: &IrlsConfig) -> Result<DetectionResult> {
    irls_detect(g, g.resolve(seed)?, cfg)
}

/// Runs the refinement rounds on an already drawn sample.
pub fn irls_on_sample(sample: &SampleResult, cfg: &IrlsConfig) -> Result<DetectionResult> {
    cfg.validate()?;
    let pristine = &sample.subgraph;
    let seed = sample.seed_local;
    if pristine.weighted_degree(seed)? <= 0.0 {
        return Err(Error::IsolatedSeed(sample.to_original[seed]));
    }
    let n_layers = cfg.n_layers;
    let mut layers = vec![Layer::empty(); n_layers];
    let mut found: Vec<Option<NodeSet>> = vec![None; n_layers];
    let mut trace = Vec::with_capacity(cfg.iterations);
    for _ in 0..cfg.iterations {
        let mut round = Vec::with_capacity(n_layers);
        for i in 0..n_layers {
            let mut work = pristine.clone();
            for (j, other) in layers.iter().enumerate() {
                if j != i && !other.is_empty() {
                    weaken_layer(&mut work, other);
                }
            }
            let community = match modified_losp(&work, seed, &cfg.losp, cfg.known_size(i)) {
                Ok(c) => c,
                Err(Error::DetectionFailed { .. } | Error::IsolatedSeed(_)) => match &found[i] {
                    Some(c) => c.clone(),
                    None => return Err(Error::DetectionFailed { fallback: None }),
                },
                Err(e) => return Err(e),
            };
            let mut layer = Layer::new(vec![community.clone()]);
            for c in partition_without(&work, &community, cfg.order_seed).communities() {
                layer.push(c.clone());
            }
            layers[i] = layer;
            round.push(community.map(&sample.to_original));
            found[i] = Some(community);
        }
        trace.push(round);
    }
    Ok(DetectionResult {
        communities: trace.last().cloned().unwrap_or_default(),
        layers: layers.iter().map(|l| l.map(&sample.to_original)).collect(),
        trace,
        sample_size: pristine.node_count(),
    })
}

/// Global refinement: every layer is a Louvain partition of the whole graph
/// with all other layers weakened.
pub fn hicode_refine(g: &WeightedGraph, n_layers: usize, iterations: usize, order_seed: Option<u64>) -> Vec<Layer> {
    let mut layers = vec![Layer::empty(); n_layers];
    for _ in 0..iterations {
        for i in 0..n_layers {
            let mut work = g.clone();
            for (j, other) in layers.iter().enumerate() {
                if j != i && !other.is_empty() {
                    weaken_layer(&mut work, other);
                }
            }
            layers[i] = louvain(&work, order_seed);
        }
    }
    layers
}

/// The community of `layer` that contains `seed`.
pub fn extract_seed_community(layer: &Layer, seed: usize) -> Result<NodeSet> {
    layer.community_of(seed).cloned().ok_or(Error::SeedNotCovered(seed))
}
