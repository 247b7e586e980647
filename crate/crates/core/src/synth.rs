//! Multilayer planted-partition generator.
//!
//! Every layer partitions all nodes into communities; each community is an
//! Erdős–Rényi block with the layer's edge probability. A background
//! Erdős–Rényi graph is laid over everything, and the final simple graph is
//! the union of all sampled edges with unit weights.
//!
//! Randomness is split into independent ChaCha streams per layer assignment,
//! per block and for the background, so the output depends only on the seed.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{NodeSet, WeightedGraph};
use crate::partition::Layer;

#[derive(Debug, Clone, PartialEq)]
pub enum Sizing {
    /// Sizes drawn from `P(s) ∝ s^(−exponent)` on `[min_size, max_size]`.
    PowerLaw {
        exponent: f64,
        min_size: usize,
        max_size: usize,
    },
    /// Every node joins one of `communities` uniformly at random.
    Fixed { communities: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayerSpec {
    pub sizing: Sizing,
    /// Intra-community edge probability.
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    pub n: usize,
    pub layers: Vec<LayerSpec>,
    /// Background edge probability.
    pub p0: f64,
    pub rng_seed: u64,
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("node count must be positive"));
        }
        if !(0.0..=1.0).contains(&self.p0) {
            return Err(Error::InvalidParameter("background probability must lie in [0, 1]"));
        }
        for layer in &self.layers {
            if !(0.0..=1.0).contains(&layer.p) {
                return Err(Error::InvalidParameter("block probability must lie in [0, 1]"));
            }
            match layer.sizing {
                Sizing::PowerLaw {
                    exponent,
                    min_size,
                    max_size,
                } => {
                    if min_size == 0 || min_size > max_size || !exponent.is_finite() {
                        return Err(Error::InvalidParameter("power-law sizes need 0 < min ≤ max"));
                    }
                }
                Sizing::Fixed { communities } => {
                    if communities == 0 {
                        return Err(Error::InvalidParameter("community count must be positive"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Two layers of 500 communities (p = 0.30 / 0.20) over 30 000 nodes.
    pub fn syn_l2_3(rng_seed: u64) -> Self {
        Self::fixed(30_000, &[(500, 0.30), (500, 0.20)], 0.001, rng_seed)
    }

    /// 600 communities at p = 0.40 over 300 communities at p = 0.15.
    pub fn syn_l2_2(rng_seed: u64) -> Self {
        Self::fixed(30_000, &[(600, 0.40), (300, 0.15)], 0.001, rng_seed)
    }

    pub fn fixed(n: usize, layers: &[(usize, f64)], p0: f64, rng_seed: u64) -> Self {
        GeneratorSpec {
            n,
            layers: layers
                .iter()
                .map(|&(communities, p)| LayerSpec {
                    sizing: Sizing::Fixed { communities },
                    p,
                })
                .collect(),
            p0,
            rng_seed,
        }
    }
}

/// Planted layers of a generated graph.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GroundTruth {
    pub layers: Vec<Layer>,
}

impl GroundTruth {
    /// For every layer, the community containing `v` (if covered).
    pub fn communities_of(&self, v: usize) -> Vec<Option<&NodeSet>> {
        self.layers.iter().map(|l| l.community_of(v)).collect()
    }
}

/// Draws community sizes that sum to exactly `n`.
///
/// Sizes are drawn until their sum reaches `n`; the last one is cut to the
/// remainder, and a remainder below `min` is merged into the previous
/// community. `n < min` yields a single community.
pub fn sample_powerlaw_sizes<R: Rng + ?Sized>(
    exponent: f64,
    min: usize,
    max: usize,
    n: usize,
    rng: &mut R,
) -> Vec<usize> {
    if n < min || n == 0 {
        return if n == 0 { Vec::new() } else { vec![n] };
    }
    let mut cdf = Vec::with_capacity(max - min + 1);
    let mut acc = 0.0;
    for s in min..=max {
        acc += libm::pow(s as f64, -exponent);
        cdf.push(acc);
    }
    let mut sizes = Vec::new();
    let mut total = 0;
    while total < n {
        let x = rng.gen::<f64>() * acc;
        let idx = cdf.partition_point(|&c| c <= x).min(cdf.len() - 1);
        let s = min + idx;
        let s = s.min(n - total);
        if s < min {
            *sizes.last_mut().expect("a full-size community precedes the tail") += s;
        } else {
            sizes.push(s);
        }
        total += s;
    }
    sizes
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

const ASSIGNMENT: u64 = 0xFFFF_FFFF;
const BACKGROUND: u64 = u64::MAX;

/// Calls `emit(i, j)` (`i > j`) for each pair of `0..k` kept with probability `p`,
/// skipping geometrically between successes.
fn sample_pairs<R: Rng>(k: usize, p: f64, rng: &mut R, mut emit: impl FnMut(usize, usize)) {
    if k < 2 || p <= 0.0 {
        return;
    }
    if p >= 1.0 {
        for i in 1..k {
            for j in 0..i {
                emit(i, j);
            }
        }
        return;
    }
    let log_q = libm::log(1.0 - p);
    let mut v = 1usize;
    let mut w: i64 = -1;
    while v < k {
        let r: f64 = rng.gen();
        w += 1 + libm::floor(libm::log(1.0 - r) / log_q) as i64;
        while w >= v as i64 && v < k {
            w -= v as i64;
            v += 1;
        }
        if v < k {
            emit(v, w as usize);
        }
    }
}

fn assign_layer(spec: &GeneratorSpec, index: usize, layer: &LayerSpec) -> Layer {
    let n = spec.n;
    let mut rng = stream(spec.rng_seed, ((index as u64) << 32) | ASSIGNMENT);
    let groups: Vec<Vec<usize>> = match layer.sizing {
        Sizing::PowerLaw {
            exponent,
            min_size,
            max_size,
        } => {
            let sizes = sample_powerlaw_sizes(exponent, min_size, max_size, n, &mut rng);
            let mut nodes: Vec<usize> = (0..n).collect();
            nodes.shuffle(&mut rng);
            let mut out = Vec::with_capacity(sizes.len());
            let mut start = 0;
            for s in sizes {
                out.push(nodes[start..start + s].to_vec());
                start += s;
            }
            out
        }
        Sizing::Fixed { communities } => {
            let mut out = vec![Vec::new(); communities];
            for v in 0..n {
                out[rng.gen_range(0..communities)].push(v);
            }
            out
        }
    };
    Layer::new(groups.into_iter().map(NodeSet::new).collect())
}

/// Generates the graph and its planted layers.
pub fn generate(spec: &GeneratorSpec) -> Result<(WeightedGraph, GroundTruth)> {
    spec.validate()?;
    let n = spec.n;
    let mut keys: Vec<u64> = Vec::new();
    let key = |a: usize, b: usize| ((a.min(b) as u64) << 32) | a.max(b) as u64;
    let mut layers = Vec::with_capacity(spec.layers.len());
    for (li, layer_spec) in spec.layers.iter().enumerate() {
        let layer = assign_layer(spec, li, layer_spec);
        for (bi, block) in layer.communities().iter().enumerate() {
            let mut rng = stream(spec.rng_seed, ((li as u64) << 32) | bi as u64);
            let members = block.as_slice();
            sample_pairs(members.len(), layer_spec.p, &mut rng, |i, j| {
                keys.push(key(members[i], members[j]));
            });
        }
        layers.push(layer);
    }
    let mut rng = stream(spec.rng_seed, BACKGROUND);
    sample_pairs(n, spec.p0, &mut rng, |i, j| keys.push(key(i, j)));
    keys.sort_unstable();
    keys.dedup();
    let labels = (0..n).map(|i| i.to_string()).collect();
    let graph = WeightedGraph::from_edges(
        labels,
        keys.iter()
            .map(|&k| ((k >> 32) as usize, (k & 0xFFFF_FFFF) as usize, 1.0)),
    )?;
    Ok((graph, GroundTruth { layers }))
}
