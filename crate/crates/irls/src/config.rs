//! JSON mirrors of the generator spec and the theorem parameters.

use serde::{Deserialize, Serialize};

use irls_core::synth::{GeneratorSpec, LayerSpec, Sizing};
use irls_core::theory::TheoremParams;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SizingFile {
    Fixed { communities: usize },
    PowerLaw { exponent: f64, min_size: usize, max_size: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerFile {
    pub p: f64,
    #[serde(flatten)]
    pub sizing: SizingFile,
}

/// `{"n": .., "p0": .., "rng_seed": .., "layers": [{"p": .., "communities": ..}, ..]}`.
/// A layer may give `exponent`, `min_size` and `max_size` instead of `communities`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecFile {
    pub n: usize,
    pub p0: f64,
    #[serde(default)]
    pub rng_seed: u64,
    pub layers: Vec<LayerFile>,
}

impl From<SpecFile> for GeneratorSpec {
    fn from(f: SpecFile) -> Self {
        GeneratorSpec {
            n: f.n,
            p0: f.p0,
            rng_seed: f.rng_seed,
            layers: f
                .layers
                .into_iter()
                .map(|l| LayerSpec {
                    p: l.p,
                    sizing: match l.sizing {
                        SizingFile::Fixed { communities } => Sizing::Fixed { communities },
                        SizingFile::PowerLaw {
                            exponent,
                            min_size,
                            max_size,
                        } => Sizing::PowerLaw {
                            exponent,
                            min_size,
                            max_size,
                        },
                    },
                })
                .collect(),
        }
    }
}

impl From<&GeneratorSpec> for SpecFile {
    fn from(s: &GeneratorSpec) -> Self {
        SpecFile {
            n: s.n,
            p0: s.p0,
            rng_seed: s.rng_seed,
            layers: s
                .layers
                .iter()
                .map(|l| LayerFile {
                    p: l.p,
                    sizing: match l.sizing {
                        Sizing::Fixed { communities } => SizingFile::Fixed { communities },
                        Sizing::PowerLaw {
                            exponent,
                            min_size,
                            max_size,
                        } => SizingFile::PowerLaw {
                            exponent,
                            min_size,
                            max_size,
                        },
                    },
                })
                .collect(),
        }
    }
}

/// Theorem parameters by their usual symbols. `r`, `p1` and `p2` are only
/// needed for the weakening check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TheoryFile {
    pub n: f64,
    pub n1: f64,
    pub e1_in: f64,
    pub e1_out: f64,
    pub e: f64,
    pub t: f64,
    #[serde(default)]
    pub r: f64,
    #[serde(default)]
    pub p1: f64,
    #[serde(default)]
    pub p2: f64,
}

impl From<TheoryFile> for TheoremParams {
    fn from(f: TheoryFile) -> Self {
        TheoremParams {
            node_count: f.n,
            community_size: f.n1,
            inner_edges: f.e1_in,
            outer_edges: f.e1_out,
            total_edges: f.e,
            retained: f.t,
            hidden_share: f.r,
            dominant_density: f.p1,
            hidden_density: f.p2,
        }
    }
}
