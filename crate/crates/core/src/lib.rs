//! Local hidden community detection for weighted undirected graphs.
//!
//! Given a query node, the detector recovers one community per layer: the
//! dominant community the node belongs to and the weaker, hidden ones that
//! are overshadowed by it. The pipeline is
//!
//! 1. [`sampling`]: a seed-centred subgraph is extracted once per query;
//! 2. [`spectral`]: a local spectral method with adaptive seed augmentation
//!    finds the community of the seed in the current (possibly weakened) graph;
//! 3. [`partition`]: the rest of the subgraph is partitioned with Louvain;
//! 4. [`reduction`]: every community of a known layer is weakened so that the
//!    other layers become visible;
//! 5. [`irls`]: steps 2–4 are iterated over layers and refinement rounds.
//!
//! [`synth`] generates multilayer planted-partition benchmarks, [`eval`] holds
//! the evaluation protocol helpers and [`theory`] evaluates the closed-form
//! merge/separation conditions for broken communities.
//!
//! The crate is `no_std` and only needs `alloc`; IO, file formats and the
//! command-line front end live in the companion `irls` crate.
#![no_std]

extern crate alloc;

pub mod error;
pub mod eval;
pub mod graph;
pub mod irls;
pub mod lp;
pub mod partition;
pub mod quality;
pub mod reduction;
pub mod sampling;
pub mod spectral;
pub mod synth;
pub mod theory;

pub use error::{Error, Result};
pub use graph::{NodeSet, WeightedGraph};
pub use partition::Layer;
