use alloc::string::String;

use crate::graph::NodeSet;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Every failure the algorithms can report.
///
/// [`Error::name`] gives a stable identifier that front ends print on their
/// diagnostic stream.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("duplicate edge {0} -- {1}")]
    DuplicateEdge(String, String),
    #[error("self-loop on node {0}")]
    SelfLoop(String),
    #[error("edge {0} -- {1} has non-positive or non-finite weight {2}")]
    BadWeight(String, String, f64),
    #[error("index {index} out of range (limit {limit})")]
    OutOfRange { index: usize, limit: usize },
    #[error("unknown node label {0:?}")]
    UnknownLabel(String),
    #[error("node set is empty")]
    EmptySet,
    #[error("graph has no edges")]
    NoEdges,
    #[error("community of size {size} in a graph of {n} nodes has no density pair")]
    DegenerateCommunity { size: usize, n: usize },
    #[error("seed node {0} has no incident edges")]
    IsolatedSeed(usize),
    #[error("seed set is empty")]
    EmptySeedSet,
    #[error("the seed constraints cannot be met inside the spectral subspace")]
    Infeasible,
    #[error("numerical failure: {0}")]
    NumericalFailure(&'static str),
    #[error("local community detection failed")]
    DetectionFailed { fallback: Option<NodeSet> },
    #[error("seed node {0} is not covered by the layer")]
    SeedNotCovered(usize),
    #[error("no node satisfies the potential-seed rule")]
    NoEligibleSeeds,
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}

impl Error {
    pub fn name(&self) -> &'static str {
        match self {
            Error::DuplicateEdge(..) => "DuplicateEdge",
            Error::SelfLoop(_) => "SelfLoop",
            Error::BadWeight(..) => "BadWeight",
            Error::OutOfRange { .. } => "OutOfRange",
            Error::UnknownLabel(_) => "UnknownLabel",
            Error::EmptySet => "EmptySet",
            Error::NoEdges => "NoEdges",
            Error::DegenerateCommunity { .. } => "DegenerateCommunity",
            Error::IsolatedSeed(_) => "IsolatedSeed",
            Error::EmptySeedSet => "EmptySeedSet",
            Error::Infeasible => "Infeasible",
            Error::NumericalFailure(_) => "NumericalFailure",
            Error::DetectionFailed { .. } => "DetectionFailed",
            Error::SeedNotCovered(_) => "SeedNotCovered",
            Error::NoEligibleSeeds => "NoEligibleSeeds",
            Error::InvalidParameter(_) => "InvalidParameter",
        }
    }
}
