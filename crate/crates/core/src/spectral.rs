//! Local spectral community detection with adaptive seed augmentation.
//!
//! A short lazy random walk started on the seed set spans a local spectral
//! subspace. The sparsest non-negative vector of that subspace that keeps
//! every seed at `1/|S|` or above scores each node's membership likelihood.
//! The seed set is grown from the top of that ranking, and the community is
//! cut either at a known size or at the prefix of maximal weighted local
//! modularity.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{NodeSet, WeightedGraph};
use crate::lp::minimize_free;
use crate::quality::prefix_modularity_scan;

/// Random walk used to build the spectral basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Walk {
    /// `p ← α·p + (1−α)·Pᵀp`.
    Lazy(f64),
    /// Walk on the graph with a unit self-loop added at every node, so a node
    /// of strength `d` keeps `1/(d+1)` of its mass.
    LightLazy,
}

/// Tunables of the local spectral detector.
#[derive(Debug, Clone, PartialEq)]
pub struct LospParams {
    /// Subspace dimension.
    pub dim: usize,
    /// Walk steps taken before the first basis vector is collected.
    pub steps: usize,
    pub walk: Walk,
    /// A node whose score reaches this value may join the seed set.
    pub value_threshold: f64,
    /// A score this many times the next one marks a possible boundary.
    pub ratio_threshold: f64,
    /// Upper bound on the seed set size.
    pub max_seed_set: usize,
    /// Upper bound on the community size when truncating by modularity.
    pub max_community: usize,
    /// Scores within the top `|S|` differing by this factor revoke the last augmentation.
    pub revocation_factor: f64,
}

impl Default for LospParams {
    fn default() -> Self {
        Self::synthetic()
    }
}

impl LospParams {
    pub fn synthetic() -> Self {
        LospParams {
            dim: 3,
            steps: 3,
            walk: Walk::LightLazy,
            value_threshold: 0.3,
            ratio_threshold: 1.05,
            max_seed_set: 18,
            max_community: 150,
            revocation_factor: 2.0,
        }
    }

    pub fn real() -> Self {
        LospParams {
            max_seed_set: 9,
            max_community: 500,
            ..Self::synthetic()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidParameter("subspace dimension must be positive"));
        }
        if let Walk::Lazy(alpha) = self.walk {
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(Error::InvalidParameter("laziness must lie in (0, 1)"));
            }
        }
        if !(self.value_threshold > 0.0 && self.value_threshold < 1.0) {
            return Err(Error::InvalidParameter("value threshold must lie in (0, 1)"));
        }
        if !(self.ratio_threshold > 1.0) {
            return Err(Error::InvalidParameter("ratio threshold must exceed 1"));
        }
        if self.max_seed_set == 0 || self.max_community == 0 {
            return Err(Error::InvalidParameter("size limits must be positive"));
        }
        Ok(())
    }
}

/// Orthonormal basis of the local spectral subspace, one column per vector.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralBasis {
    columns: Vec<Vec<f64>>,
    steps: usize,
    /// The walk iterates spanned fewer than the requested dimensions.
    pub rank_deficient: bool,
}

impl SpectralBasis {
    pub fn from_columns(columns: Vec<Vec<f64>>) -> Self {
        SpectralBasis {
            columns,
            steps: 0,
            rank_deficient: false,
        }
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn node_count(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// `V·u`.
    pub fn combine(&self, u: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.node_count()];
        for (col, &coef) in self.columns.iter().zip(u) {
            for (yi, ci) in y.iter_mut().zip(col) {
                *yi += coef * ci;
            }
        }
        y
    }
}

/// Nodes sorted by descending score, ties broken by ascending index.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedNodes {
    pub order: Vec<usize>,
    pub values: Vec<f64>,
}

impl RankedNodes {
    /// Scores equal up to LP round-off (`1e-12`) are ranked by ascending index.
    pub fn from_scores(scores: &[f64]) -> Self {
        let key: Vec<f64> = scores.iter().map(|&x| libm::round(x * 1e12)).collect();
        let mut order: Vec<usize> = (0..scores.len()).collect();
        order.sort_by(|&a, &b| key[b].total_cmp(&key[a]).then(a.cmp(&b)));
        let values = order.iter().map(|&v| scores[v]).collect();
        RankedNodes { order, values }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn prefix(&self, len: usize) -> NodeSet {
        self.order[..len].iter().copied().collect()
    }
}

/// One step of the walk on column vectors. Mass on isolated nodes stays put.
fn walk_step(g: &WeightedGraph, strength: &[f64], p: &[f64], walk: Walk, out: &mut [f64]) {
    out.fill(0.0);
    for u in 0..g.node_count() {
        if p[u] == 0.0 {
            continue;
        }
        if strength[u] <= 0.0 {
            out[u] += p[u];
            continue;
        }
        let (stay, share) = match walk {
            Walk::Lazy(alpha) => (alpha * p[u], (1.0 - alpha) * p[u] / strength[u]),
            Walk::LightLazy => {
                let s = p[u] / (strength[u] + 1.0);
                (s, s)
            }
        };
        out[u] += stay;
        for (v, w) in g.neighbors(u) {
            out[v] += share * w;
        }
    }
}

/// Builds the orthonormalized span of walk iterates `p_k, …, p_{k+d−1}`
/// started from the uniform distribution on `seeds`.
pub fn build_basis(g: &WeightedGraph, seeds: &NodeSet, params: &LospParams) -> Result<SpectralBasis> {
    if seeds.is_empty() {
        return Err(Error::EmptySeedSet);
    }
    let n = g.node_count();
    if let Some(bad) = seeds.iter().find(|&s| s >= n) {
        return Err(Error::OutOfRange { index: bad, limit: n });
    }
    let strength: Vec<f64> = (0..n).map(|v| g.strength(v)).collect();
    let mut p = vec![0.0; n];
    for s in seeds.iter() {
        p[s] = 1.0 / seeds.len() as f64;
    }
    let mut next = vec![0.0; n];
    for _ in 0..params.steps {
        walk_step(g, &strength, &p, params.walk, &mut next);
        core::mem::swap(&mut p, &mut next);
    }
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(params.dim);
    let mut rank_deficient = false;
    for i in 0..params.dim {
        if i > 0 {
            walk_step(g, &strength, &p, params.walk, &mut next);
            core::mem::swap(&mut p, &mut next);
        }
        match orthogonalize(&p, &columns) {
            Some(col) => columns.push(col),
            None => rank_deficient = true,
        }
    }
    Ok(SpectralBasis {
        columns,
        steps: params.steps,
        rank_deficient,
    })
}

/// Gram–Schmidt with one reorthogonalization pass; `None` if `v` is
/// numerically inside the span of `basis`.
fn orthogonalize(v: &[f64], basis: &[Vec<f64>]) -> Option<Vec<f64>> {
    let norm0 = libm::sqrt(dot(v, v));
    if norm0 == 0.0 {
        return None;
    }
    let mut w = v.to_vec();
    for _ in 0..2 {
        for b in basis {
            let c = dot(&w, b);
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= c * bi;
            }
        }
    }
    let norm = libm::sqrt(dot(&w, &w));
    if norm <= 1e-10 * norm0 {
        return None;
    }
    for wi in w.iter_mut() {
        *wi /= norm;
    }
    Some(w)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solution of the sparsest-indicator program over a spectral basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Indicator {
    pub coefficients: Vec<f64>,
    pub scores: Vec<f64>,
    pub objective: f64,
}

/// Solves `min Σy  s.t.  y = V·u, y ≥ 0, y_i ≥ 1/|S| (i ∈ S)`.
pub fn sparsest_indicator(basis: &SpectralBasis, seeds: &NodeSet) -> Result<Indicator> {
    let n = basis.node_count();
    let d = basis.dim();
    if seeds.is_empty() {
        return Err(Error::EmptySeedSet);
    }
    if let Some(bad) = seeds.iter().find(|&s| s >= n) {
        return Err(Error::OutOfRange { index: bad, limit: n });
    }
    let mut rows = vec![0.0; n * d];
    for (k, col) in basis.columns().iter().enumerate() {
        for (i, &x) in col.iter().enumerate() {
            rows[i * d + k] = x;
        }
    }
    let bound = 1.0 / seeds.len() as f64;
    let mut lower = vec![0.0; n];
    for s in seeds.iter() {
        lower[s] = bound;
    }
    let costs: Vec<f64> = basis.columns().iter().map(|c| c.iter().sum()).collect();
    let sol = minimize_free(&rows, d, &lower, &costs)?;
    if sol.objective < -1e-9 {
        return Err(Error::NumericalFailure("negative sparsest-indicator objective"));
    }
    let scores = basis.combine(&sol.u);
    Ok(Indicator {
        coefficients: sol.u,
        objective: sol.objective,
        scores,
    })
}

/// Ranked scores of the sparsest indicator.
pub fn solve_sparsest_indicator(basis: &SpectralBasis, seeds: &NodeSet) -> Result<RankedNodes> {
    sparsest_indicator(basis, seeds).map(|ind| RankedNodes::from_scores(&ind.scores))
}

/// True when the top `seed_count` scores differ by the revocation factor.
pub fn check_revocation(ranked: &RankedNodes, seed_count: usize) -> bool {
    revocation_with(ranked, seed_count, 2.0)
}

fn revocation_with(ranked: &RankedNodes, seed_count: usize, factor: f64) -> bool {
    let top = seed_count.min(ranked.len());
    if top < 2 {
        return false;
    }
    ranked.values[0] >= factor * ranked.values[top - 1]
}

/// Scores at or below this are LP round-off and count as zero.
const SCORE_FLOOR: f64 = 1e-9;

/// Next seed set: the longest qualifying prefix of the ranking, capped at
/// the maximal seed set size; `current` when nothing qualifies.
///
/// Position `j` qualifies when its score reaches the value threshold or is at
/// least the ratio threshold times the next score.
pub fn augment_seeds(ranked: &RankedNodes, current: &NodeSet, params: &LospParams) -> NodeSet {
    let y = &ranked.values;
    let last = (2 * params.max_seed_set).min(y.len().saturating_sub(1));
    let qualifies = |j: usize| {
        let (a, b) = (y[j - 1], y[j]);
        a > SCORE_FLOOR && (a >= params.value_threshold || b <= SCORE_FLOOR || a / b >= params.ratio_threshold)
    };
    match (1..=last).rev().find(|&j| qualifies(j)) {
        Some(j) => ranked.prefix(j.min(params.max_seed_set)),
        None => current.clone(),
    }
}

/// The `size` top-ranked nodes.
pub fn truncate_by_size(ranked: &RankedNodes, size: usize) -> Result<NodeSet> {
    if size > ranked.len() {
        return Err(Error::OutOfRange {
            index: size,
            limit: ranked.len(),
        });
    }
    Ok(ranked.prefix(size))
}

/// The prefix (of length at most `max_community`) containing `seed` with the
/// largest weighted local modularity; ties go to the shorter prefix.
pub fn truncate_by_modularity(
    g: &WeightedGraph,
    ranked: &RankedNodes,
    max_community: usize,
    seed: usize,
) -> NodeSet {
    let scan = prefix_modularity_scan(g, &ranked.order, max_community);
    let start = ranked.order.iter().position(|&v| v == seed).unwrap_or(0);
    let mut best = start;
    for j in start..scan.len() {
        if scan[j] > scan[best] {
            best = j;
        }
    }
    ranked.prefix((best + 1).min(ranked.len()).max(1))
}

fn cut(
    g: &WeightedGraph,
    ranked: &RankedNodes,
    seed: usize,
    params: &LospParams,
    known_size: Option<usize>,
) -> NodeSet {
    match known_size {
        Some(size) => {
            let size = size.clamp(1, ranked.len());
            let mut members: Vec<usize> = ranked.order[..size].to_vec();
            if !members.contains(&seed) {
                members[size - 1] = seed;
            }
            NodeSet::new(members)
        }
        None => truncate_by_modularity(g, ranked, params.max_community, seed),
    }
}

/// Per-round record of a detection, for diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct LospTrace {
    pub community: NodeSet,
    pub seed_sizes: Vec<usize>,
    pub revoked: bool,
}

/// Detects the community of `seed` in `g`, cut at `known_size` when given and
/// by weighted local modularity otherwise. The result always contains `seed`.
pub fn modified_losp(
    g: &WeightedGraph,
    seed: usize,
    params: &LospParams,
    known_size: Option<usize>,
) -> Result<NodeSet> {
    modified_losp_traced(g, seed, params, known_size).map(|t| t.community)
}

pub fn modified_losp_traced(
    g: &WeightedGraph,
    seed: usize,
    params: &LospParams,
    known_size: Option<usize>,
) -> Result<LospTrace> {
    params.validate()?;
    let strength = g.weighted_degree(seed)?;
    if strength <= 0.0 {
        return Err(Error::IsolatedSeed(seed));
    }
    let mut seeds = NodeSet::new(vec![seed]);
    let mut community: Option<NodeSet> = None;
    let mut seed_sizes = Vec::new();
    let mut revoked = false;
    while seeds.len() <= params.max_seed_set {
        seed_sizes.push(seeds.len());
        let ranked = match build_basis(g, &seeds, params).and_then(|b| solve_sparsest_indicator(&b, &seeds)) {
            Ok(r) => r,
            Err(Error::Infeasible | Error::NumericalFailure(_)) => {
                return match community {
                    Some(c) => Ok(LospTrace {
                        community: c,
                        seed_sizes,
                        revoked,
                    }),
                    None => Err(Error::DetectionFailed { fallback: None }),
                };
            }
            Err(e) => return Err(e),
        };
        if revocation_with(&ranked, seeds.len(), params.revocation_factor) {
            revoked = true;
            if community.is_none() {
                community = Some(cut(g, &ranked, seed, params, known_size));
            }
            break;
        }
        community = Some(cut(g, &ranked, seed, params, known_size));
        let next = augment_seeds(&ranked, &seeds, params);
        if next.len() <= seeds.len() {
            break;
        }
        seeds = next;
    }
    Ok(LospTrace {
        community: community.expect("at least one round runs"),
        seed_sizes,
        revoked,
    })
}
