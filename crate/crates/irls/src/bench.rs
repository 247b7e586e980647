//! Benchmark harness: draws eligible seeds, runs a detector per seed and
//! scores every layer against the planted communities.

use std::fmt::Write as _;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use irls_core::eval::{layer_scores, potential_seeds};
use irls_core::irls::{extract_seed_community, hicode_refine, irls_detect, IrlsConfig, Truncation};
use irls_core::sampling::bfs_sample;
use irls_core::spectral::Walk;
use irls_core::synth::GroundTruth;
use irls_core::{Error as CoreError, NodeSet, WeightedGraph};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// IRLS cut at the planted community sizes.
    IrlsGt,
    /// IRLS cut at maximal local modularity.
    IrlsAuto,
    /// Global refinement run on the seed's sample.
    Hicode,
}

#[derive(Debug, Clone)]
pub struct BenchmarkSettings {
    pub method: Method,
    pub cases: usize,
    pub irls: IrlsConfig,
    /// Drives seed selection.
    pub rng_seed: u64,
    /// Worker threads; 0 picks the rayon default.
    pub jobs: usize,
    /// Record wall-clock seconds per case; otherwise they are reported as 0.
    pub timing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseReport {
    pub case: usize,
    pub seed: String,
    pub f1: Vec<f64>,
    pub seconds: f64,
    pub sample_size: usize,
    /// Name of the error that aborted the case; all its scores are then 0.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub layers: usize,
    pub iterations: usize,
    pub beta: f64,
    pub gamma: f64,
    pub max_seed_set: usize,
    pub max_community: usize,
    pub dim: usize,
    pub steps: usize,
    pub walk: String,
    pub bfs_steps: usize,
    pub inward_threshold: f64,
    pub max_nodes: usize,
    pub walk_steps: usize,
    pub order_seed: Option<u64>,
}

impl From<&IrlsConfig> for ConfigEcho {
    fn from(c: &IrlsConfig) -> Self {
        ConfigEcho {
            layers: c.n_layers,
            iterations: c.iterations,
            beta: c.losp.value_threshold,
            gamma: c.losp.ratio_threshold,
            max_seed_set: c.losp.max_seed_set,
            max_community: c.losp.max_community,
            dim: c.losp.dim,
            steps: c.losp.steps,
            walk: match c.losp.walk {
                Walk::LightLazy => "light-lazy".to_string(),
                Walk::Lazy(a) => format!("lazy({a})"),
            },
            bfs_steps: c.sampling.bfs_steps,
            inward_threshold: c.sampling.inward_threshold,
            max_nodes: c.sampling.max_nodes,
            walk_steps: c.sampling.walk_steps,
            order_seed: c.order_seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkReport {
    pub method: Method,
    pub rng_seed: u64,
    pub eligible_seeds: usize,
    pub cases: Vec<CaseReport>,
    pub layer_means: Vec<f64>,
    pub grand_mean: f64,
    pub config: ConfigEcho,
}

/// Draws `cases` seeds from the eligible pool, without replacement unless the
/// pool is smaller than `cases`.
pub fn draw_seeds(pool: &NodeSet, cases: usize, rng_seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let pool = pool.as_slice();
    if cases <= pool.len() {
        pool.choose_multiple(&mut rng, cases).copied().collect()
    } else {
        (0..cases).map(|_| *pool.choose(&mut rng).expect("non-empty pool")).collect()
    }
}

/// Runs one method on one seed, returning the community per layer and the sample size.
pub fn detect_case(
    g: &WeightedGraph,
    truth: &GroundTruth,
    seed: usize,
    method: Method,
    cfg: &IrlsConfig,
) -> Result<(Vec<NodeSet>, usize), CoreError> {
    match method {
        Method::IrlsAuto | Method::IrlsGt => {
            let truncation = if method == Method::IrlsGt {
                let sizes = truth.communities_of(seed).iter().map(|c| c.map_or(0, NodeSet::len)).collect();
                Truncation::GroundTruth(sizes)
            } else {
                Truncation::Auto
            };
            let cfg = IrlsConfig {
                truncation,
                ..cfg.clone()
            };
            let res = irls_detect(g, seed, &cfg)?;
            Ok((res.communities, res.sample_size))
        }
        Method::Hicode => {
            cfg.validate()?;
            let sample = bfs_sample(g, seed, &cfg.sampling)?;
            let layers = hicode_refine(&sample.subgraph, cfg.n_layers, cfg.iterations, cfg.order_seed);
            let communities = layers
                .iter()
                .map(|l| extract_seed_community(l, sample.seed_local).map(|c| c.map(&sample.to_original)))
                .collect::<Result<_, _>>()?;
            Ok((communities, sample.subgraph.node_count()))
        }
    }
}

pub fn run_benchmark(g: &WeightedGraph, truth: &GroundTruth, settings: &BenchmarkSettings) -> Result<BenchmarkReport> {
    let cfg = &settings.irls;
    cfg.validate()?;
    if truth.layers.len() != cfg.n_layers {
        return Err(CoreError::InvalidParameter("layer count differs from the planted layers").into());
    }
    if settings.cases == 0 {
        return Err(CoreError::InvalidParameter("case count must be positive").into());
    }
    let pool = potential_seeds(&truth.layers, g, cfg.losp.max_seed_set);
    if pool.is_empty() {
        return Err(CoreError::NoEligibleSeeds.into());
    }
    let seeds = draw_seeds(&pool, settings.cases, settings.rng_seed);
    let run = |(case, &seed): (usize, &usize)| {
        let start = Instant::now();
        let outcome = detect_case(g, truth, seed, settings.method, cfg);
        let seconds = if settings.timing { start.elapsed().as_secs_f64() } else { 0.0 };
        let (f1, sample_size, error) = match outcome {
            Ok((communities, size)) => (layer_scores(&communities, &truth.layers, seed), size, None),
            Err(e) => (vec![0.0; cfg.n_layers], 0, Some(e.name().to_string())),
        };
        CaseReport {
            case,
            seed: g.label(seed).to_string(),
            f1,
            seconds,
            sample_size,
            error,
        }
    };
    let pool_threads = rayon::ThreadPoolBuilder::new()
        .num_threads(settings.jobs)
        .build()
        .map_err(|e| Error::Usage(e.to_string()))?;
    let cases: Vec<CaseReport> = pool_threads.install(|| seeds.par_iter().enumerate().map(run).collect());

    let mut layer_means = vec![0.0; cfg.n_layers];
    for c in &cases {
        for (m, x) in layer_means.iter_mut().zip(&c.f1) {
            *m += x;
        }
    }
    for m in &mut layer_means {
        *m /= cases.len() as f64;
    }
    let grand_mean = layer_means.iter().sum::<f64>() / layer_means.len() as f64;
    Ok(BenchmarkReport {
        method: settings.method,
        rng_seed: settings.rng_seed,
        eligible_seeds: pool.len(),
        cases,
        layer_means,
        grand_mean,
        config: cfg.into(),
    })
}

/// `case,layer,f1,seconds` rows followed by a `layer,mean_f1` summary block.
pub fn report_csv(report: &BenchmarkReport) -> String {
    let mut out = String::from("case,layer,f1,seconds\n");
    for c in &report.cases {
        for (layer, f1) in c.f1.iter().enumerate() {
            let _ = writeln!(out, "{},{},{},{}", c.case, layer, f1, c.seconds);
        }
    }
    out.push_str("\nlayer,mean_f1\n");
    for (layer, m) in report.layer_means.iter().enumerate() {
        let _ = writeln!(out, "{layer},{m}");
    }
    let _ = writeln!(out, "mean,{}", report.grand_mean);
    out
}
