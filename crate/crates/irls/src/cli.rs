//! Command-line front end.
//!
//! Every flag can also be given in the JSON file passed with `--config`, in
//! a section named after the subcommand and keyed by the flag name with
//! underscores (`{"detect": {"max_nodes": 5000}}`). Flags win over the file.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use irls_core::irls::{irls_detect, IrlsConfig, Truncation};
use irls_core::sampling::SamplingParams;
use irls_core::spectral::{LospParams, Walk};
use irls_core::synth::{generate, GeneratorSpec, GroundTruth};
use irls_core::theory::{merge_polynomial, separation_polynomial, theorem1_check, theorem2_check, TheoremParams};
use irls_core::WeightedGraph;

use crate::bench::{report_csv, run_benchmark, BenchmarkSettings, ConfigEcho, Method};
use crate::config::{SpecFile, TheoryFile};
use crate::error::{Error, Result};
use crate::io::{load_graph, load_truth, open, read_attributes, write_file, write_graph, write_result, write_truth};
use crate::stats::graph_stats;

#[derive(Parser, Debug)]
#[command(name = "irls", version, about = "Local dominant and hidden community detection")]
struct Cli {
    /// JSON file with one section per subcommand.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a multilayer planted-partition graph and its planted communities.
    Generate(GenerateArgs),
    /// Detect the communities of one query node, one per layer.
    Detect(DetectArgs),
    /// Score a detector on randomly drawn eligible seeds.
    Benchmark(BenchmarkArgs),
    /// Evaluate the broken-community conditions for given parameters.
    Theory(TheoryArgs),
    /// Print size, planted modularity and community sizes of a dataset.
    Stats(StatsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Preset {
    Synthetic,
    Real,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum WalkKind {
    LightLazy,
    Lazy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum TruncationKind {
    Auto,
    Sizes,
}

/// Detector tunables shared by `detect` and `benchmark`.
#[derive(Args, Debug, Serialize, Deserialize)]
struct Tuning {
    /// Size limits and sample size for synthetic or real-world data.
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    /// Refinement rounds.
    #[arg(long)]
    iterations: Option<usize>,
    /// Score a node needs to join the seed set.
    #[arg(long)]
    beta: Option<f64>,
    /// Score ratio marking a boundary during seed augmentation.
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    max_seed_set: Option<usize>,
    #[arg(long)]
    max_community: Option<usize>,
    #[arg(long)]
    revocation_factor: Option<f64>,
    /// Spectral subspace dimension.
    #[arg(long)]
    dim: Option<usize>,
    /// Walk steps before the subspace is collected.
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, value_enum)]
    walk: Option<WalkKind>,
    /// Laziness of `--walk lazy`.
    #[arg(long)]
    laziness: Option<f64>,
    #[arg(long)]
    bfs_steps: Option<usize>,
    #[arg(long)]
    inward_threshold: Option<f64>,
    /// Largest sample kept around the seed.
    #[arg(long)]
    max_nodes: Option<usize>,
    #[arg(long)]
    walk_steps: Option<usize>,
    /// Seeds every random choice; without it Louvain visits nodes in index order.
    #[arg(long)]
    rng_seed: Option<u64>,
}

impl Tuning {
    fn config(&self, n_layers: usize) -> Result<IrlsConfig> {
        let mut cfg = IrlsConfig::new(n_layers);
        if self.preset == Some(Preset::Real) {
            cfg.losp = LospParams::real();
            cfg.sampling = SamplingParams::real();
        }
        let losp = &mut cfg.losp;
        set(&mut cfg.iterations, self.iterations);
        set(&mut losp.value_threshold, self.beta);
        set(&mut losp.ratio_threshold, self.gamma);
        set(&mut losp.max_seed_set, self.max_seed_set);
        set(&mut losp.max_community, self.max_community);
        set(&mut losp.revocation_factor, self.revocation_factor);
        set(&mut losp.dim, self.dim);
        set(&mut losp.steps, self.steps);
        losp.walk = match (self.walk, self.laziness) {
            (Some(WalkKind::Lazy), alpha) => Walk::Lazy(alpha.unwrap_or(0.5)),
            (_, Some(_)) => return Err(Error::Usage("--laziness needs --walk lazy".into())),
            _ => Walk::LightLazy,
        };
        let sampling = &mut cfg.sampling;
        set(&mut sampling.bfs_steps, self.bfs_steps);
        set(&mut sampling.inward_threshold, self.inward_threshold);
        set(&mut sampling.max_nodes, self.max_nodes);
        set(&mut sampling.walk_steps, self.walk_steps);
        cfg.order_seed = self.rng_seed;
        Ok(cfg)
    }
}

fn set<T: Copy>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

#[derive(Args, Debug, Serialize, Deserialize)]
struct GenerateArgs {
    /// Generator spec (JSON).
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    out_graph: Option<PathBuf>,
    #[arg(long)]
    out_truth: Option<PathBuf>,
    /// Overrides the seed given in the spec.
    #[arg(long)]
    rng_seed: Option<u64>,
    /// Summary as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize, Deserialize)]
struct DetectArgs {
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Label of the query node.
    #[arg(long)]
    seed: Option<String>,
    /// Number of layers to detect.
    #[arg(long)]
    layers: Option<usize>,
    #[arg(long, value_enum)]
    truncation: Option<TruncationKind>,
    /// Known community size per layer, comma separated.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Result file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run metadata as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    tuning: Tuning,
}

#[derive(Args, Debug, Serialize, Deserialize)]
struct TruthSource {
    /// Planted communities, `layer community label...` per line.
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Node attribute table, one layer per column, instead of `--truth`.
    #[arg(long)]
    attributes: Option<PathBuf>,
    /// Attribute value meaning "unknown".
    #[arg(long)]
    missing_value: Option<String>,
}

impl TruthSource {
    fn load(&self, g: &WeightedGraph) -> Result<GroundTruth> {
        match (&self.truth, &self.attributes) {
            (Some(t), None) => load_truth(t, g),
            (None, Some(a)) => read_attributes(open(a)?, g, self.missing_value.as_deref().unwrap_or("0")),
            _ => Err(Error::Usage("give exactly one of --truth and --attributes".into())),
        }
    }
}

#[derive(Args, Debug, Serialize, Deserialize)]
struct BenchmarkArgs {
    #[arg(long)]
    graph: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    source: TruthSource,
    #[arg(long, value_enum)]
    method: Option<Method>,
    /// Number of seeds (default 100).
    #[arg(long)]
    cases: Option<usize>,
    /// Layers to detect; defaults to the number of planted layers.
    #[arg(long)]
    layers: Option<usize>,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    jobs: Option<usize>,
    /// Record per-case wall-clock seconds (default true).
    #[arg(long)]
    timing: Option<bool>,
    /// CSV report; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    tuning: Tuning,
}

#[derive(Args, Debug, Serialize, Deserialize)]
struct TheoryArgs {
    /// 1: merge/separation conditions; 2: weakening increments.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    check: Option<u8>,
    /// Parameters (JSON): n, n1, e1_in, e1_out, e, t and for check 2 also r, p1, p2.
    #[arg(long)]
    params: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize, Deserialize)]
struct StatsArgs {
    #[arg(long)]
    graph: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    source: TruthSource,
    #[arg(long)]
    json: Option<PathBuf>,
}

/// Parses `args` (program name first), runs the subcommand and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            if matches!(e, Error::Usage(_)) {
                eprintln!("run with --help for usage");
                2
            } else {
                1
            }
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    let config = match &cli.config {
        Some(path) => Some(serde_json::from_reader::<_, Value>(open(path)?)?),
        None => None,
    };
    let section = |name: &str| -> Result<Option<Value>> {
        match &config {
            None => Ok(None),
            Some(Value::Object(map)) => {
                if let Some(k) = map
                    .keys()
                    .find(|k| !["generate", "detect", "benchmark", "theory", "stats"].contains(&k.as_str()))
                {
                    return Err(Error::Usage(format!("unknown config section {k:?}")));
                }
                Ok(map.get(name).cloned())
            }
            Some(_) => Err(Error::Usage("config file must hold a JSON object".into())),
        }
    };
    match cli.command {
        Command::Generate(a) => generate_cmd(merge(&a, section("generate")?)?),
        Command::Detect(a) => detect_cmd(merge(&a, section("detect")?)?),
        Command::Benchmark(a) => benchmark_cmd(merge(&a, section("benchmark")?)?),
        Command::Theory(a) => theory_cmd(merge(&a, section("theory")?)?),
        Command::Stats(a) => stats_cmd(merge(&a, section("stats")?)?),
    }
}

/// Overlays the flags that were given on the config section.
fn merge<T: Serialize + DeserializeOwned>(flags: &T, section: Option<Value>) -> Result<T> {
    let Value::Object(given) = serde_json::to_value(flags)? else {
        unreachable!("argument structs serialize to objects")
    };
    let mut merged = match section {
        None => Map::new(),
        Some(Value::Object(map)) => map,
        Some(_) => return Err(Error::Usage("config sections must be JSON objects".into())),
    };
    if let Some(k) = merged.keys().find(|k| !given.contains_key(*k)) {
        return Err(Error::Usage(format!("unknown config key {k:?}")));
    }
    for (k, v) in given {
        if !v.is_null() {
            merged.insert(k, v);
        }
    }
    Ok(serde_json::from_value(Value::Object(merged))?)
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| Error::Usage(format!("missing required --{flag}")))
}

/// Writes `text` to `path`, or to standard output when there is none.
fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write_file(p, |w| w.write_all(text.as_bytes())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|source| Error::Io {
                path: PathBuf::from("<stdout>"),
                source,
            })
        }
    }
}

fn emit_json(path: Option<&Path>, value: &impl Serialize) -> Result<()> {
    match path {
        Some(p) => emit(Some(p), &(serde_json::to_string_pretty(value)? + "\n")),
        None => Ok(()),
    }
}

fn generate_cmd(a: GenerateArgs) -> Result<()> {
    let file: SpecFile = serde_json::from_reader(open(&require(a.spec, "spec")?)?)?;
    let out_graph = require(a.out_graph, "out-graph")?;
    let out_truth = require(a.out_truth, "out-truth")?;
    let mut spec = GeneratorSpec::from(file);
    set(&mut spec.rng_seed, a.rng_seed);
    let (g, truth) = generate(&spec)?;
    write_file(&out_graph, |w| write_graph(&g, w))?;
    write_file(&out_truth, |w| write_truth(&truth, &g, w))?;
    let communities: Vec<usize> = truth.layers.iter().map(|l| l.len()).collect();
    emit(None, &format!("nodes {} edges {}\n", g.node_count(), g.edge_count()))?;
    emit_json(
        a.json.as_deref(),
        &json!({
            "nodes": g.node_count(),
            "edges": g.edge_count(),
            "rng_seed": spec.rng_seed,
            "communities": communities,
        }),
    )
}

fn detect_cmd(a: DetectArgs) -> Result<()> {
    let g = load_graph(&require(a.graph, "graph")?)?;
    let label = require(a.seed, "seed")?;
    let seed = g.resolve(&label)?;
    let mut cfg = a.tuning.config(require(a.layers, "layers")?)?;
    cfg.truncation = match (a.truncation, a.sizes) {
        (None | Some(TruncationKind::Auto), None) => Truncation::Auto,
        (None | Some(TruncationKind::Sizes), Some(sizes)) => Truncation::GroundTruth(sizes),
        (Some(TruncationKind::Sizes), None) => return Err(Error::Usage("--truncation sizes needs --sizes".into())),
        (Some(TruncationKind::Auto), Some(_)) => {
            return Err(Error::Usage("--sizes conflicts with --truncation auto".into()))
        }
    };
    let res = irls_detect(&g, seed, &cfg)?;
    let mut text = Vec::new();
    write_result(&res.communities, &g, &mut text).expect("writing to memory");
    emit(a.out.as_deref(), &String::from_utf8(text).expect("labels are UTF-8"))?;
    let labels = |c: &irls_core::NodeSet| c.iter().map(|v| g.label(v).to_string()).collect::<Vec<_>>();
    emit_json(
        a.json.as_deref(),
        &json!({
            "seed": label,
            "sample_size": res.sample_size,
            "communities": res.communities.iter().map(labels).collect::<Vec<_>>(),
            "round_sizes": res.trace.iter().map(|r| r.iter().map(|c| c.len()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "config": ConfigEcho::from(&cfg),
        }),
    )
}

fn benchmark_cmd(a: BenchmarkArgs) -> Result<()> {
    let g = load_graph(&require(a.graph, "graph")?)?;
    let truth = a.source.load(&g)?;
    let settings = BenchmarkSettings {
        method: require(a.method, "method")?,
        cases: a.cases.unwrap_or(100),
        irls: a.tuning.config(a.layers.unwrap_or(truth.layers.len()))?,
        rng_seed: a.tuning.rng_seed.unwrap_or(0),
        jobs: a.jobs.unwrap_or(0),
        timing: a.timing.unwrap_or(true),
    };
    let report = run_benchmark(&g, &truth, &settings)?;
    emit(a.out.as_deref(), &report_csv(&report))?;
    emit_json(a.json.as_deref(), &report)
}

fn theory_cmd(a: TheoryArgs) -> Result<()> {
    let check = require(a.check, "check")?;
    let file: TheoryFile = serde_json::from_reader(open(&require(a.params, "params")?)?)?;
    let p = TheoremParams::from(file);
    let value = if check == 1 {
        let c = theorem1_check(&p)?;
        json!({
            "merged_by_partition": c.merged_by_partition,
            "separated_by_local": c.separated_by_local,
            "merge_polynomial": merge_polynomial(&p),
            "separation_polynomial": separation_polynomial(&p),
        })
    } else {
        let w = theorem2_check(&p)?;
        json!({
            "delta_q_separate": w.delta_q_separate,
            "delta_q_merged": w.delta_q_merged,
            "separate": {"internal": w.separate.internal, "external": w.separate.external},
            "merged": {"internal": w.merged.internal, "external": w.merged.external},
        })
    };
    let mut text = String::new();
    if let Value::Object(map) = &value {
        for (k, v) in map {
            if !v.is_object() {
                text += &format!("{k} {v}\n");
            }
        }
    }
    emit(None, &text)?;
    emit_json(a.json.as_deref(), &value)
}

fn stats_cmd(a: StatsArgs) -> Result<()> {
    let g = load_graph(&require(a.graph, "graph")?)?;
    let truth = a.source.load(&g)?;
    let stats = graph_stats(&g, &truth)?;
    emit(None, &stats.to_string())?;
    emit_json(a.json.as_deref(), &stats)
}
