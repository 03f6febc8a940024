//! Scenario grids: generate instances, run the requested solvers on each,
//! verify every solution and emit one CSV row per (instance, algorithm).

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::time::Instant;

use jpavnf_core::exact::solve_exact;
use jpavnf_core::generators::{
    gen_flows, gen_random_topology, gen_tree, gen_upstream_tree_flows, GenError, PathClass, RateClass, Seed,
};
use jpavnf_core::greedy::{solve_fng, solve_frg};
use jpavnf_core::model::{
    build_instance, check_feasible, demand_lower_bound, hosting_nodes, total_instances, Graph, NodeIndex,
    ProblemInstance, Solution,
};
use jpavnf_core::rate::Rate;
use jpavnf_core::tree::{solve_gft, validate_tree_instance, TreeError, TreeInstance, WaitingOrder};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::io::{read_json, FormatError, InstanceJson, RateJson};

pub const CSV_HEADER: &str =
    "scenario,instance,seed,algorithm,total_vnf,hosting_nodes,lower_bound,ratio_to_lb,runtime_us";
pub const EXACT_CAP_ENV: &str = "JPAVNF_EXACT_CAP";

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("scenario {scenario}: {message}")]
    Config { scenario: String, message: String },
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("{algorithm} produced an infeasible solution on scenario {scenario}, instance {instance}")]
    Infeasible {
        scenario: String,
        instance: u64,
        algorithm: Algorithm,
    },
    #[error("CSV output: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Exact,
    Fng,
    Frg,
    Gft,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Exact => "exact",
            Algorithm::Fng => "fng",
            Algorithm::Frg => "frg",
            Algorithm::Gft => "gft",
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum PathClassArg {
    Short,
    Medium,
    Long,
}

impl From<PathClassArg> for PathClass {
    fn from(value: PathClassArg) -> Self {
        match value {
            PathClassArg::Short => PathClass::Short,
            PathClassArg::Medium => PathClass::Medium,
            PathClassArg::Long => PathClass::Long,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RateClassArg {
    Small,
    Large,
}

impl From<RateClassArg> for RateClass {
    fn from(value: RateClassArg) -> Self {
        match value {
            RateClassArg::Small => RateClass::Small,
            RateClassArg::Large => RateClass::Large,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    Generated {
        nodes: usize,
        edges: usize,
    },
    /// Instance file; its flows are ignored. Relative paths resolve against
    /// the config file's directory.
    File(PathBuf),
    Tree {
        nodes: usize,
        max_children: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Defaults to `s<k>` for the k-th scenario of a file.
    #[serde(default)]
    pub name: Option<String>,
    pub topology: Topology,
    pub flows: usize,
    /// Ignored for tree topologies, whose flows are upstream chains.
    #[serde(default = "default_path_class")]
    pub path_class: PathClassArg,
    pub rate_class: RateClassArg,
    #[serde(default)]
    pub capacity: Option<RateJson>,
    pub algorithms: Vec<Algorithm>,
    pub repetitions: u64,
    pub base_seed: u64,
    /// Fixed seed for generated topologies; by default each instance seed
    /// also draws its own topology.
    #[serde(default)]
    pub topology_seed: Option<u64>,
    /// Branch-and-bound node budget for `exact`.
    #[serde(default)]
    pub exact_budget: Option<u64>,
}

fn default_path_class() -> PathClassArg {
    PathClassArg::Medium
}

/// Largest instance the `exact` algorithm may be scheduled on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactCap {
    pub nodes: usize,
    pub flows: usize,
}

impl Default for ExactCap {
    fn default() -> Self {
        ExactCap { nodes: 15, flows: 12 }
    }
}

impl ExactCap {
    /// `"N"` caps nodes only (flows keep the default); `"N,M"` caps both.
    pub fn parse(text: &str) -> Option<ExactCap> {
        let mut parts = text.split(',').map(|p| p.trim().parse::<usize>());
        let nodes = parts.next()?.ok()?;
        let flows = match parts.next() {
            Some(m) => m.ok()?,
            None => ExactCap::default().flows,
        };
        parts.next().is_none().then_some(ExactCap { nodes, flows })
    }

    pub fn from_env() -> Result<ExactCap, String> {
        match std::env::var(EXACT_CAP_ENV) {
            Ok(v) => ExactCap::parse(&v).ok_or_else(|| format!("{EXACT_CAP_ENV}={v:?} is not N or N,M")),
            Err(_) => Ok(ExactCap::default()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResultRow {
    pub scenario: String,
    pub instance: u64,
    pub seed: u64,
    pub algorithm: Algorithm,
    pub total_vnf: u64,
    pub hosting_nodes: u64,
    pub lower_bound: u64,
    /// `total_vnf / lower_bound` to four decimals; empty when the bound is 0.
    pub ratio_to_lb: String,
    /// Only filled when timing is requested, so that default output is
    /// reproducible byte for byte.
    pub runtime_us: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct BenchOptions {
    pub cap: ExactCap,
    pub timing: bool,
    /// Directory that `Topology::File` paths are relative to.
    pub base_dir: PathBuf,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            cap: ExactCap::default(),
            timing: false,
            base_dir: PathBuf::from("."),
        }
    }
}

/// `a / b` rounded half-up to four decimals.
pub fn ratio_string(a: u64, b: u64) -> String {
    if b == 0 {
        return String::new();
    }
    let scaled = (u128::from(a) * 20_000 + u128::from(b)) / (2 * u128::from(b));
    format!("{}.{:04}", scaled / 10_000, scaled % 10_000)
}

pub fn load_scenarios(path: &Path) -> Result<Vec<ScenarioConfig>, FormatError> {
    read_json(path)
}

struct Prepared {
    name: String,
    config: ScenarioConfig,
    capacity: Rate,
    algorithms: Vec<Algorithm>,
    fixed_graph: Option<Graph>,
}

fn prepare(index: usize, config: &ScenarioConfig, options: &BenchOptions) -> Result<Prepared, BenchError> {
    let name = config.name.clone().unwrap_or_else(|| format!("s{}", index + 1));
    let reject = |message: String| BenchError::Config {
        scenario: name.clone(),
        message,
    };
    let capacity = match &config.capacity {
        Some(c) => c.to_rate().map_err(|e| reject(e.to_string()))?,
        None => Rate::integer(10),
    };
    if capacity.is_zero() {
        return Err(reject("capacity must be positive".into()));
    }
    let algorithms: Vec<Algorithm> = config
        .algorithms
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let is_tree = matches!(config.topology, Topology::Tree { .. });
    if algorithms.contains(&Algorithm::Gft) && !is_tree {
        return Err(reject("gft needs a tree topology".into()));
    }
    let fixed_graph = match &config.topology {
        Topology::File(path) => Some(read_json::<InstanceJson>(&options.base_dir.join(path))?.graph()?),
        _ => None,
    };
    if algorithms.contains(&Algorithm::Exact) {
        let n = match &config.topology {
            Topology::Generated { nodes, .. } | Topology::Tree { nodes, .. } => *nodes,
            Topology::File(_) => fixed_graph.as_ref().map_or(0, Graph::node_count),
        };
        let cap = options.cap;
        if n > cap.nodes || config.flows > cap.flows {
            return Err(reject(format!(
                "exact is capped at n <= {}, m <= {} (got n = {n}, m = {}); set {EXACT_CAP_ENV} to raise it",
                cap.nodes, cap.flows, config.flows
            )));
        }
    }
    Ok(Prepared {
        name,
        config: config.clone(),
        capacity,
        algorithms,
        fixed_graph,
    })
}

enum Built {
    General(ProblemInstance),
    Tree(TreeInstance),
}

impl Built {
    fn instance(&self) -> &ProblemInstance {
        match self {
            Built::General(i) => i,
            Built::Tree(t) => t.instance(),
        }
    }
}

fn build(p: &Prepared, seed: u64) -> Result<Built, BenchError> {
    let c = &p.config;
    let topo_seed = Seed(c.topology_seed.unwrap_or(seed));
    let flow_seed = Seed(seed);
    match &c.topology {
        Topology::Tree { nodes, max_children } => {
            let (graph, root): (Graph, NodeIndex) = gen_tree(*nodes, *max_children, topo_seed)?;
            let bare = validate_tree_instance(
                &build_instance(graph, vec![], p.capacity).map_err(GenError::from)?,
                root,
            )?;
            let flows = gen_upstream_tree_flows(&bare, c.flows, c.rate_class.into(), flow_seed);
            let inst = bare.instance().with_flows(flows).map_err(GenError::from)?;
            Ok(Built::Tree(validate_tree_instance(&inst, root)?))
        }
        Topology::Generated { nodes, edges } => {
            let graph = gen_random_topology(*nodes, *edges, topo_seed)?;
            let flows = gen_flows(
                &graph,
                c.flows,
                c.path_class.into(),
                c.rate_class.into(),
                p.capacity,
                flow_seed,
            );
            Ok(Built::General(
                build_instance(graph, flows, p.capacity).map_err(GenError::from)?,
            ))
        }
        Topology::File(_) => {
            let graph = p.fixed_graph.clone().expect("loaded in prepare");
            let flows = gen_flows(
                &graph,
                c.flows,
                c.path_class.into(),
                c.rate_class.into(),
                p.capacity,
                flow_seed,
            );
            Ok(Built::General(
                build_instance(graph, flows, p.capacity).map_err(GenError::from)?,
            ))
        }
    }
}

fn run_algorithm(built: &Built, algorithm: Algorithm, budget: Option<u64>) -> Solution {
    let instance = built.instance();
    match algorithm {
        Algorithm::Fng => solve_fng(instance).solution,
        Algorithm::Frg => solve_frg(instance).solution,
        Algorithm::Exact => solve_exact(instance, budget).solution,
        Algorithm::Gft => match built {
            Built::Tree(t) => solve_gft(t, WaitingOrder::default()).solution,
            Built::General(_) => unreachable!("rejected in prepare"),
        },
    }
}

fn run_cell(p: &Prepared, r: u64, timing: bool) -> Result<Vec<ResultRow>, BenchError> {
    let seed = p.config.base_seed.wrapping_add(r);
    let built = build(p, seed)?;
    let instance = built.instance();
    let lower_bound = demand_lower_bound(instance);
    let mut rows = Vec::with_capacity(p.algorithms.len());
    for &algorithm in &p.algorithms {
        let start = Instant::now();
        let solution = run_algorithm(&built, algorithm, p.config.exact_budget);
        let elapsed = start.elapsed();
        let feasible = check_feasible(instance, &solution)
            .map(|r| r.is_feasible())
            .unwrap_or(false);
        if !feasible {
            return Err(BenchError::Infeasible {
                scenario: p.name.clone(),
                instance: r,
                algorithm,
            });
        }
        let total = total_instances(&solution);
        rows.push(ResultRow {
            scenario: p.name.clone(),
            instance: r,
            seed,
            algorithm,
            total_vnf: total,
            hosting_nodes: hosting_nodes(&solution),
            lower_bound,
            ratio_to_lb: ratio_string(total, lower_bound),
            runtime_us: timing.then(|| u64::try_from(elapsed.as_micros()).unwrap_or(u64::MAX)),
        });
    }
    Ok(rows)
}

/// Every scenario is validated before any cell runs. Cells run in parallel;
/// rows come back ordered by scenario, repetition and algorithm name.
pub fn run_scenarios(configs: &[ScenarioConfig], options: &BenchOptions) -> Result<Vec<ResultRow>, BenchError> {
    let prepared = configs
        .iter()
        .enumerate()
        .map(|(k, c)| prepare(k, c, options))
        .collect::<Result<Vec<_>, _>>()?;
    let cells: Vec<(&Prepared, u64)> = prepared
        .iter()
        .flat_map(|p| (0..p.config.repetitions).map(move |r| (p, r)))
        .collect();
    let chunks: Vec<Vec<ResultRow>> = cells
        .par_iter()
        .map(|&(p, r)| run_cell(p, r, options.timing))
        .collect::<Result<_, _>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

pub fn run_scenario(config: &ScenarioConfig, options: &BenchOptions) -> Result<Vec<ResultRow>, BenchError> {
    run_scenarios(std::slice::from_ref(config), options)
}

pub fn to_csv(rows: &[ResultRow]) -> Result<Vec<u8>, BenchError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        writer.write_record(CSV_HEADER.split(','))?;
    }
    for row in rows {
        writer.serialize(row)?;
    }
    writer.into_inner().map_err(|e| BenchError::Csv(e.into_error().into()))
}
