//! Command-line front end. Exit codes: 0 success, 1 invalid input or
//! infeasible solution, 2 usage error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use jpavnf_core::exact::solve_exact;
use jpavnf_core::generators::{gen_flows, gen_random_topology, gen_tree, gen_upstream_tree_flows, Seed};
use jpavnf_core::greedy::{solve_fng, solve_frg};
use jpavnf_core::model::{
    build_instance, check_feasible, demand_lower_bound, hosting_nodes, total_instances, NodeIndex, ProblemInstance,
    Solution,
};
use jpavnf_core::rate::Rate;
use jpavnf_core::reductions::reduce_set_cover;
use jpavnf_core::tree::{solve_gft, validate_tree_instance, WaitingOrder};
use serde_json::{json, Value};

use crate::bench::{self, Algorithm, BenchOptions, ExactCap, PathClassArg, RateClassArg};
use crate::fixtures;
use crate::io::{self, InstanceJson, SetCoverJson, SolutionJson};

#[derive(Debug, Parser)]
#[command(name = "jpavnf", version, about = "VNF instance placement and flow allocation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum WaitingOrderArg {
    Deepest,
    Shallowest,
}

impl From<WaitingOrderArg> for WaitingOrder {
    fn from(value: WaitingOrderArg) -> Self {
        match value {
            WaitingOrderArg::Deepest => WaitingOrder::DeepestExitFirst,
            WaitingOrderArg::Shallowest => WaitingOrder::ShallowestExitFirst,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve an instance and print a JSON summary.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum)]
        algorithm: Algorithm,
        /// Tree root for gft; defaults to the instance file's root.
        #[arg(long)]
        root: Option<NodeIndex>,
        /// Include the per-step trace (fng, frg, gft).
        #[arg(long)]
        trace: bool,
        /// Write the solution JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "deepest")]
        waiting_order: WaitingOrderArg,
        /// Branch-and-bound node budget for exact.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Check a solution against an instance.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        solution: PathBuf,
    },
    /// Random connected topology without flows.
    GenTopology {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        edges: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "10")]
        capacity: Rate,
        #[arg(long)]
        out: PathBuf,
    },
    /// Random flows on the topology of an instance file (its flows are replaced).
    GenFlows {
        #[arg(long)]
        topology: PathBuf,
        #[arg(long)]
        flows: usize,
        #[arg(long, value_enum)]
        path_class: PathClassArg,
        #[arg(long, value_enum)]
        rate_class: RateClassArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Overrides the topology file's capacity.
        #[arg(long)]
        capacity: Option<Rate>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Random rooted tree with upstream flows.
    GenTree {
        #[arg(long)]
        nodes: usize,
        #[arg(long, default_value_t = 2)]
        max_children: usize,
        #[arg(long, default_value_t = 0)]
        flows: usize,
        #[arg(long, value_enum, default_value = "large")]
        rate_class: RateClassArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "10")]
        capacity: Rate,
        #[arg(long)]
        out: PathBuf,
    },
    /// Turn a set-cover file into a placement instance.
    ReduceSetcover {
        #[arg(long)]
        setcover: PathBuf,
        #[arg(long)]
        capacity: Rate,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a scenario config file and write result rows as CSV.
    Bench {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_csv: PathBuf,
        /// Fill the runtime_us column (makes the output run-dependent).
        #[arg(long)]
        timing: bool,
    },
    /// Solve every shipped fixture and compare against the known totals.
    Smoke,
}

#[derive(Debug)]
enum Failure {
    /// Invalid input or an infeasible solution.
    Invalid(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Invalid(e.to_string())
    }
}

type CliResult = Result<(), Failure>;

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
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(Failure::Invalid(message)) => {
            eprintln!("error: {message}");
            1
        }
    }
}

fn dispatch(command: Command) -> CliResult {
    match command {
        Command::Solve {
            instance,
            algorithm,
            root,
            trace,
            out,
            waiting_order,
            budget,
        } => solve(
            &instance,
            algorithm,
            root,
            trace,
            out.as_deref(),
            waiting_order.into(),
            budget,
        ),
        Command::Verify { instance, solution } => verify(&instance, &solution),
        Command::GenTopology {
            nodes,
            edges,
            seed,
            capacity,
            out,
        } => {
            let graph = gen_random_topology(nodes, edges, Seed(seed))?;
            let inst = build_instance(graph, vec![], capacity)?;
            io::write_json_atomic(&out, &InstanceJson::from_instance(&inst, None))?;
            Ok(())
        }
        Command::GenFlows {
            topology,
            flows,
            path_class,
            rate_class,
            seed,
            capacity,
            out,
        } => {
            let file: InstanceJson = io::read_json(&topology)?;
            let graph = file.graph()?;
            let capacity = match capacity {
                Some(c) => c,
                None => file.capacity.to_rate()?,
            };
            let generated = gen_flows(
                &graph,
                flows,
                path_class.into(),
                rate_class.into(),
                capacity,
                Seed(seed),
            );
            let inst = build_instance(graph, generated, capacity)?;
            io::write_json_atomic(&out, &InstanceJson::from_instance(&inst, None))?;
            Ok(())
        }
        Command::GenTree {
            nodes,
            max_children,
            flows,
            rate_class,
            seed,
            capacity,
            out,
        } => {
            let (graph, root) = gen_tree(nodes, max_children, Seed(seed))?;
            let bare = validate_tree_instance(&build_instance(graph, vec![], capacity)?, root)?;
            let generated = gen_upstream_tree_flows(&bare, flows, rate_class.into(), Seed(seed));
            let inst = bare.instance().with_flows(generated)?;
            io::write_json_atomic(&out, &InstanceJson::from_instance(&inst, Some(root)))?;
            Ok(())
        }
        Command::ReduceSetcover {
            setcover,
            capacity,
            out,
        } => {
            let sc = io::read_json::<SetCoverJson>(&setcover)?.to_set_cover()?;
            let inst = reduce_set_cover(&sc, capacity)?;
            io::write_json_atomic(&out, &InstanceJson::from_instance(&inst, None))?;
            Ok(())
        }
        Command::Bench {
            config,
            out_csv,
            timing,
        } => {
            let configs = bench::load_scenarios(&config)?;
            let base_dir = config.parent().map(Path::to_path_buf).unwrap_or_default();
            let options = BenchOptions {
                cap: ExactCap::from_env()?,
                timing,
                base_dir,
            };
            let rows = bench::run_scenarios(&configs, &options)?;
            io::write_atomic(&out_csv, &bench::to_csv(&rows)?)?;
            eprintln!("{} rows written to {}", rows.len(), out_csv.display());
            Ok(())
        }
        Command::Smoke => {
            let checks = fixtures::smoke_checks()?;
            let mut failed = 0;
            for c in &checks {
                let status = if c.passed() { "ok" } else { "FAIL" };
                emit(&format!(
                    "{status:4} {}: expected {}, got {}",
                    c.name, c.expected, c.actual
                ));
                failed += usize::from(!c.passed());
            }
            if failed > 0 {
                return Err(Failure::Invalid(format!("{failed} fixture check(s) failed")));
            }
            Ok(())
        }
    }
}

/// Prints a line to stdout, ignoring a closed pipe.
fn emit(line: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{line}");
}

fn placements_by_label(instance: &ProblemInstance, solution: &Solution) -> BTreeMap<String, u64> {
    solution
        .placements
        .iter()
        .map(|(&i, &x)| (instance.graph().label(i).to_owned(), x))
        .collect()
}

fn solve(
    path: &Path,
    algorithm: Algorithm,
    root: Option<NodeIndex>,
    trace: bool,
    out: Option<&Path>,
    order: WaitingOrder,
    budget: Option<u64>,
) -> CliResult {
    let file: InstanceJson = io::read_json(path)?;
    let mut extra = serde_json::Map::new();
    let (instance, solution) = match algorithm {
        Algorithm::Fng | Algorithm::Frg => {
            let instance = file.to_instance()?;
            let result = if algorithm == Algorithm::Fng {
                solve_fng(&instance)
            } else {
                solve_frg(&instance)
            };
            if trace {
                extra.insert(
                    "trace".into(),
                    serde_json::to_value(io::greedy_trace_json(&instance, &result))?,
                );
            }
            (instance, result.solution)
        }
        Algorithm::Gft => {
            let tree = file.to_tree(root)?;
            let result = solve_gft(&tree, order);
            if trace {
                extra.insert(
                    "trace".into(),
                    serde_json::to_value(io::gft_trace_json(tree.instance(), &result))?,
                );
            }
            (tree.instance().clone(), result.solution)
        }
        Algorithm::Exact => {
            let instance = file.to_instance()?;
            let result = solve_exact(&instance, budget);
            extra.insert("proven_optimal".into(), Value::Bool(result.proven_optimal));
            extra.insert("nodes_explored".into(), result.nodes_explored.into());
            (instance, result.solution)
        }
    };
    if !check_feasible(&instance, &solution)?.is_feasible() {
        return Err(Failure::Invalid(format!("{algorithm} returned an infeasible solution")));
    }
    let mut summary = json!({
        "algorithm": algorithm.name(),
        "total_vnf": total_instances(&solution),
        "hosting_nodes": hosting_nodes(&solution),
        "lower_bound": demand_lower_bound(&instance),
        "placements": placements_by_label(&instance, &solution),
    });
    summary.as_object_mut().expect("object").extend(extra);
    emit(&serde_json::to_string_pretty(&summary)?);
    if let Some(out) = out {
        io::write_json_atomic(out, &SolutionJson::from_solution(&instance, &solution))?;
    }
    Ok(())
}

fn verify(instance: &Path, solution: &Path) -> CliResult {
    let instance = io::read_json::<InstanceJson>(instance)?.to_instance()?;
    let solution = io::read_json::<SolutionJson>(solution)?.to_solution(&instance)?;
    let report = check_feasible(&instance, &solution)?;
    for (j, missing) in &report.flow_violations {
        eprintln!("flow {} is short by {missing}", instance.flow(*j).id);
    }
    for (i, excess) in &report.node_violations {
        eprintln!("node {} is over capacity by {excess}", instance.graph().label(*i));
    }
    if !report.is_feasible() {
        return Err(Failure::Invalid("solution is infeasible".into()));
    }
    emit(&format!(
        "feasible: {} instances on {} nodes",
        total_instances(&solution),
        hosting_nodes(&solution)
    ));
    Ok(())
}
