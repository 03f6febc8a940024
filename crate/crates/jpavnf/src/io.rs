//! JSON file formats for instances, solutions, set-cover inputs and solver
//! traces, plus atomic file output.
//!
//! Nodes are referenced by 0-based index into the `nodes` label list; flows
//! by their string id. Rates are exact fractions `{"num": p, "den": q}`; on
//! input a bare integer or a `"p/q"` string is accepted as well.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use jpavnf_core::greedy::GreedyResult;
use jpavnf_core::model::{build_instance, Flow, Graph, ModelError, NodeIndex, ProblemInstance, Solution};
use jpavnf_core::rate::{Rate, RateError};
use jpavnf_core::reductions::{ReductionError, SetCoverInstance};
use jpavnf_core::tree::{validate_tree_instance, GftResult, TreeError, TreeInstance};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad rate: {0}")]
    Rate(#[from] RateError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error("unknown flow id {0:?}")]
    UnknownFlow(String),
    #[error("set-cover elements are 1-based, got 0 in subset {0}")]
    ZeroElement(usize),
    #[error("instance has no root; pass one explicitly for tree solvers")]
    MissingRoot,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RateJson {
    Fraction { num: i64, den: i64 },
    Integer(u64),
    Text(String),
}

impl RateJson {
    pub fn to_rate(&self) -> Result<Rate, RateError> {
        match self {
            RateJson::Fraction { num, den } => Rate::new(i128::from(*num), i128::from(*den)),
            RateJson::Integer(k) => Ok(Rate::integer(*k)),
            RateJson::Text(s) => s.parse(),
        }
    }
}

impl From<Rate> for RateJson {
    /// Falls back to `"p/q"` text when a term does not fit in 64 bits.
    fn from(rate: Rate) -> Self {
        match (i64::try_from(rate.numer()), i64::try_from(rate.denom())) {
            (Ok(num), Ok(den)) => RateJson::Fraction { num, den },
            _ => RateJson::Text(rate.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowJson {
    pub id: String,
    pub rate: RateJson,
    pub path: Vec<NodeIndex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceJson {
    pub capacity: RateJson,
    pub nodes: Vec<String>,
    pub edges: Vec<[NodeIndex; 2]>,
    #[serde(default)]
    pub flows: Vec<FlowJson>,
    /// Root for tree instances.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<NodeIndex>,
}

impl InstanceJson {
    pub fn from_instance(instance: &ProblemInstance, root: Option<NodeIndex>) -> InstanceJson {
        let graph = instance.graph();
        InstanceJson {
            capacity: instance.capacity().into(),
            nodes: graph.labels().to_vec(),
            edges: graph.edges().map(|(a, b)| [a, b]).collect(),
            flows: instance
                .flows()
                .iter()
                .map(|f| FlowJson {
                    id: f.id.clone(),
                    rate: f.rate.into(),
                    path: f.path.clone(),
                })
                .collect(),
            root,
        }
    }

    pub fn graph(&self) -> Result<Graph, FormatError> {
        Ok(Graph::new(self.nodes.clone(), self.edges.iter().map(|e| (e[0], e[1])))?)
    }

    pub fn to_instance(&self) -> Result<ProblemInstance, FormatError> {
        let flows = self
            .flows
            .iter()
            .map(|f| Ok(Flow::new(f.id.clone(), f.rate.to_rate()?, f.path.clone())))
            .collect::<Result<Vec<_>, FormatError>>()?;
        Ok(build_instance(self.graph()?, flows, self.capacity.to_rate()?)?)
    }

    /// Tree view rooted at `root`, or at the file's own root.
    pub fn to_tree(&self, root: Option<NodeIndex>) -> Result<TreeInstance, FormatError> {
        let root = root.or(self.root).ok_or(FormatError::MissingRoot)?;
        Ok(validate_tree_instance(&self.to_instance()?, root)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AllocationJson {
    pub flow: String,
    pub node: NodeIndex,
    pub amount: RateJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionJson {
    pub placements: BTreeMap<NodeIndex, u64>,
    pub allocations: Vec<AllocationJson>,
}

impl SolutionJson {
    pub fn from_solution(instance: &ProblemInstance, solution: &Solution) -> SolutionJson {
        SolutionJson {
            placements: solution.placements.clone(),
            allocations: solution
                .allocations
                .iter()
                .map(|(&(j, i), &amount)| AllocationJson {
                    flow: instance.flow(j).id.clone(),
                    node: i,
                    amount: amount.into(),
                })
                .collect(),
        }
    }

    /// Flow ids are resolved against `instance`; node ranges and path
    /// membership are left to the feasibility check.
    pub fn to_solution(&self, instance: &ProblemInstance) -> Result<Solution, FormatError> {
        let mut solution = Solution::new();
        for (&i, &x) in &self.placements {
            solution.place(i, x);
        }
        for a in &self.allocations {
            let j = instance
                .flow_index(&a.flow)
                .ok_or_else(|| FormatError::UnknownFlow(a.flow.clone()))?;
            solution.allocate(j, a.node, a.amount.to_rate()?);
        }
        Ok(solution)
    }
}

/// Set cover with 1-based elements `1..=universe`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetCoverJson {
    pub universe: usize,
    pub subsets: Vec<Vec<usize>>,
}

impl SetCoverJson {
    pub fn from_set_cover(sc: &SetCoverInstance) -> SetCoverJson {
        SetCoverJson {
            universe: sc.universe(),
            subsets: sc.subsets().iter().map(|s| s.iter().map(|e| e + 1).collect()).collect(),
        }
    }

    pub fn to_set_cover(&self) -> Result<SetCoverInstance, FormatError> {
        let mut subsets = Vec::with_capacity(self.subsets.len());
        for (i, s) in self.subsets.iter().enumerate() {
            if s.contains(&0) {
                return Err(FormatError::ZeroElement(i));
            }
            subsets.push(s.iter().map(|e| e - 1).collect::<Vec<_>>());
        }
        Ok(SetCoverInstance::new(self.universe, subsets)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowAmountJson {
    pub flow: String,
    pub amount: RateJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreedyStepJson {
    pub iteration: usize,
    pub node: NodeIndex,
    pub label: String,
    pub processed_flows: Vec<String>,
    pub instances: u64,
    pub allocations: Vec<FlowAmountJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GftStepJson {
    pub node: NodeIndex,
    pub label: String,
    pub leaving_flows: Vec<String>,
    pub leaving_demand: RateJson,
    pub instances: u64,
    /// Flows through the node on arrival with their unprocessed rate.
    pub waiting_list: Vec<FlowAmountJson>,
    pub allocations: Vec<FlowAmountJson>,
}

fn amounts(instance: &ProblemInstance, list: &[(usize, Rate)]) -> Vec<FlowAmountJson> {
    list.iter()
        .map(|&(j, amount)| FlowAmountJson {
            flow: instance.flow(j).id.clone(),
            amount: amount.into(),
        })
        .collect()
}

pub fn greedy_trace_json(instance: &ProblemInstance, result: &GreedyResult) -> Vec<GreedyStepJson> {
    result
        .trace
        .iter()
        .map(|e| GreedyStepJson {
            iteration: e.iteration,
            node: e.chosen_node,
            label: instance.graph().label(e.chosen_node).to_owned(),
            processed_flows: e.processed_flows.iter().map(|&j| instance.flow(j).id.clone()).collect(),
            instances: e.instances_placed,
            allocations: amounts(instance, &e.allocations),
        })
        .collect()
}

pub fn gft_trace_json(instance: &ProblemInstance, result: &GftResult) -> Vec<GftStepJson> {
    result
        .steps
        .iter()
        .map(|s| GftStepJson {
            node: s.node,
            label: instance.graph().label(s.node).to_owned(),
            leaving_flows: s.leaving_flows().iter().map(|&j| instance.flow(j).id.clone()).collect(),
            leaving_demand: s.leaving_demand.into(),
            instances: s.instances_placed,
            waiting_list: amounts(instance, &s.waiting_list),
            allocations: amounts(instance, &s.allocations()),
        })
        .collect()
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, FormatError> {
    let text = fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(serde_json::from_str(&text)?)
}

/// Writes to a temporary file in the target directory, then renames it over
/// `path`.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), FormatError> {
    let io_err = |source| FormatError::Io {
        path: path.display().to_string(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(contents).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

pub fn write_json_atomic<T: Serialize>(path: &Path, value: &T) -> Result<(), FormatError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}
