//! Instances, solutions, validation, feasibility checking and solution metrics.
//!
//! Nodes and flows are identified by dense 0-based indices. Node labels and
//! flow ids are kept for the I/O boundary only.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;
use num_traits::One;

use crate::rate::{Rate, Rational};

pub type NodeIndex = usize;
pub type FlowIndex = usize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("graph has no nodes")]
    EmptyGraph,
    #[error("label list has {labels} entries but graph has {nodes} nodes")]
    LabelCount { labels: usize, nodes: usize },
    #[error("duplicate node label {0:?}")]
    DuplicateLabel(String),
    #[error("edge ({0}, {1}) references a node outside the graph")]
    EdgeOutOfRange(NodeIndex, NodeIndex),
    #[error("self-loop at node {0}")]
    SelfLoop(NodeIndex),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(NodeIndex, NodeIndex),
    #[error("graph is disconnected: node {0} is unreachable from node 0")]
    Disconnected(NodeIndex),
    #[error("capacity must be strictly positive, got {0}")]
    NonPositiveCapacity(Rate),
    #[error("duplicate flow id {0:?}")]
    DuplicateFlowId(String),
    #[error("flow {0:?} has an empty path")]
    EmptyPath(String),
    #[error("flow {flow:?} path references node {node} outside the graph")]
    PathNodeOutOfRange { flow: String, node: NodeIndex },
    #[error("flow {flow:?} visits node {node} more than once")]
    RepeatedNode { flow: String, node: NodeIndex },
    #[error("flow {flow:?} path uses missing edge ({from}, {to})")]
    MissingEdge {
        flow: String,
        from: NodeIndex,
        to: NodeIndex,
    },
    #[error("solution references unknown flow index {0}")]
    UnknownFlow(FlowIndex),
    #[error("solution references unknown node {0}")]
    UnknownNode(NodeIndex),
    #[error("allocation for flow {flow:?} at node {node}, which is not on its path")]
    AllocationOffPath { flow: String, node: NodeIndex },
    #[error("density {0} is below 1")]
    DensityBelowOne(Rational),
}

/// Connected undirected simple graph with uniquely labelled nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    edges: BTreeSet<(NodeIndex, NodeIndex)>,
    adjacency: Vec<Vec<NodeIndex>>,
}

impl Graph {
    pub fn new<I>(labels: Vec<String>, edges: I) -> Result<Graph, ModelError>
    where
        I: IntoIterator<Item = (NodeIndex, NodeIndex)>,
    {
        let n = labels.len();
        if n == 0 {
            return Err(ModelError::EmptyGraph);
        }
        let mut seen = BTreeSet::new();
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(ModelError::DuplicateLabel(label.clone()));
            }
        }
        let mut edge_set = BTreeSet::new();
        let mut adjacency = vec![Vec::new(); n];
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(ModelError::EdgeOutOfRange(a, b));
            }
            if a == b {
                return Err(ModelError::SelfLoop(a));
            }
            if !edge_set.insert((a.min(b), a.max(b))) {
                return Err(ModelError::DuplicateEdge(a, b));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let graph = Graph {
            labels,
            edges: edge_set,
            adjacency,
        };
        if let Some(unreached) = graph.first_unreachable() {
            return Err(ModelError::Disconnected(unreached));
        }
        Ok(graph)
    }

    /// Graph with labels `v1..vn`.
    pub fn numbered<I>(n: usize, edges: I) -> Result<Graph, ModelError>
    where
        I: IntoIterator<Item = (NodeIndex, NodeIndex)>,
    {
        Graph::new((1..=n).map(|i| format!("v{i}")).collect(), edges)
    }

    fn first_unreachable(&self) -> Option<NodeIndex> {
        let mut visited = vec![false; self.node_count()];
        let mut queue = VecDeque::from([0]);
        visited[0] = true;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if !visited[v] {
                    visited[v] = true;
                    queue.push_back(v);
                }
            }
        }
        visited.iter().position(|&v| !v)
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, node: NodeIndex) -> &str {
        &self.labels[node]
    }

    pub fn node_by_label(&self, label: &str) -> Option<NodeIndex> {
        self.labels.iter().position(|l| l == label)
    }

    /// Edges as `(min, max)` pairs in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeIndex, NodeIndex)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, a: NodeIndex, b: NodeIndex) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// Neighbours in ascending index order.
    pub fn neighbors(&self, node: NodeIndex) -> &[NodeIndex] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: NodeIndex) -> usize {
        self.adjacency[node].len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flow {
    pub id: String,
    pub rate: Rate,
    pub path: Vec<NodeIndex>,
}

impl Flow {
    pub fn new(id: impl Into<String>, rate: Rate, path: Vec<NodeIndex>) -> Flow {
        Flow {
            id: id.into(),
            rate,
            path,
        }
    }

    pub fn passes(&self, node: NodeIndex) -> bool {
        self.path.contains(&node)
    }

    /// The node through which the flow leaves the network.
    pub fn exit(&self) -> NodeIndex {
        *self.path.last().expect("validated flow paths are non-empty")
    }
}

/// A validated `(G, F, R)` triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemInstance {
    graph: Graph,
    flows: Vec<Flow>,
    capacity: Rate,
}

/// Validates flows and capacity against `graph`.
pub fn build_instance(graph: Graph, flows: Vec<Flow>, capacity: Rate) -> Result<ProblemInstance, ModelError> {
    if capacity.is_zero() {
        return Err(ModelError::NonPositiveCapacity(capacity));
    }
    let n = graph.node_count();
    let mut ids = BTreeSet::new();
    for flow in &flows {
        if !ids.insert(flow.id.as_str()) {
            return Err(ModelError::DuplicateFlowId(flow.id.clone()));
        }
        if flow.path.is_empty() {
            return Err(ModelError::EmptyPath(flow.id.clone()));
        }
        let mut on_path = BTreeSet::new();
        for &node in &flow.path {
            if node >= n {
                return Err(ModelError::PathNodeOutOfRange {
                    flow: flow.id.clone(),
                    node,
                });
            }
            if !on_path.insert(node) {
                return Err(ModelError::RepeatedNode {
                    flow: flow.id.clone(),
                    node,
                });
            }
        }
        for hop in flow.path.windows(2) {
            if !graph.has_edge(hop[0], hop[1]) {
                return Err(ModelError::MissingEdge {
                    flow: flow.id.clone(),
                    from: hop[0],
                    to: hop[1],
                });
            }
        }
    }
    Ok(ProblemInstance { graph, flows, capacity })
}

impl ProblemInstance {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn flows(&self) -> &[Flow] {
        &self.flows
    }

    pub fn flow(&self, index: FlowIndex) -> &Flow {
        &self.flows[index]
    }

    pub fn capacity(&self) -> Rate {
        self.capacity
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn flow_count(&self) -> usize {
        self.flows.len()
    }

    pub fn flow_index(&self, id: &str) -> Option<FlowIndex> {
        self.flows.iter().position(|f| f.id == id)
    }

    /// `D`, the sum of all flow rates.
    pub fn total_demand(&self) -> Rate {
        self.flows.iter().map(|f| f.rate).sum()
    }

    /// Same topology and capacity with a different flow set.
    pub fn with_flows(&self, flows: Vec<Flow>) -> Result<ProblemInstance, ModelError> {
        build_instance(self.graph.clone(), flows, self.capacity)
    }

    pub fn into_parts(self) -> (Graph, Vec<Flow>, Rate) {
        (self.graph, self.flows, self.capacity)
    }
}

/// `L_i` for every node: the flows whose path contains node `i`.
pub fn passing_sets(instance: &ProblemInstance) -> Vec<BTreeSet<FlowIndex>> {
    let mut sets = vec![BTreeSet::new(); instance.node_count()];
    for (j, flow) in instance.flows.iter().enumerate() {
        for &node in &flow.path {
            sets[node].insert(j);
        }
    }
    sets
}

/// Instance counts `x_i` and allocations `r_ij`.
///
/// Absent keys mean zero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Solution {
    pub placements: BTreeMap<NodeIndex, u64>,
    pub allocations: BTreeMap<(FlowIndex, NodeIndex), Rate>,
}

impl Solution {
    pub fn new() -> Solution {
        Solution::default()
    }

    /// Adds `count` instances at `node`.
    pub fn place(&mut self, node: NodeIndex, count: u64) {
        if count > 0 {
            *self.placements.entry(node).or_insert(0) += count;
        }
    }

    /// Adds `amount` to `r_{node, flow}`.
    pub fn allocate(&mut self, flow: FlowIndex, node: NodeIndex, amount: Rate) {
        if !amount.is_zero() {
            *self.allocations.entry((flow, node)).or_insert(Rate::ZERO) += amount;
        }
    }

    pub fn instances_at(&self, node: NodeIndex) -> u64 {
        self.placements.get(&node).copied().unwrap_or(0)
    }

    /// `Σ_j r_ij` for one node.
    pub fn load(&self, node: NodeIndex) -> Rate {
        self.allocations
            .iter()
            .filter(|((_, i), _)| *i == node)
            .map(|(_, r)| *r)
            .sum()
    }

    /// `Σ_i r_ij` for one flow.
    pub fn received(&self, flow: FlowIndex) -> Rate {
        self.allocations
            .iter()
            .filter(|((j, _), _)| *j == flow)
            .map(|(_, r)| *r)
            .sum()
    }

    /// Nodes at which `flow` receives a non-zero allocation.
    pub fn nodes_serving(&self, flow: FlowIndex) -> Vec<NodeIndex> {
        self.allocations
            .iter()
            .filter(|((j, _), r)| *j == flow && !r.is_zero())
            .map(|((_, i), _)| *i)
            .collect()
    }

    /// Dense placement vector of length `n`.
    pub fn placement_vector(&self, n: usize) -> Vec<u64> {
        (0..n).map(|i| self.instances_at(i)).collect()
    }
}

/// Outcome of checking a solution against the flow and node constraints.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FeasibilityReport {
    /// Flows that receive less than their rate, with the shortfall.
    pub flow_violations: Vec<(FlowIndex, Rate)>,
    /// Nodes whose load exceeds `x_i·R`, with the excess.
    pub node_violations: Vec<(NodeIndex, Rate)>,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.flow_violations.is_empty() && self.node_violations.is_empty()
    }
}

/// Checks both constraint families exactly. Allocations that reference a node
/// outside the flow's path are structural errors, not violations.
pub fn check_feasible(instance: &ProblemInstance, solution: &Solution) -> Result<FeasibilityReport, ModelError> {
    let n = instance.node_count();
    let m = instance.flow_count();
    if let Some(&node) = solution.placements.keys().find(|&&i| i >= n) {
        return Err(ModelError::UnknownNode(node));
    }
    let mut received = vec![Rate::ZERO; m];
    let mut load = vec![Rate::ZERO; n];
    for (&(j, i), &amount) in &solution.allocations {
        if j >= m {
            return Err(ModelError::UnknownFlow(j));
        }
        if i >= n {
            return Err(ModelError::UnknownNode(i));
        }
        if !instance.flows[j].passes(i) {
            return Err(ModelError::AllocationOffPath {
                flow: instance.flows[j].id.clone(),
                node: i,
            });
        }
        received[j] += amount;
        load[i] += amount;
    }
    let flow_violations = instance
        .flows
        .iter()
        .zip(&received)
        .enumerate()
        .filter(|(_, (flow, got))| **got < flow.rate)
        .map(|(j, (flow, got))| (j, flow.rate.saturating_sub(*got)))
        .collect();
    let node_violations = load
        .iter()
        .enumerate()
        .filter_map(|(i, used)| {
            let cap = instance.capacity.times(solution.instances_at(i));
            (*used > cap).then(|| (i, used.saturating_sub(cap)))
        })
        .collect();
    Ok(FeasibilityReport {
        flow_violations,
        node_violations,
    })
}

/// `Σ_i x_i`.
pub fn total_instances(solution: &Solution) -> u64 {
    solution.placements.values().sum()
}

/// Number of nodes with at least one instance.
pub fn hosting_nodes(solution: &Solution) -> u64 {
    solution.placements.values().filter(|&&x| x > 0).count() as u64
}

/// Average number of instances per hosting node; `None` for an empty solution.
pub fn density(solution: &Solution) -> Option<Rational> {
    let hosts = hosting_nodes(solution);
    (hosts > 0).then(|| Ratio::new(i128::from(total_instances(solution)), i128::from(hosts)))
}

/// `A/(A-1)` for a density `A > 1`; `None` when `A = 1`.
pub fn density_ratio_bound(density: Rational) -> Result<Option<Rational>, ModelError> {
    let one = Rational::one();
    if density < one {
        Err(ModelError::DensityBelowOne(density))
    } else if density == one {
        Ok(None)
    } else {
        Ok(Some(density / (density - one)))
    }
}

/// `ceil(D/R)`: no feasible solution uses fewer instances.
pub fn demand_lower_bound(instance: &ProblemInstance) -> u64 {
    instance.total_demand().ceil_div(instance.capacity)
}
