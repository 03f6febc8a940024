//! Greedy-for-tree (GFT): the optimal solver for rooted trees whose flows all
//! run along ancestor chains, plus breaking-point diagnostics.
//!
//! Nodes are addressed as `v_{p,q}`: `p` is the level (root = 1, increasing
//! downwards) and `q` the 1-based position within the level, in input order.
//! GFT visits levels from the deepest up. At a node where unprocessed flows
//! leave the network it places `ceil(d/R)` instances to finish them, then
//! pours the leftover capacity into the other unprocessed flows passing the
//! node, in waiting-list order.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::model::{check_feasible, FlowIndex, ModelError, NodeIndex, ProblemInstance, Solution};
use crate::rate::Rate;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("root {0} is not a node of the graph")]
    RootOutOfRange(NodeIndex),
    #[error("graph is not a tree: {nodes} nodes and {edges} edges")]
    NotATree { nodes: usize, edges: usize },
    #[error("flow {0:?} does not run along an ancestor chain (upstream or downstream)")]
    UpstreamViolation(String),
    #[error("solution is infeasible")]
    Infeasible,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A problem instance on a rooted tree, with every flow path stored as an
/// upward chain (downstream flows are reversed on ingestion).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeInstance {
    instance: ProblemInstance,
    root: NodeIndex,
    parent: Vec<Option<NodeIndex>>,
    level: Vec<usize>,
    position: Vec<usize>,
    enter: Vec<usize>,
    leave: Vec<usize>,
    reversed: Vec<bool>,
}

pub fn validate_tree_instance(instance: &ProblemInstance, root: NodeIndex) -> Result<TreeInstance, TreeError> {
    let graph = instance.graph();
    let n = graph.node_count();
    if root >= n {
        return Err(TreeError::RootOutOfRange(root));
    }
    if graph.edge_count() != n - 1 {
        return Err(TreeError::NotATree {
            nodes: n,
            edges: graph.edge_count(),
        });
    }

    let mut parent = vec![None; n];
    let mut level = vec![0usize; n];
    let mut queue = VecDeque::from([root]);
    level[root] = 1;
    while let Some(u) = queue.pop_front() {
        for &v in graph.neighbors(u) {
            if level[v] == 0 {
                level[v] = level[u] + 1;
                parent[v] = Some(u);
                queue.push_back(v);
            }
        }
    }

    let depth = level.iter().copied().max().unwrap_or(1);
    let mut per_level = vec![0usize; depth + 1];
    let mut position = vec![0usize; n];
    for node in 0..n {
        per_level[level[node]] += 1;
        position[node] = per_level[level[node]];
    }

    // Euler-tour interval for subtree membership.
    let mut children = vec![Vec::new(); n];
    for (node, p) in parent.iter().enumerate() {
        if let Some(p) = *p {
            children[p].push(node);
        }
    }
    let mut enter = vec![0usize; n];
    let mut leave = vec![0usize; n];
    let mut clock = 0;
    let mut stack = vec![(root, false)];
    while let Some((u, done)) = stack.pop() {
        if done {
            leave[u] = clock;
            continue;
        }
        enter[u] = clock;
        clock += 1;
        stack.push((u, true));
        for &c in children[u].iter().rev() {
            stack.push((c, false));
        }
    }

    let mut flows = Vec::with_capacity(instance.flow_count());
    let mut reversed = Vec::with_capacity(instance.flow_count());
    for flow in instance.flows() {
        let up = |path: &[NodeIndex]| path.windows(2).all(|w| parent[w[0]] == Some(w[1]));
        let mut normalized = flow.clone();
        if up(&flow.path) {
            reversed.push(false);
        } else {
            normalized.path.reverse();
            if !up(&normalized.path) {
                return Err(TreeError::UpstreamViolation(flow.id.clone()));
            }
            reversed.push(true);
        }
        flows.push(normalized);
    }

    Ok(TreeInstance {
        instance: instance.with_flows(flows)?,
        root,
        parent,
        level,
        position,
        enter,
        leave,
        reversed,
    })
}

impl TreeInstance {
    /// The instance with every path oriented upwards.
    pub fn instance(&self) -> &ProblemInstance {
        &self.instance
    }

    pub fn root(&self) -> NodeIndex {
        self.root
    }

    pub fn parent(&self, node: NodeIndex) -> Option<NodeIndex> {
        self.parent[node]
    }

    /// `p`; the root is at level 1.
    pub fn level(&self, node: NodeIndex) -> usize {
        self.level[node]
    }

    /// `q`, 1-based within the level.
    pub fn position(&self, node: NodeIndex) -> usize {
        self.position[node]
    }

    pub fn depth(&self) -> usize {
        self.level.iter().copied().max().unwrap_or(1)
    }

    /// Whether the flow's input path ran downstream and was reversed.
    pub fn was_reversed(&self, flow: FlowIndex) -> bool {
        self.reversed[flow]
    }

    /// Whether `node` lies in the subtree rooted at `subtree_root`.
    pub fn in_subtree(&self, node: NodeIndex, subtree_root: NodeIndex) -> bool {
        self.enter[subtree_root] <= self.enter[node] && self.enter[node] < self.leave[subtree_root]
    }

    /// Nodes in GFT visiting order: deepest level first, `q` ascending.
    pub fn visit_order(&self) -> Vec<NodeIndex> {
        let mut order: Vec<NodeIndex> = (0..self.level.len()).collect();
        order.sort_by_key(|&v| (core::cmp::Reverse(self.level[v]), self.position[v]));
        order
    }

    /// Flows whose path has exactly one endpoint inside the subtree rooted at `node`.
    pub fn external_flows(&self, node: NodeIndex) -> BTreeSet<FlowIndex> {
        self.instance
            .flows()
            .iter()
            .enumerate()
            .filter(|(_, f)| {
                let first = self.in_subtree(f.path[0], node);
                let last = self.in_subtree(f.exit(), node);
                first != last
            })
            .map(|(j, _)| j)
            .collect()
    }
}

/// Order in which a node's leftover capacity is poured into waiting flows.
/// Ties are broken by flow id.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum WaitingOrder {
    /// Flows whose exit node has the largest level index `p` first.
    #[default]
    DeepestExitFirst,
    /// Flows whose exit node is closest to the root first. Kept for
    /// comparison; unlike the default it does not always reach the optimum.
    ShallowestExitFirst,
}

/// One node at which GFT placed instances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GftStepEvent {
    pub node: NodeIndex,
    /// Unprocessed flows leaving the network here, each with the remaining
    /// rate it is allocated at this node.
    pub leaving: Vec<(FlowIndex, Rate)>,
    /// `d_{p,q}`.
    pub leaving_demand: Rate,
    pub instances_placed: u64,
    /// `F_{p,q}` as seen on arrival: leaving flows, then the waiting list in
    /// pouring order, each with its unprocessed rate.
    pub waiting_list: Vec<(FlowIndex, Rate)>,
    /// Leftover capacity poured into waiting flows, in order.
    pub waiting_allocations: Vec<(FlowIndex, Rate)>,
}

impl GftStepEvent {
    pub fn leaving_flows(&self) -> Vec<FlowIndex> {
        self.leaving.iter().map(|(j, _)| *j).collect()
    }

    /// Every allocation made at this node: leaving flows first.
    pub fn allocations(&self) -> Vec<(FlowIndex, Rate)> {
        self.leaving.iter().chain(&self.waiting_allocations).copied().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GftResult {
    pub solution: Solution,
    pub steps: Vec<GftStepEvent>,
}

pub fn solve_gft(tree: &TreeInstance, order: WaitingOrder) -> GftResult {
    let instance = &tree.instance;
    let flows = instance.flows();
    let capacity = instance.capacity();
    let n = instance.node_count();

    let mut leaving_at = vec![Vec::new(); n];
    let mut passing = vec![Vec::new(); n];
    for (j, flow) in flows.iter().enumerate() {
        leaving_at[flow.exit()].push(j);
        for &i in &flow.path[..flow.path.len() - 1] {
            passing[i].push(j);
        }
    }
    let exit_level = |j: FlowIndex| tree.level[flows[j].exit()];

    let mut remaining: Vec<Rate> = flows.iter().map(|f| f.rate).collect();
    let mut solution = Solution::new();
    let mut steps = Vec::new();

    for node in tree.visit_order() {
        let leaving: Vec<(FlowIndex, Rate)> = leaving_at[node]
            .iter()
            .filter(|&&j| !remaining[j].is_zero())
            .map(|&j| (j, remaining[j]))
            .collect();
        let demand: Rate = leaving.iter().map(|(_, r)| *r).sum();
        if demand.is_zero() {
            continue;
        }
        let instances = demand.ceil_div(capacity);
        solution.place(node, instances);
        for &(j, amount) in &leaving {
            solution.allocate(j, node, amount);
            remaining[j] = Rate::ZERO;
        }

        let mut waiting: Vec<FlowIndex> = passing[node]
            .iter()
            .copied()
            .filter(|&j| !remaining[j].is_zero())
            .collect();
        match order {
            WaitingOrder::DeepestExitFirst => waiting.sort_by(|&a, &b| {
                exit_level(b)
                    .cmp(&exit_level(a))
                    .then_with(|| flows[a].id.cmp(&flows[b].id))
                    .then(a.cmp(&b))
            }),
            WaitingOrder::ShallowestExitFirst => waiting.sort_by(|&a, &b| {
                exit_level(a)
                    .cmp(&exit_level(b))
                    .then_with(|| flows[a].id.cmp(&flows[b].id))
                    .then(a.cmp(&b))
            }),
        }
        let waiting_list = leaving
            .iter()
            .copied()
            .chain(waiting.iter().map(|&j| (j, remaining[j])))
            .collect();

        let mut left = capacity.times(instances).saturating_sub(demand);
        let mut waiting_allocations = Vec::new();
        for j in waiting {
            if left.is_zero() {
                break;
            }
            let amount = left.min(remaining[j]);
            solution.allocate(j, node, amount);
            remaining[j] = remaining[j].saturating_sub(amount);
            left = left.saturating_sub(amount);
            waiting_allocations.push((j, amount));
        }

        steps.push(GftStepEvent {
            node,
            leaving,
            leaving_demand: demand,
            instances_placed: instances,
            waiting_list,
            waiting_allocations,
        });
    }
    GftResult { solution, steps }
}

/// Nodes hosting an instance whose capacity is not fully used.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BreakingPointReport {
    /// Breaking points with their unused capacity, ascending by node.
    pub breaking_points: BTreeMap<NodeIndex, Rate>,
    /// Every breaking point wastes less than one instance's capacity.
    pub conservative: bool,
    /// External flows of each breaking point; filled only for tree instances.
    pub external_flow_map: BTreeMap<NodeIndex, BTreeSet<FlowIndex>>,
}

impl BreakingPointReport {
    pub fn nodes(&self) -> Vec<NodeIndex> {
        self.breaking_points.keys().copied().collect()
    }
}

/// Rejects infeasible solutions.
pub fn find_breaking_points(instance: &ProblemInstance, solution: &Solution) -> Result<BreakingPointReport, TreeError> {
    if !check_feasible(instance, solution)?.is_feasible() {
        return Err(TreeError::Infeasible);
    }
    let capacity = instance.capacity();
    let mut load = vec![Rate::ZERO; instance.node_count()];
    for (&(_, i), &amount) in &solution.allocations {
        load[i] += amount;
    }
    let breaking_points: BTreeMap<NodeIndex, Rate> = solution
        .placements
        .iter()
        .filter(|(_, &x)| x > 0)
        .filter_map(|(&i, &x)| {
            let unused = capacity.times(x).saturating_sub(load[i]);
            (!unused.is_zero()).then_some((i, unused))
        })
        .collect();
    let conservative = breaking_points.values().all(|&unused| unused < capacity);
    Ok(BreakingPointReport {
        breaking_points,
        conservative,
        external_flow_map: BTreeMap::new(),
    })
}

impl TreeInstance {
    /// [`find_breaking_points`] with the external flows of every breaking point.
    pub fn breaking_points(&self, solution: &Solution) -> Result<BreakingPointReport, TreeError> {
        let mut report = find_breaking_points(&self.instance, solution)?;
        report.external_flow_map = report
            .breaking_points
            .keys()
            .map(|&v| (v, self.external_flows(v)))
            .collect();
        Ok(report)
    }
}
