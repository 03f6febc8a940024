//! Exact solver for small instances.
//!
//! For a fixed placement vector `x`, an allocation exists iff the bipartite
//! network `source -> flow j (cap d_j) -> node i on P_j (unbounded) -> sink
//! (cap x_i·R)` saturates every source arc. Rates are scaled by the least
//! common multiple of all denominators so the network is integral.
//!
//! The search is a depth-first branch-and-bound over `x`, warm-started with
//! the better greedy solution and run separately on groups of flows that
//! share no node.

use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::greedy::{solve_fng, solve_frg};
use crate::maxflow::FlowNetwork;
use crate::model::{
    demand_lower_bound, passing_sets, total_instances, FlowIndex, NodeIndex, ProblemInstance, Solution,
};
use crate::rate::Rate;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("placement vector has {got} entries, instance has {expected} nodes")]
    Dimension { got: usize, expected: usize },
    #[error("no allocation satisfies every flow under this placement")]
    Infeasible,
}

/// Candidate instance counts, one per node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlacementVector(pub Vec<u64>);

impl PlacementVector {
    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }
}

impl From<Vec<u64>> for PlacementVector {
    fn from(counts: Vec<u64>) -> Self {
        PlacementVector(counts)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactResult {
    pub solution: Solution,
    pub optimum: u64,
    pub nodes_explored: u64,
    /// False only when the node budget ran out before the search finished.
    pub proven_optimal: bool,
}

/// `ceil(Σ_{j ∈ L_i} d_j / R)` per node: no optimal placement needs more.
pub fn placement_upper_bounds(instance: &ProblemInstance) -> Vec<u64> {
    passing_sets(instance)
        .iter()
        .map(|set| {
            set.iter()
                .map(|&j| instance.flow(j).rate)
                .sum::<Rate>()
                .ceil_div(instance.capacity())
        })
        .collect()
}

/// Integer view of an instance.
struct Scaled {
    demand: Vec<i128>,
    unit: i128,
    scale: i128,
}

impl Scaled {
    fn new(instance: &ProblemInstance) -> Scaled {
        let scale = instance
            .flows()
            .iter()
            .map(|f| f.rate.denom())
            .fold(instance.capacity().denom(), |acc, d| acc.lcm(&d));
        let to_int = |r: Rate| {
            r.numer()
                .checked_mul(scale / r.denom())
                .expect("scaled rate overflows i128")
        };
        let demand: Vec<i128> = instance.flows().iter().map(|f| to_int(f.rate)).collect();
        Scaled {
            unit: to_int(instance.capacity()),
            demand,
            scale,
        }
    }

    fn total(&self, flows: &[FlowIndex]) -> i128 {
        flows.iter().map(|&j| self.demand[j]).sum()
    }

    /// Max flow from `flows` where node `i` offers `caps[i]` (`None` =
    /// unbounded). Also returns the network and, per listed flow, its
    /// `(node, arc)` pairs.
    fn route(
        &self,
        instance: &ProblemInstance,
        flows: &[FlowIndex],
        caps: &[Option<i128>],
    ) -> (i128, FlowNetwork, Vec<Vec<(NodeIndex, usize)>>) {
        let m = flows.len();
        let n = instance.node_count();
        let (source, sink) = (0, 1 + m + n);
        let mut net = FlowNetwork::new(m + n + 2);
        let mut arcs = vec![Vec::new(); m];
        for (k, &j) in flows.iter().enumerate() {
            if self.demand[j] == 0 {
                continue;
            }
            net.add_edge(source, 1 + k, self.demand[j]);
            for &i in &instance.flow(j).path {
                let id = net.add_edge(1 + k, 1 + m + i, self.demand[j]);
                arcs[k].push((i, id));
            }
        }
        let unbounded = self.total(flows);
        for (i, cap) in caps.iter().enumerate() {
            let cap = cap.unwrap_or(unbounded);
            if cap > 0 {
                net.add_edge(1 + m + i, sink, cap);
            }
        }
        let value = net.max_flow(source, sink);
        (value, net, arcs)
    }

    fn capacities(&self, x: &[u64]) -> Vec<Option<i128>> {
        x.iter()
            .map(|&c| Some(self.unit.checked_mul(i128::from(c)).expect("capacity overflows i128")))
            .collect()
    }

    fn instances_for(&self, amount: i128) -> u64 {
        u64::try_from(Integer::div_ceil(&amount, &self.unit)).expect("instance count fits u64")
    }
}

fn all_flows(instance: &ProblemInstance) -> Vec<FlowIndex> {
    (0..instance.flow_count()).collect()
}

/// Whether some allocation satisfies both constraint families under `x`.
///
/// Panics if `x` does not have one entry per node.
pub fn allocation_feasible(instance: &ProblemInstance, x: &PlacementVector) -> bool {
    assert_eq!(x.0.len(), instance.node_count(), "placement vector length");
    let scaled = Scaled::new(instance);
    let flows = all_flows(instance);
    scaled.route(instance, &flows, &scaled.capacities(&x.0)).0 == scaled.total(&flows)
}

/// A feasible solution with placements `x`, reading the allocation off a
/// maximum flow. Every flow receives exactly its rate.
pub fn extract_allocation(instance: &ProblemInstance, x: &PlacementVector) -> Result<Solution, ExactError> {
    if x.0.len() != instance.node_count() {
        return Err(ExactError::Dimension {
            got: x.0.len(),
            expected: instance.node_count(),
        });
    }
    let scaled = Scaled::new(instance);
    let flows = all_flows(instance);
    let (value, net, arcs) = scaled.route(instance, &flows, &scaled.capacities(&x.0));
    if value != scaled.total(&flows) {
        return Err(ExactError::Infeasible);
    }
    let mut solution = Solution::new();
    for (i, &c) in x.0.iter().enumerate() {
        solution.place(i, c);
    }
    for (j, flow_arcs) in arcs.iter().enumerate() {
        for &(i, id) in flow_arcs {
            let carried = net.flow(id);
            if carried > 0 {
                solution.allocate(j, i, Rate::new(carried, scaled.scale).expect("non-negative flow"));
            }
        }
    }
    Ok(solution)
}

/// Positive-rate flows grouped by shared nodes, with the nodes they touch.
/// Groups never compete for capacity, so each can be solved on its own.
fn components(instance: &ProblemInstance) -> Vec<(Vec<FlowIndex>, Vec<NodeIndex>)> {
    let n = instance.node_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    let active: Vec<FlowIndex> = (0..instance.flow_count())
        .filter(|&j| !instance.flow(j).rate.is_zero())
        .collect();
    for &j in &active {
        let path = &instance.flow(j).path;
        for w in path.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    let mut slot = vec![usize::MAX; n];
    let mut groups: Vec<(Vec<FlowIndex>, Vec<NodeIndex>)> = Vec::new();
    for &j in &active {
        let root = find(&mut parent, instance.flow(j).path[0]);
        if slot[root] == usize::MAX {
            slot[root] = groups.len();
            groups.push((Vec::new(), Vec::new()));
        }
        groups[slot[root]].0.push(j);
    }
    let mut seen = vec![false; n];
    for &j in &active {
        for &i in &instance.flow(j).path {
            if !seen[i] {
                seen[i] = true;
                let root = find(&mut parent, i);
                groups[slot[root]].1.push(i);
            }
        }
    }
    groups
}

struct Search<'a> {
    instance: &'a ProblemInstance,
    scaled: &'a Scaled,
    flows: Vec<FlowIndex>,
    total: i128,
    order: Vec<NodeIndex>,
    upper: &'a [u64],
    x: Vec<u64>,
    best: Vec<u64>,
    best_total: u64,
    explored: u64,
    budget: Option<u64>,
    exhausted: bool,
}

impl Search<'_> {
    fn route(&self, caps: &[Option<i128>]) -> i128 {
        self.scaled.route(self.instance, &self.flows, caps).0
    }

    fn dfs(&mut self, depth: usize, partial: u64) {
        if self.exhausted {
            return;
        }
        if self.budget.is_some_and(|b| self.explored >= b) {
            self.exhausted = true;
            return;
        }
        self.explored += 1;

        let decided = self.scaled.capacities(&self.x);
        let served = self.route(&decided);
        if served == self.total {
            // Undecided nodes at zero already give a feasible completion.
            if partial < self.best_total {
                self.best_total = partial;
                self.best.clone_from(&self.x);
            }
            return;
        }
        let lower = partial + self.scaled.instances_for(self.total - served);
        if lower >= self.best_total || depth == self.order.len() {
            return;
        }
        let mut relaxed = decided;
        for &i in &self.order[depth..] {
            relaxed[i] = None;
        }
        if self.route(&relaxed) < self.total {
            return;
        }

        // Each undecided node must carry whatever the others cannot, which
        // gives a per-node floor; the floors add up to a bound that respects
        // integrality at every node.
        let mut floors = Vec::with_capacity(self.order.len() - depth);
        for &i in &self.order[depth..] {
            relaxed[i] = Some(0);
            floors.push(self.scaled.instances_for(self.total - self.route(&relaxed)));
            relaxed[i] = None;
        }
        let floor_sum: u64 = floors.iter().sum();
        if partial + floor_sum >= self.best_total {
            return;
        }

        let node = self.order[depth];
        // Leave room for the other floors below the incumbent.
        let room = self.best_total - 1 - partial - (floor_sum - floors[0]);
        for value in (floors[0]..=self.upper[node].min(room)).rev() {
            self.x[node] = value;
            self.dfs(depth + 1, partial + value);
            if self.exhausted {
                break;
            }
        }
        self.x[node] = 0;
    }
}

/// Minimum-instance solution by branch-and-bound. Flows that share no node
/// are split into independent groups first. With a `node_budget` (shared by
/// all groups), the search may stop early; the result then carries the best
/// solution found and `proven_optimal = false`.
pub fn solve_exact(instance: &ProblemInstance, node_budget: Option<u64>) -> ExactResult {
    let n = instance.node_count();
    let fng = solve_fng(instance).solution;
    let frg = solve_frg(instance).solution;
    let warm = if total_instances(&frg) < total_instances(&fng) {
        frg
    } else {
        fng
    };
    let warm_total = total_instances(&warm);
    if warm_total <= demand_lower_bound(instance) {
        return ExactResult {
            solution: warm,
            optimum: warm_total,
            nodes_explored: 0,
            proven_optimal: true,
        };
    }

    let scaled = Scaled::new(instance);
    let upper = placement_upper_bounds(instance);
    let sets = passing_sets(instance);
    let weight = |i: usize| sets[i].iter().map(|&j| instance.flow(j).rate).sum::<Rate>();
    let warm_x = warm.placement_vector(n);

    let mut best = vec![0u64; n];
    let mut explored = 0;
    let mut exhausted = false;
    for (flows, mut nodes) in components(instance) {
        nodes.sort_by(|&a, &b| weight(b).cmp(&weight(a)).then(a.cmp(&b)));
        let total = scaled.total(&flows);
        let mut incumbent = vec![0u64; n];
        for &i in &nodes {
            incumbent[i] = warm_x[i];
        }
        let incumbent_total: u64 = incumbent.iter().sum();
        if incumbent_total <= scaled.instances_for(total) || exhausted {
            for &i in &nodes {
                best[i] = incumbent[i];
            }
            continue;
        }
        let mut search = Search {
            instance,
            scaled: &scaled,
            flows,
            total,
            order: nodes.clone(),
            upper: &upper,
            x: vec![0; n],
            best: incumbent,
            best_total: incumbent_total,
            explored: 0,
            budget: node_budget.map(|b| b.saturating_sub(explored)),
            exhausted: false,
        };
        search.dfs(0, 0);
        explored += search.explored;
        exhausted |= search.exhausted;
        for &i in &nodes {
            best[i] = search.best[i];
        }
    }

    let solution = if best.iter().sum::<u64>() < warm_total {
        extract_allocation(instance, &PlacementVector(best)).expect("incumbent is feasible")
    } else {
        warm
    };
    ExactResult {
        optimum: total_instances(&solution),
        solution,
        nodes_explored: explored,
        proven_optimal: !exhausted,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::{build_instance, check_feasible, Flow, Graph};

    #[test]
    fn fig1_feasibility() {
        let inst = fixtures::fig1();
        assert!(allocation_feasible(&inst, &vec![0, 0, 1, 2, 0, 0].into()));
        assert!(!allocation_feasible(&inst, &vec![0, 0, 1, 1, 0, 0].into()));
    }

    #[test]
    fn empty_instance_is_feasible_with_nothing() {
        let inst = build_instance(Graph::numbered(2, [(0, 1)]).unwrap(), vec![], Rate::integer(3)).unwrap();
        assert!(allocation_feasible(&inst, &vec![0, 0].into()));
        assert_eq!(solve_exact(&inst, None).optimum, 0);
    }

    #[test]
    fn extraction_matches_rates() {
        let inst = fixtures::fig1();
        let sol = extract_allocation(&inst, &vec![0, 0, 1, 2, 0, 0].into()).unwrap();
        assert!(check_feasible(&inst, &sol).unwrap().is_feasible());
        assert_eq!(sol.received(0), Rate::integer(16));
        assert_eq!(
            extract_allocation(&inst, &vec![0, 0, 1, 1, 0, 0].into()),
            Err(ExactError::Infeasible)
        );
        assert!(matches!(
            extract_allocation(&inst, &vec![1].into()),
            Err(ExactError::Dimension { .. })
        ));
    }

    #[test]
    fn single_flow_single_node() {
        let g = Graph::numbered(1, []).unwrap();
        let inst = build_instance(g, vec![Flow::new("f", Rate::integer(4), vec![0])], Rate::integer(10)).unwrap();
        let sol = extract_allocation(&inst, &vec![1].into()).unwrap();
        assert_eq!(sol.allocations.get(&(0, 0)), Some(&Rate::integer(4)));
    }

    #[test]
    fn table3a_witness_respects_capacity() {
        let inst = fixtures::table3a();
        let sol = extract_allocation(&inst, &vec![2, 3].into()).unwrap();
        let report = check_feasible(&inst, &sol).unwrap();
        assert!(report.is_feasible());
        assert!(sol.load(0) <= Rate::integer(20));
        assert!(sol.load(1) <= Rate::integer(30));
    }

    #[test]
    fn fig1_optimum_is_three() {
        let r = solve_exact(&fixtures::fig1(), None);
        assert_eq!(r.optimum, 3);
        assert!(r.proven_optimal);
        assert!(check_feasible(&fixtures::fig1(), &r.solution).unwrap().is_feasible());
    }

    #[test]
    fn disjoint_flows_need_two() {
        let g = Graph::numbered(2, [(0, 1)]).unwrap();
        let flows = vec![
            Flow::new("a", Rate::integer(1), vec![0]),
            Flow::new("b", Rate::integer(1), vec![1]),
        ];
        let inst = build_instance(g, flows, Rate::integer(10)).unwrap();
        assert_eq!(solve_exact(&inst, None).optimum, 2);
    }

    #[test]
    fn exhausted_budget_is_flagged() {
        let r = solve_exact(&fixtures::fig1(), Some(0));
        assert!(!r.proven_optimal);
        assert_eq!(r.optimum, 4);
        assert!(check_feasible(&fixtures::fig1(), &r.solution).unwrap().is_feasible());
    }

    #[test]
    fn fractional_rates_scale_exactly() {
        let g = Graph::numbered(2, [(0, 1)]).unwrap();
        let third = Rate::new(10, 3).unwrap();
        let flows = (0..3)
            .map(|k| Flow::new(alloc::format!("f{k}"), third, vec![0, 1]))
            .collect();
        let inst = build_instance(g, flows, Rate::integer(10)).unwrap();
        assert!(allocation_feasible(&inst, &vec![1, 0].into()));
        assert_eq!(solve_exact(&inst, None).optimum, 1);
    }

    #[test]
    fn separate_groups_round_up_separately() {
        // 15 + 15 fits in three instances overall, but the groups share no node.
        let g = Graph::numbered(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let flows = vec![
            Flow::new("a", Rate::integer(15), vec![0, 1]),
            Flow::new("b", Rate::integer(15), vec![2, 3]),
            Flow::new("z", Rate::ZERO, vec![1, 2]),
        ];
        let inst = build_instance(g, flows, Rate::integer(10)).unwrap();
        assert_eq!(demand_lower_bound(&inst), 3);
        assert_eq!(components(&inst), vec![(vec![0], vec![0, 1]), (vec![1], vec![2, 3])]);
        let r = solve_exact(&inst, None);
        assert_eq!(r.optimum, 4);
        assert!(r.proven_optimal);
    }
}
