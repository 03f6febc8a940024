//! Flow-number (FNG) and flow-rate (FRG) greedy solvers.
//!
//! Both repeatedly pick the node that scores highest over the flows not yet
//! processed, place just enough instances there to process every such flow
//! passing it, and allocate each of those flows its full rate at that node.
//! Ties go to the smallest node index. Runs in `O(n² + mn)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::model::{FlowIndex, NodeIndex, ProblemInstance, Solution};
use crate::rate::Rate;

/// Node-scoring rule of the greedy loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GreedyRule {
    /// Number of unprocessed flows passing the node (FNG).
    FlowCount,
    /// Total rate of unprocessed flows passing the node (FRG).
    FlowRate,
}

/// One iteration of the greedy loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyTraceEvent {
    /// 1-based.
    pub iteration: usize,
    pub chosen_node: NodeIndex,
    /// Flows processed in this iteration, ascending.
    pub processed_flows: Vec<FlowIndex>,
    pub instances_placed: u64,
    /// Each processed flow with the amount allocated to it at `chosen_node`.
    pub allocations: Vec<(FlowIndex, Rate)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyResult {
    pub solution: Solution,
    pub trace: Vec<GreedyTraceEvent>,
}

impl GreedyResult {
    /// Sequence of chosen nodes.
    pub fn chosen_nodes(&self) -> Vec<NodeIndex> {
        self.trace.iter().map(|e| e.chosen_node).collect()
    }
}

pub fn solve_fng(instance: &ProblemInstance) -> GreedyResult {
    solve_greedy(instance, GreedyRule::FlowCount)
}

pub fn solve_frg(instance: &ProblemInstance) -> GreedyResult {
    solve_greedy(instance, GreedyRule::FlowRate)
}

/// Zero-rate flows count as processed from the start.
pub fn solve_greedy(instance: &ProblemInstance, rule: GreedyRule) -> GreedyResult {
    let n = instance.node_count();
    let flows = instance.flows();
    let capacity = instance.capacity();

    let mut passing: Vec<Vec<FlowIndex>> = vec![Vec::new(); n];
    let mut count = vec![0usize; n];
    let mut demand = vec![Rate::ZERO; n];
    let mut processed: Vec<bool> = flows.iter().map(|f| f.rate.is_zero()).collect();
    let mut unprocessed = processed.iter().filter(|&&p| !p).count();

    for (j, flow) in flows.iter().enumerate() {
        for &i in &flow.path {
            passing[i].push(j);
            if !processed[j] {
                count[i] += 1;
                demand[i] += flow.rate;
            }
        }
    }

    let mut solution = Solution::new();
    let mut trace = Vec::new();
    while unprocessed > 0 {
        let chosen = match rule {
            GreedyRule::FlowCount => argmax_first(&count),
            GreedyRule::FlowRate => argmax_first(&demand),
        };
        let batch: Vec<FlowIndex> = passing[chosen].iter().copied().filter(|&j| !processed[j]).collect();
        debug_assert!(!batch.is_empty(), "an unprocessed flow always passes some node");

        let instances = demand[chosen].ceil_div(capacity);
        solution.place(chosen, instances);
        let mut allocations = Vec::with_capacity(batch.len());
        for &j in &batch {
            let flow = &flows[j];
            processed[j] = true;
            unprocessed -= 1;
            solution.allocate(j, chosen, flow.rate);
            allocations.push((j, flow.rate));
            for &i in &flow.path {
                count[i] -= 1;
                demand[i] = demand[i].saturating_sub(flow.rate);
            }
        }
        trace.push(GreedyTraceEvent {
            iteration: trace.len() + 1,
            chosen_node: chosen,
            processed_flows: batch,
            instances_placed: instances,
            allocations,
        });
    }
    GreedyResult { solution, trace }
}

/// First index of the maximum; a single ascending scan.
fn argmax_first<T: PartialOrd>(scores: &[T]) -> usize {
    let mut best = 0;
    for (i, s) in scores.iter().enumerate().skip(1) {
        if *s > scores[best] {
            best = i;
        }
    }
    best
}
