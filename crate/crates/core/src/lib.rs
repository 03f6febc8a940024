//! Joint placement and allocation of virtual network function (VNF) instances.
//!
//! Given a network, a set of flows with fixed paths and a per-instance processing
//! capacity `R`, decide how many instances to run at every node and how much of
//! each flow every node processes, so that all flows are fully processed and the
//! total instance count is minimal.
//!
//! The crate is `no_std` (it needs `alloc`). All rates are exact rationals.
//!
//! * [`model`]: instances, solutions, feasibility and metrics.
//! * [`greedy`]: the flow-number (FNG) and flow-rate (FRG) greedy solvers.
//! * [`tree`]: the optimal greedy-for-tree (GFT) solver and breaking-point diagnostics.
//! * [`exact`]: branch-and-bound with a max-flow feasibility oracle.
//! * [`reductions`]: set cover to placement, greedy set cover, small-rate transform.
//! * [`generators`]: seeded topology and flow generators.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod exact;
pub mod fixtures;
pub mod generators;
pub mod greedy;
mod maxflow;
pub mod model;
pub mod rate;
pub mod reductions;
pub mod tree;

pub use exact::{allocation_feasible, extract_allocation, solve_exact, ExactResult, PlacementVector};
pub use greedy::{solve_fng, solve_frg, GreedyResult, GreedyTraceEvent};
pub use model::{
    build_instance, check_feasible, demand_lower_bound, density, density_ratio_bound, hosting_nodes, passing_sets,
    total_instances, FeasibilityReport, Flow, FlowIndex, Graph, ModelError, NodeIndex, ProblemInstance, Solution,
};
pub use rate::{Rate, Rational};
pub use tree::{
    find_breaking_points, solve_gft, validate_tree_instance, BreakingPointReport, GftResult, GftStepEvent,
    TreeInstance, WaitingOrder,
};
