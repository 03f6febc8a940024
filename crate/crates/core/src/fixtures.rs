//! Worked example instances: the six-node network with three flows, the two
//! greedy non-dominance instances, the upstream-flow tree and the small
//! set-cover instance.

use alloc::vec;
use alloc::vec::Vec;

use crate::model::{build_instance, Flow, Graph, ProblemInstance, Solution};
use crate::rate::Rate;
use crate::reductions::SetCoverInstance;
use crate::tree::{validate_tree_instance, TreeInstance};

fn int(v: u64) -> Rate {
    Rate::integer(v)
}

/// Six nodes `v1..v6`, flows `f1 = 16` on `v2,v3,v4`, `f2 = 6` on `v6,v1,v3`,
/// `f3 = 5` on `v5,v4`, `R = 10`.
pub fn fig1() -> ProblemInstance {
    let graph = Graph::numbered(6, [(1, 2), (2, 3), (5, 0), (0, 2), (4, 3)]).expect("valid graph");
    let flows = vec![
        Flow::new("f1", int(16), vec![1, 2, 3]),
        Flow::new("f2", int(6), vec![5, 0, 2]),
        Flow::new("f3", int(5), vec![4, 3]),
    ];
    build_instance(graph, flows, int(10)).expect("valid instance")
}

/// Suboptimal solution on [`fig1`]: 4 instances on `v1, v2, v4`.
pub fn table1a() -> Solution {
    let mut s = Solution::new();
    s.place(0, 1);
    s.place(1, 2);
    s.place(3, 1);
    s.allocate(0, 1, int(16));
    s.allocate(1, 0, int(6));
    s.allocate(2, 3, int(5));
    s
}

/// Optimal solution on [`fig1`]: 3 instances on `v3, v4`.
pub fn table1b() -> Solution {
    let mut s = Solution::new();
    s.place(2, 1);
    s.place(3, 2);
    s.allocate(0, 2, int(4));
    s.allocate(0, 3, int(12));
    s.allocate(1, 2, int(6));
    s.allocate(2, 3, int(5));
    s
}

fn two_node(rates: [u64; 4]) -> ProblemInstance {
    let graph = Graph::numbered(2, [(0, 1)]).expect("valid graph");
    let paths: [Vec<usize>; 4] = [vec![0], vec![0], vec![0, 1], vec![1]];
    let flows = rates
        .iter()
        .zip(paths)
        .enumerate()
        .map(|(j, (&r, p))| Flow::new(alloc::format!("f{}", j + 1), int(r), p))
        .collect();
    build_instance(graph, flows, int(10)).expect("valid instance")
}

/// Two nodes, `R = 10`; FRG beats FNG here.
pub fn table3a() -> ProblemInstance {
    two_node([10, 10, 4, 26])
}

/// Two nodes, `R = 10`; FNG beats FRG here.
pub fn table3b() -> ProblemInstance {
    two_node([3, 1, 6, 10])
}

/// Labels of the tree fixture, in node-index order.
pub const TREE_LABELS: [&str; 8] = ["v11", "v21", "v22", "v31", "v41", "v51", "v61", "v62"];

/// Upstream-flow tree rooted at `v11`: chain `v11-v21-v31-v41-v51`, children
/// `v61, v62` under `v51` and `v22` under `v11`. `R = 10`.
pub fn tree_example() -> TreeInstance {
    let graph = Graph::new(
        TREE_LABELS.iter().map(|s| (*s).into()).collect(),
        [(0, 1), (1, 3), (3, 4), (4, 5), (5, 6), (5, 7), (0, 2)],
    )
    .expect("valid graph");
    let flows = vec![
        Flow::new("f1", int(3), vec![4, 3]),
        Flow::new("f2", int(3), vec![6, 5]),
        Flow::new("f3", int(2), vec![5, 4, 3, 1, 0]),
        Flow::new("f4", int(3), vec![7]),
        Flow::new("f5", int(12), vec![7, 5, 4]),
        Flow::new("f6", int(8), vec![2]),
    ];
    let instance = build_instance(graph, flows, int(10)).expect("valid instance");
    validate_tree_instance(&instance, 0).expect("valid tree")
}

/// `U = {1,2,3}`, `Φ = {{1,2},{1},{1,2},{1,3},{3},{2}}` (0-based internally).
pub fn set_cover_example() -> SetCoverInstance {
    SetCoverInstance::new(3, vec![vec![0, 1], vec![0], vec![0, 1], vec![0, 2], vec![2], vec![1]])
        .expect("valid set cover")
}
