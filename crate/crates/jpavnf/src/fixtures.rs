//! Worked examples shipped as JSON files and compiled into the binary.

use jpavnf_core::model::{ProblemInstance, Solution};
use jpavnf_core::reductions::SetCoverInstance;
use jpavnf_core::tree::TreeInstance;

use crate::io::{FormatError, InstanceJson, SetCoverJson, SolutionJson};

pub const FIG1: &str = include_str!("../fixtures/fig1.json");
pub const TABLE1A_SOLUTION: &str = include_str!("../fixtures/table1a_solution.json");
pub const TABLE1B_SOLUTION: &str = include_str!("../fixtures/table1b_solution.json");
pub const TABLE3A: &str = include_str!("../fixtures/table3a.json");
pub const TABLE3B: &str = include_str!("../fixtures/table3b.json");
pub const TREE_EXAMPLE: &str = include_str!("../fixtures/tree_example.json");
pub const SET_COVER_EXAMPLE: &str = include_str!("../fixtures/set_cover_example.json");
/// 19-node backbone from the Internet Topology Zoo, without flows.
pub const INTERNET_MCI: &str = include_str!("../fixtures/internet_mci.json");

pub fn instance(text: &str) -> Result<ProblemInstance, FormatError> {
    serde_json::from_str::<InstanceJson>(text)?.to_instance()
}

pub fn tree(text: &str) -> Result<TreeInstance, FormatError> {
    serde_json::from_str::<InstanceJson>(text)?.to_tree(None)
}

pub fn solution(instance: &ProblemInstance, text: &str) -> Result<Solution, FormatError> {
    serde_json::from_str::<SolutionJson>(text)?.to_solution(instance)
}

pub fn set_cover(text: &str) -> Result<SetCoverInstance, FormatError> {
    serde_json::from_str::<SetCoverJson>(text)?.to_set_cover()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmokeCheck {
    pub name: &'static str,
    pub expected: String,
    pub actual: String,
}

impl SmokeCheck {
    pub fn passed(&self) -> bool {
        self.expected == self.actual
    }
}

/// Loads every shipped fixture, solves it and compares the totals against the
/// known answers.
pub fn smoke_checks() -> Result<Vec<SmokeCheck>, FormatError> {
    use jpavnf_core::exact::solve_exact;
    use jpavnf_core::greedy::{solve_fng, solve_frg};
    use jpavnf_core::model::{check_feasible, total_instances};
    use jpavnf_core::reductions::reduce_set_cover;
    use jpavnf_core::tree::{solve_gft, WaitingOrder};
    use jpavnf_core::Rate;

    let mut checks = Vec::new();
    let mut check = |name, expected: &str, actual: String| {
        checks.push(SmokeCheck {
            name,
            expected: expected.to_owned(),
            actual,
        });
    };
    let placements = |s: &Solution| format!("{:?}", s.placements.iter().collect::<Vec<_>>());

    let fig1 = instance(FIG1)?;
    check("fig1 exact total", "3", solve_exact(&fig1, None).optimum.to_string());
    check(
        "fig1 fng placements",
        "[(2, 3), (3, 1)]",
        placements(&solve_fng(&fig1).solution),
    );
    check(
        "fig1 frg placements",
        "[(2, 3), (3, 1)]",
        placements(&solve_frg(&fig1).solution),
    );
    for (name, text) in [
        ("table1a verifies", TABLE1A_SOLUTION),
        ("table1b verifies", TABLE1B_SOLUTION),
    ] {
        let s = solution(&fig1, text)?;
        check(name, "true", check_feasible(&fig1, &s)?.is_feasible().to_string());
    }

    let a = instance(TABLE3A)?;
    let b = instance(TABLE3B)?;
    check("table3a fng", "[(0, 3), (1, 3)]", placements(&solve_fng(&a).solution));
    check("table3a frg", "[(0, 2), (1, 3)]", placements(&solve_frg(&a).solution));
    check("table3b fng", "[(0, 1), (1, 1)]", placements(&solve_fng(&b).solution));
    check("table3b frg", "[(0, 1), (1, 2)]", placements(&solve_frg(&b).solution));

    let t = tree(TREE_EXAMPLE)?;
    let gft = solve_gft(&t, WaitingOrder::default());
    let labels: Vec<&str> = gft.steps.iter().map(|s| t.instance().graph().label(s.node)).collect();
    check("tree gft nodes", "v62 v51 v31 v22", labels.join(" "));
    check("tree gft total", "4", total_instances(&gft.solution).to_string());

    let sc = set_cover(SET_COVER_EXAMPLE)?;
    let reduced = reduce_set_cover(&sc, Rate::integer(10))?;
    check("set cover exact", "2", solve_exact(&reduced, None).optimum.to_string());

    let mci = instance(INTERNET_MCI)?;
    check("internet mci nodes", "19", mci.node_count().to_string());
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use jpavnf_core::fixtures as core;

    #[test]
    fn shipped_files_match_built_in_fixtures() {
        let fig1 = instance(FIG1).unwrap();
        assert_eq!(fig1, core::fig1());
        assert_eq!(solution(&fig1, TABLE1A_SOLUTION).unwrap(), core::table1a());
        assert_eq!(solution(&fig1, TABLE1B_SOLUTION).unwrap(), core::table1b());
        assert_eq!(instance(TABLE3A).unwrap(), core::table3a());
        assert_eq!(instance(TABLE3B).unwrap(), core::table3b());
        assert_eq!(tree(TREE_EXAMPLE).unwrap(), core::tree_example());
        assert_eq!(set_cover(SET_COVER_EXAMPLE).unwrap(), core::set_cover_example());
    }

    #[test]
    fn smoke_passes() {
        for c in smoke_checks().unwrap() {
            assert!(c.passed(), "{c:?}");
        }
    }
}
