use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn jpavnf<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_jpavnf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn solve_exact_on_fig1_prints_three_and_writes_a_verifiable_solution() {
    let dir = tempfile::tempdir().unwrap();
    let sol = dir.path().join("sol.json");
    let out = jpavnf([
        "solve".as_ref(),
        "--instance".as_ref(),
        fixture("fig1.json").as_os_str(),
        "--algorithm".as_ref(),
        "exact".as_ref(),
        "--out".as_ref(),
        sol.as_os_str(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = stdout_json(&out);
    assert_eq!(summary["total_vnf"], 3);
    assert_eq!(summary["proven_optimal"], true);

    let verify = jpavnf([
        "verify".as_ref(),
        "--instance".as_ref(),
        fixture("fig1.json").as_os_str(),
        "--solution".as_ref(),
        sol.as_os_str(),
    ]);
    assert_eq!(verify.status.code(), Some(0));
}

#[test]
fn verify_accepts_both_table_one_solutions() {
    for name in ["table1a_solution.json", "table1b_solution.json"] {
        let out = jpavnf([
            "verify".as_ref(),
            "--instance".as_ref(),
            fixture("fig1.json").as_os_str(),
            "--solution".as_ref(),
            fixture(name).as_os_str(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{name}");
    }
}

#[test]
fn verify_rejects_an_overloaded_solution() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    let mut sol: Value =
        serde_json::from_str(&std::fs::read_to_string(fixture("table1b_solution.json")).unwrap()).unwrap();
    sol["placements"]["3"] = 1.into();
    std::fs::write(&bad, sol.to_string()).unwrap();
    let out = jpavnf([
        "verify".as_ref(),
        "--instance".as_ref(),
        fixture("fig1.json").as_os_str(),
        "--solution".as_ref(),
        bad.as_os_str(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("over capacity"));
}

#[test]
fn gft_on_a_non_tree_fails_with_a_tree_diagnostic() {
    let out = jpavnf([
        "solve".as_ref(),
        "--instance".as_ref(),
        fixture("internet_mci.json").as_os_str(),
        "--algorithm".as_ref(),
        "gft".as_ref(),
        "--root".as_ref(),
        "0".as_ref(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a tree"));
    // fig1.json is a tree, but f1 turns downward at v3 when rooted there.
    let fig1 = jpavnf([
        "solve".as_ref(),
        "--instance".as_ref(),
        fixture("fig1.json").as_os_str(),
        "--algorithm".as_ref(),
        "gft".as_ref(),
        "--root".as_ref(),
        "2".as_ref(),
    ]);
    assert_eq!(fig1.status.code(), Some(1));
    let err = String::from_utf8_lossy(&fig1.stderr);
    assert!(err.contains("tree") || err.contains("upstream"), "{err}");
}

#[test]
fn gft_trace_mirrors_the_tree_example() {
    let out = jpavnf([
        "solve".as_ref(),
        "--instance".as_ref(),
        fixture("tree_example.json").as_os_str(),
        "--algorithm".as_ref(),
        "gft".as_ref(),
        "--trace".as_ref(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let summary = stdout_json(&out);
    let labels: Vec<&str> = summary["trace"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["label"].as_str().unwrap())
        .collect();
    assert_eq!(labels, ["v62", "v51", "v31", "v22"]);
    assert_eq!(summary["total_vnf"], 4);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(jpavnf(["solve"]).status.code(), Some(2));
    assert_eq!(jpavnf(["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        jpavnf(["solve", "--instance", "x.json", "--algorithm", "magic"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(jpavnf(["--help"]).status.code(), Some(0));
}

#[test]
fn missing_or_malformed_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "{").unwrap();
    for path in [junk, dir.path().join("absent.json")] {
        let out = jpavnf([
            "solve".as_ref(),
            "--instance".as_ref(),
            path.as_os_str(),
            "--algorithm".as_ref(),
            "fng".as_ref(),
        ]);
        assert_eq!(out.status.code(), Some(1));
    }
}

#[test]
fn generate_then_solve() {
    let dir = tempfile::tempdir().unwrap();
    let topo = dir.path().join("topo.json");
    let inst = dir.path().join("inst.json");
    let out = jpavnf([
        "gen-topology".as_ref(),
        "--nodes".as_ref(),
        "12".as_ref(),
        "--edges".as_ref(),
        "20".as_ref(),
        "--seed".as_ref(),
        "4".as_ref(),
        "--out".as_ref(),
        topo.as_os_str(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = jpavnf([
        "gen-flows".as_ref(),
        "--topology".as_ref(),
        topo.as_os_str(),
        "--flows".as_ref(),
        "15".as_ref(),
        "--path-class".as_ref(),
        "medium".as_ref(),
        "--rate-class".as_ref(),
        "large".as_ref(),
        "--seed".as_ref(),
        "9".as_ref(),
        "--out".as_ref(),
        inst.as_os_str(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let file: Value = serde_json::from_str(&std::fs::read_to_string(&inst).unwrap()).unwrap();
    assert_eq!(file["flows"].as_array().unwrap().len(), 15);
    assert_eq!(file["edges"].as_array().unwrap().len(), 20);
    for algorithm in ["fng", "frg"] {
        let out = jpavnf([
            "solve".as_ref(),
            "--instance".as_ref(),
            inst.as_os_str(),
            "--algorithm".as_ref(),
            algorithm.as_ref(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        let s = stdout_json(&out);
        assert!(s["total_vnf"].as_u64().unwrap() >= s["lower_bound"].as_u64().unwrap());
    }
}

#[test]
fn generated_tree_solves_with_gft_and_exact_alike() {
    let dir = tempfile::tempdir().unwrap();
    let tree = dir.path().join("tree.json");
    let out = jpavnf([
        "gen-tree".as_ref(),
        "--nodes".as_ref(),
        "9".as_ref(),
        "--max-children".as_ref(),
        "3".as_ref(),
        "--flows".as_ref(),
        "6".as_ref(),
        "--seed".as_ref(),
        "2".as_ref(),
        "--out".as_ref(),
        tree.as_os_str(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let totals: Vec<Value> = ["gft", "exact"]
        .iter()
        .map(|a| {
            let out = jpavnf([
                "solve".as_ref(),
                "--instance".as_ref(),
                tree.as_os_str(),
                "--algorithm".as_ref(),
                a.as_ref(),
            ]);
            assert_eq!(out.status.code(), Some(0));
            stdout_json(&out)["total_vnf"].clone()
        })
        .collect();
    assert_eq!(totals[0], totals[1]);
}

#[test]
fn reduce_setcover_emits_the_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("reduced.json");
    let out = jpavnf([
        "reduce-setcover".as_ref(),
        "--setcover".as_ref(),
        fixture("set_cover_example.json").as_os_str(),
        "--capacity".as_ref(),
        "10".as_ref(),
        "--out".as_ref(),
        inst.as_os_str(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let file: Value = serde_json::from_str(&std::fs::read_to_string(&inst).unwrap()).unwrap();
    let paths: Vec<Value> = file["flows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["path"].clone())
        .collect();
    assert_eq!(
        paths,
        vec![
            serde_json::json!([0, 1, 2, 3]),
            serde_json::json!([0, 2, 5]),
            serde_json::json!([3, 4])
        ]
    );
    let out = jpavnf([
        "solve".as_ref(),
        "--instance".as_ref(),
        inst.as_os_str(),
        "--algorithm".as_ref(),
        "exact".as_ref(),
    ]);
    assert_eq!(stdout_json(&out)["total_vnf"], 2);
}

#[test]
fn smoke_command_passes() {
    let out = jpavnf(["smoke"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(!String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn bench_rejects_gft_on_general_graphs_and_exact_over_cap() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("c.json");
    let csv = dir.path().join("out.csv");
    let cases = [
        (
            r#"[{"topology": {"generated": {"nodes": 6, "edges": 8}}, "flows": 4, "rate_class": "small",
              "algorithms": ["gft"], "repetitions": 1, "base_seed": 0}]"#,
            None,
        ),
        (
            r#"[{"topology": {"generated": {"nodes": 20, "edges": 30}}, "flows": 4, "rate_class": "small",
              "algorithms": ["exact"], "repetitions": 1, "base_seed": 0}]"#,
            None,
        ),
        (
            r#"[{"topology": {"generated": {"nodes": 20, "edges": 30}}, "flows": 4, "rate_class": "small",
              "algorithms": ["exact"], "repetitions": 1, "base_seed": 0}]"#,
            Some("25,12"),
        ),
    ];
    for (k, (text, cap)) in cases.iter().enumerate() {
        std::fs::write(&config, text).unwrap();
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_jpavnf"));
        cmd.args([
            "bench".as_ref(),
            "--config".as_ref(),
            config.as_os_str(),
            "--out-csv".as_ref(),
            csv.as_os_str(),
        ]);
        match cap {
            Some(c) => cmd.env("JPAVNF_EXACT_CAP", c),
            None => cmd.env_remove("JPAVNF_EXACT_CAP"),
        };
        let out = cmd.output().unwrap();
        let expected = if cap.is_some() { 0 } else { 1 };
        assert_eq!(
            out.status.code(),
            Some(expected),
            "case {k}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}
