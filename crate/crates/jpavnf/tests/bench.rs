use std::path::PathBuf;

use jpavnf::bench::{run_scenario, run_scenarios, to_csv, Algorithm, BenchOptions, ScenarioConfig, CSV_HEADER};

fn config(text: &str) -> ScenarioConfig {
    serde_json::from_str(text).unwrap()
}

fn options() -> BenchOptions {
    BenchOptions {
        base_dir: PathBuf::from(env!("CARGO_MANIFEST_DIR")),
        ..BenchOptions::default()
    }
}

#[test]
fn dense_topology_grid() {
    let c = config(
        r#"{"topology": {"generated": {"nodes": 40, "edges": 234}}, "flows": 100, "path_class": "short",
            "rate_class": "small", "algorithms": ["frg", "fng"], "repetitions": 3, "base_seed": 100}"#,
    );
    let rows = run_scenario(&c, &options()).unwrap();
    assert_eq!(rows.len(), 6);
    let keys: Vec<(u64, u64, Algorithm)> = rows.iter().map(|r| (r.instance, r.seed, r.algorithm)).collect();
    assert_eq!(
        keys,
        [
            (0, 100, Algorithm::Fng),
            (0, 100, Algorithm::Frg),
            (1, 101, Algorithm::Fng),
            (1, 101, Algorithm::Frg),
            (2, 102, Algorithm::Fng),
            (2, 102, Algorithm::Frg)
        ]
    );
    for r in &rows {
        assert!(r.total_vnf >= r.lower_bound);
        assert!(r.hosting_nodes <= r.total_vnf);
        assert_eq!(r.scenario, "s1");
        assert!(r.runtime_us.is_none());
    }
}

#[test]
fn zero_repetitions_give_no_rows() {
    let c = config(
        r#"{"topology": {"generated": {"nodes": 5, "edges": 6}}, "flows": 3, "rate_class": "large",
            "algorithms": ["fng"], "repetitions": 0, "base_seed": 0}"#,
    );
    assert!(run_scenario(&c, &options()).unwrap().is_empty());
    assert_eq!(String::from_utf8(to_csv(&[]).unwrap()).unwrap().trim_end(), CSV_HEADER);
}

#[test]
fn gft_matches_exact_on_fifty_trees() {
    let c = config(
        r#"{"name": "trees", "topology": {"tree": {"nodes": 10, "max_children": 3}}, "flows": 6,
            "rate_class": "large", "algorithms": ["gft", "exact"], "repetitions": 50, "base_seed": 7}"#,
    );
    let rows = run_scenario(&c, &options()).unwrap();
    assert_eq!(rows.len(), 100);
    for pair in rows.chunks(2) {
        assert_eq!(
            (pair[0].algorithm, pair[1].algorithm),
            (Algorithm::Exact, Algorithm::Gft)
        );
        assert_eq!(pair[0].total_vnf, pair[1].total_vnf, "instance {}", pair[0].instance);
    }
}

#[test]
fn bundled_backbone_runs() {
    let c = config(
        r#"{"topology": {"file": "fixtures/internet_mci.json"}, "flows": 60, "path_class": "long",
            "rate_class": "large", "algorithms": ["fng", "frg"], "repetitions": 4, "base_seed": 1}"#,
    );
    let rows = run_scenario(&c, &options()).unwrap();
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r.total_vnf >= r.lower_bound));
}

#[test]
fn fixed_topology_seed_shares_the_graph() {
    let text = r#"{"topology": {"generated": {"nodes": 12, "edges": 20}}, "flows": 10, "rate_class": "large",
                   "algorithms": ["fng"], "repetitions": 2, "base_seed": 3, "topology_seed": 99}"#;
    let a = run_scenario(&config(text), &options()).unwrap();
    let b = run_scenario(&config(text), &options()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn output_is_independent_of_thread_count() {
    let configs: Vec<ScenarioConfig> = serde_json::from_str(
        r#"[{"topology": {"generated": {"nodes": 20, "edges": 40}}, "flows": 30, "path_class": "medium",
             "rate_class": "large", "algorithms": ["fng", "frg"], "repetitions": 6, "base_seed": 1},
            {"topology": {"tree": {"nodes": 15, "max_children": 2}}, "flows": 12, "rate_class": "small",
             "algorithms": ["gft", "fng"], "repetitions": 6, "base_seed": 50}]"#,
    )
    .unwrap();
    let parallel = to_csv(&run_scenarios(&configs, &options()).unwrap()).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let serial = pool.install(|| to_csv(&run_scenarios(&configs, &options()).unwrap()).unwrap());
    assert_eq!(parallel, serial);
}

#[test]
fn config_errors() {
    let unknown_field = r#"{"topology": {"generated": {"nodes": 5, "edges": 6}}, "flows": 3, "rate_class": "large",
                           "algorithms": ["fng"], "repetitions": 1, "base_seed": 0, "bogus": 1}"#;
    assert!(serde_json::from_str::<ScenarioConfig>(unknown_field).is_err());
    let bad_edges = config(
        r#"{"topology": {"generated": {"nodes": 5, "edges": 60}}, "flows": 3, "rate_class": "large",
            "algorithms": ["fng"], "repetitions": 1, "base_seed": 0}"#,
    );
    assert!(run_scenario(&bad_edges, &options()).is_err());
    let zero_capacity = config(
        r#"{"topology": {"generated": {"nodes": 5, "edges": 6}}, "flows": 3, "rate_class": "large",
            "algorithms": ["fng"], "repetitions": 1, "base_seed": 0, "capacity": 0}"#,
    );
    assert!(run_scenario(&zero_capacity, &options()).is_err());
}
