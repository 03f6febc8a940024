//! Test-only oracles and random instance builders. Nothing here calls the
//! max-flow or branch-and-bound code it is used to check.
#![allow(dead_code)]

use jpavnf_core::exact::placement_upper_bounds;
use jpavnf_core::generators::{gen_random_topology, gen_tree, gen_upstream_tree_flows, RateClass, Seed};
use jpavnf_core::model::{build_instance, Flow, ProblemInstance};
use jpavnf_core::reductions::SetCoverInstance;
use jpavnf_core::tree::{validate_tree_instance, TreeInstance};
use jpavnf_core::Rate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Feasibility of `x` by the supply-demand condition: for every set `S` of
/// positive-rate flows, `Σ_{j∈S} d_j ≤ R · Σ_{i ∈ N(S)} x_i`, where `N(S)` is
/// the union of their paths.
pub fn hall_feasible(instance: &ProblemInstance, x: &[u64]) -> bool {
    let flows: Vec<&Flow> = instance.flows().iter().filter(|f| !f.rate.is_zero()).collect();
    let m = flows.len();
    assert!(m <= 16, "oracle is exponential in m");
    for mask in 1u32..(1 << m) {
        let mut demand = Rate::ZERO;
        let mut nodes = vec![false; instance.node_count()];
        for (j, f) in flows.iter().enumerate() {
            if mask & (1 << j) != 0 {
                demand += f.rate;
                for &i in &f.path {
                    nodes[i] = true;
                }
            }
        }
        let supply: u64 = nodes.iter().zip(x).filter(|(on, _)| **on).map(|(_, c)| *c).sum();
        if demand > instance.capacity().times(supply) {
            return false;
        }
    }
    true
}

/// Minimum `Σ x_i` over every vector bounded by the per-node upper bounds.
pub fn brute_force_optimum(instance: &ProblemInstance) -> u64 {
    let upper = placement_upper_bounds(instance);
    let n = upper.len();
    let mut x = vec![0u64; n];
    let mut best = u64::MAX;
    loop {
        let total: u64 = x.iter().sum();
        if total < best && hall_feasible(instance, &x) {
            best = total;
        }
        let mut k = 0;
        while k < n {
            if x[k] < upper[k] {
                x[k] += 1;
                break;
            }
            x[k] = 0;
            k += 1;
        }
        if k == n {
            return best;
        }
    }
}

/// Smallest number of subsets whose union is the universe.
pub fn brute_force_min_cover(sc: &SetCoverInstance) -> usize {
    let k = sc.subsets().len();
    (0u32..(1 << k))
        .filter(|mask| {
            let mut covered = vec![false; sc.universe()];
            for (i, s) in sc.subsets().iter().enumerate() {
                if mask & (1 << i) != 0 {
                    for &e in s {
                        covered[e] = true;
                    }
                }
            }
            covered.iter().all(|&c| c)
        })
        .map(|mask| mask.count_ones() as usize)
        .min()
        .expect("the full family covers the universe")
}

/// Random rate on the grid `R/8 · {lo..=hi}`.
pub fn grid_rate<R: Rng>(rng: &mut R, capacity: Rate, lo: u64, hi: u64) -> Rate {
    capacity * rng.gen_range(lo..=hi) / 8
}

/// Random connected instance with `n ∈ [1, max_n]`, `m ∈ [1, max_m]`. Rates mix
/// three regimes so both sparse and dense greedy solutions occur.
pub fn random_instance(seed: u64, max_n: usize, max_m: usize) -> ProblemInstance {
    let mut rng = rng(seed);
    let n = rng.gen_range(1..=max_n);
    let max_edges = n * (n - 1) / 2;
    let edges = rng.gen_range(n - 1..=max_edges.max(n - 1));
    let graph = gen_random_topology(n, edges, Seed(rng.gen())).unwrap();
    let m = rng.gen_range(1..=max_m);
    let capacity = [Rate::integer(10), Rate::integer(8), Rate::new(7, 3).unwrap()][rng.gen_range(0..3)];
    let regime = rng.gen_range(0..3);
    let flows = (0..m)
        .map(|j| {
            let len = rng.gen_range(1..=n.min(4));
            let mut path = vec![rng.gen_range(0..n)];
            while path.len() < len {
                let last = *path.last().unwrap();
                let options: Vec<usize> = graph
                    .neighbors(last)
                    .iter()
                    .copied()
                    .filter(|v| !path.contains(v))
                    .collect();
                if options.is_empty() {
                    break;
                }
                path.push(options[rng.gen_range(0..options.len())]);
            }
            let rate = match regime {
                0 => grid_rate(&mut rng, capacity, 0, 8),
                1 => grid_rate(&mut rng, capacity, 1, 24),
                _ => grid_rate(&mut rng, capacity, 8, 40),
            };
            Flow::new(format!("f{}", j + 1), rate, path)
        })
        .collect();
    build_instance(graph, flows, capacity).unwrap()
}

/// Random tree with upstream flows whose rates are multiples of `R/8` in `(0, 3R]`.
pub fn random_tree_instance(seed: u64, max_n: usize, max_m: usize) -> TreeInstance {
    let mut rng = rng(seed);
    let n = rng.gen_range(1..=max_n);
    let (graph, root) = gen_tree(n, rng.gen_range(1..=3), Seed(rng.gen())).unwrap();
    let capacity = Rate::integer(10);
    let bare = validate_tree_instance(&build_instance(graph, vec![], capacity).unwrap(), root).unwrap();
    let m = rng.gen_range(1..=max_m);
    let flows = gen_upstream_tree_flows(&bare, m, RateClass::Large, Seed(rng.gen()))
        .into_iter()
        .map(|f| Flow {
            rate: grid_rate(&mut rng, capacity, 1, 24),
            ..f
        })
        .collect();
    validate_tree_instance(&bare.instance().with_flows(flows).unwrap(), root).unwrap()
}

/// Random set cover with `|U| ≤ max_u`, `|Φ| ≤ max_s`; uncovered elements are
/// patched into random subsets.
pub fn random_set_cover(seed: u64, max_u: usize, max_s: usize) -> SetCoverInstance {
    let mut rng = rng(seed);
    let u = rng.gen_range(1..=max_u);
    let s = rng.gen_range(1..=max_s);
    let mut subsets: Vec<Vec<usize>> = (0..s)
        .map(|_| (0..u).filter(|_| rng.gen_bool(0.35)).collect())
        .collect();
    for e in 0..u {
        if !subsets.iter().any(|set| set.contains(&e)) {
            let k = rng.gen_range(0..s);
            subsets[k].push(e);
        }
    }
    SetCoverInstance::new(u, subsets).unwrap()
}
