//! Seeded generators for random topologies, trees and flow sets.
//!
//! Every generator is a pure function of its parameters and seed
//! (ChaCha8 stream).

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Flow, Graph, ModelError, NodeIndex};
use crate::rate::Rate;
use crate::tree::TreeInstance;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("{edges} edges is outside [{min}, {max}] for {nodes} nodes")]
    EdgeCount {
        nodes: usize,
        edges: usize,
        min: usize,
        max: usize,
    },
    #[error("node count must be positive")]
    NoNodes,
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Seed(pub u64);

impl Seed {
    fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

/// Flow path length class; a path of `k` hops visits `k + 1` nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PathClass {
    /// `[1, n/10]` hops.
    Short,
    /// `[1, n/4]` hops.
    Medium,
    /// `[1, n/2]` hops.
    Long,
}

impl PathClass {
    /// Upper end of the hop range: `max(1, floor(n/k))`.
    pub fn max_hops(self, n: usize) -> usize {
        let divisor = match self {
            PathClass::Short => 10,
            PathClass::Medium => 4,
            PathClass::Long => 2,
        };
        (n / divisor).max(1)
    }
}

/// Flow rate regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RateClass {
    /// `[0, R/m]` in steps of `R/(1000·m)`.
    Small,
    /// `[0, 10R]` in steps of `R/100`.
    Large,
}

impl RateClass {
    /// Closed range `[0, max]` for `m` flows.
    pub fn max_rate(self, capacity: Rate, m: usize) -> Rate {
        match self {
            RateClass::Small => capacity / m.max(1) as u64,
            RateClass::Large => capacity * 10,
        }
    }

    fn sample<R: Rng>(self, rng: &mut R, capacity: Rate, m: usize) -> Rate {
        let k: u64 = rng.gen_range(0..=1000);
        match self {
            RateClass::Small => capacity * k / (1000 * m.max(1) as u64),
            RateClass::Large => capacity * k / 100,
        }
    }
}

/// Connected graph: a uniformly random spanning tree plus uniformly chosen
/// extra edges.
pub fn gen_random_topology(n: usize, edge_count: usize, seed: Seed) -> Result<Graph, GenError> {
    if n == 0 {
        return Err(GenError::NoNodes);
    }
    let max = n * (n - 1) / 2;
    if edge_count + 1 < n || edge_count > max {
        return Err(GenError::EdgeCount {
            nodes: n,
            edges: edge_count,
            min: n - 1,
            max,
        });
    }
    let mut rng = seed.rng();
    let mut perm: Vec<NodeIndex> = (0..n).collect();
    perm.shuffle(&mut rng);
    let mut edges = BTreeSet::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        let (a, b) = (perm[i], perm[j]);
        edges.insert((a.min(b), a.max(b)));
    }
    let mut spare: Vec<(NodeIndex, NodeIndex)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|e| !edges.contains(e))
        .collect();
    spare.shuffle(&mut rng);
    edges.extend(spare.into_iter().take(edge_count - (n - 1)));
    Ok(Graph::numbered(n, edges)?)
}

/// Random rooted tree on `n` nodes with root 0 and at most `max_children`
/// children per node. Node `i > 0` attaches to a uniformly chosen earlier node
/// that still has a free child slot.
pub fn gen_tree(n: usize, max_children: usize, seed: Seed) -> Result<(Graph, NodeIndex), GenError> {
    if n == 0 {
        return Err(GenError::NoNodes);
    }
    let max_children = max_children.max(1);
    let mut rng = seed.rng();
    let mut children = vec![0usize; n];
    let mut open: Vec<NodeIndex> = vec![0];
    let mut edges = Vec::with_capacity(n - 1);
    for node in 1..n {
        let slot = rng.gen_range(0..open.len());
        let parent = open[slot];
        edges.push((parent, node));
        children[parent] += 1;
        if children[parent] == max_children {
            open.swap_remove(slot);
        }
        open.push(node);
    }
    Ok((Graph::numbered(n, edges)?, 0))
}

/// `m` flows `f1..fm`. Each draws a hop target from the path class, starts at
/// a uniform node and follows a self-avoiding random walk, stopping early if
/// the walk dead-ends.
pub fn gen_flows(
    graph: &Graph,
    m: usize,
    path_class: PathClass,
    rate_class: RateClass,
    capacity: Rate,
    seed: Seed,
) -> Vec<Flow> {
    let mut rng = seed.rng();
    let n = graph.node_count();
    let max_hops = path_class.max_hops(n);
    let mut flows = Vec::with_capacity(m);
    for j in 0..m {
        let hops = rng.gen_range(1..=max_hops);
        let mut node = rng.gen_range(0..n);
        let mut path = vec![node];
        let mut visited = BTreeSet::from([node]);
        for _ in 0..hops {
            let options: Vec<NodeIndex> = graph
                .neighbors(node)
                .iter()
                .copied()
                .filter(|v| !visited.contains(v))
                .collect();
            let Some(&next) = options.choose(&mut rng) else { break };
            visited.insert(next);
            path.push(next);
            node = next;
        }
        let rate = rate_class.sample(&mut rng, capacity, m);
        flows.push(Flow::new(format!("f{}", j + 1), rate, path));
    }
    flows
}

/// `m` upstream flows: a uniform start node and a uniform exit among its
/// ancestors (itself included).
pub fn gen_upstream_tree_flows(tree: &TreeInstance, m: usize, rate_class: RateClass, seed: Seed) -> Vec<Flow> {
    let mut rng = seed.rng();
    let n = tree.instance().node_count();
    let capacity = tree.instance().capacity();
    let mut flows = Vec::with_capacity(m);
    for j in 0..m {
        let start = rng.gen_range(0..n);
        let mut chain = vec![start];
        while let Some(p) = tree.parent(*chain.last().expect("non-empty")) {
            chain.push(p);
        }
        let exit = rng.gen_range(0..chain.len());
        chain.truncate(exit + 1);
        let rate = rate_class.sample(&mut rng, capacity, m);
        flows.push(Flow::new(format!("f{}", j + 1), rate, chain));
    }
    flows
}
