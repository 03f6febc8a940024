//! Dinic's maximum flow on integer capacities.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

pub(crate) struct FlowNetwork {
    adjacency: Vec<Vec<usize>>,
    to: Vec<usize>,
    residual: Vec<i128>,
    capacity: Vec<i128>,
}

impl FlowNetwork {
    pub(crate) fn new(nodes: usize) -> FlowNetwork {
        FlowNetwork {
            adjacency: vec![Vec::new(); nodes],
            to: Vec::new(),
            residual: Vec::new(),
            capacity: Vec::new(),
        }
    }

    /// Returns the id of the forward arc.
    pub(crate) fn add_edge(&mut self, from: usize, to: usize, capacity: i128) -> usize {
        let id = self.to.len();
        self.adjacency[from].push(id);
        self.to.push(to);
        self.residual.push(capacity);
        self.capacity.push(capacity);
        self.adjacency[to].push(id + 1);
        self.to.push(from);
        self.residual.push(0);
        self.capacity.push(0);
        id
    }

    /// Flow currently carried by a forward arc.
    pub(crate) fn flow(&self, edge: usize) -> i128 {
        self.capacity[edge] - self.residual[edge]
    }

    pub(crate) fn max_flow(&mut self, source: usize, sink: usize) -> i128 {
        let n = self.adjacency.len();
        let mut total = 0;
        let mut level = vec![usize::MAX; n];
        let mut next = vec![0usize; n];
        loop {
            level.fill(usize::MAX);
            level[source] = 0;
            let mut queue = VecDeque::from([source]);
            while let Some(u) = queue.pop_front() {
                for &e in &self.adjacency[u] {
                    let v = self.to[e];
                    if self.residual[e] > 0 && level[v] == usize::MAX {
                        level[v] = level[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            if level[sink] == usize::MAX {
                return total;
            }
            next.fill(0);
            loop {
                let pushed = self.augment(source, sink, i128::MAX, &level, &mut next);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
    }

    fn augment(&mut self, u: usize, sink: usize, limit: i128, level: &[usize], next: &mut [usize]) -> i128 {
        if u == sink {
            return limit;
        }
        while next[u] < self.adjacency[u].len() {
            let e = self.adjacency[u][next[u]];
            let v = self.to[e];
            if self.residual[e] > 0 && level[v] == level[u] + 1 {
                let pushed = self.augment(v, sink, limit.min(self.residual[e]), level, next);
                if pushed > 0 {
                    self.residual[e] -= pushed;
                    self.residual[e ^ 1] += pushed;
                    return pushed;
                }
            }
            next[u] += 1;
        }
        0
    }
}
