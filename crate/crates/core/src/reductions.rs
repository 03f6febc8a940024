//! Set cover as a placement problem, the classic greedy set cover, and the
//! small-rate transform under which no node ever needs a second instance.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::model::{build_instance, Flow, Graph, ModelError, ProblemInstance};
use crate::rate::Rate;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReductionError {
    #[error("universe is empty")]
    EmptyUniverse,
    #[error("subset {subset} contains element {element}, outside a universe of {universe}")]
    ElementOutOfRange {
        subset: usize,
        element: usize,
        universe: usize,
    },
    #[error("element {0} is covered by no subset")]
    Uncovered(usize),
    #[error("every flow has rate zero")]
    AllZeroRates,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Universe `{0, .., m-1}` and a family of subsets whose union is the universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetCoverInstance {
    universe: usize,
    subsets: Vec<BTreeSet<usize>>,
}

impl SetCoverInstance {
    pub fn new<S>(universe: usize, subsets: Vec<S>) -> Result<SetCoverInstance, ReductionError>
    where
        S: IntoIterator<Item = usize>,
    {
        if universe == 0 {
            return Err(ReductionError::EmptyUniverse);
        }
        let subsets: Vec<BTreeSet<usize>> = subsets.into_iter().map(|s| s.into_iter().collect()).collect();
        for (subset, elements) in subsets.iter().enumerate() {
            if let Some(&element) = elements.iter().find(|&&e| e >= universe) {
                return Err(ReductionError::ElementOutOfRange {
                    subset,
                    element,
                    universe,
                });
            }
        }
        let mut covered = vec![false; universe];
        for &e in subsets.iter().flatten() {
            covered[e] = true;
        }
        if let Some(e) = covered.iter().position(|&c| !c) {
            return Err(ReductionError::Uncovered(e));
        }
        Ok(SetCoverInstance { universe, subsets })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn subsets(&self) -> &[BTreeSet<usize>] {
        &self.subsets
    }
}

/// One node per subset on a complete graph, one flow per element with rate
/// `R/m`; flow `j` passes node `i` iff element `j` is in subset `i`.
pub fn reduce_set_cover(sc: &SetCoverInstance, capacity: Rate) -> Result<ProblemInstance, ReductionError> {
    let n = sc.subsets.len();
    let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
    let graph = Graph::numbered(n, edges)?;
    let rate = capacity / sc.universe as u64;
    let flows = (0..sc.universe)
        .map(|e| {
            let path = (0..n).filter(|&i| sc.subsets[i].contains(&e)).collect();
            Flow::new(format!("f{}", e + 1), rate, path)
        })
        .collect();
    Ok(build_instance(graph, flows, capacity)?)
}

/// Greedy set cover: repeatedly take the subset with the most uncovered
/// elements, smallest index on ties. Returns subset indices in pick order.
pub fn greedy_set_cover(sc: &SetCoverInstance) -> Vec<usize> {
    let mut covered = vec![false; sc.universe];
    let mut left = sc.universe;
    let mut picks = Vec::new();
    while left > 0 {
        let gain = |s: &BTreeSet<usize>| s.iter().filter(|&&e| !covered[e]).count();
        let mut best = 0;
        let mut best_gain = 0;
        for (i, s) in sc.subsets.iter().enumerate() {
            let g = gain(s);
            if g > best_gain {
                best = i;
                best_gain = g;
            }
        }
        for &e in &sc.subsets[best] {
            if !covered[e] {
                covered[e] = true;
                left -= 1;
            }
        }
        picks.push(best);
    }
    picks
}

/// Replaces every positive rate by `min(d_min, R/m)`, where `d_min` and `m`
/// range over the positive-rate flows. Zero-rate flows stay at zero.
pub fn small_rate_transform(instance: &ProblemInstance) -> Result<ProblemInstance, ReductionError> {
    let positive: Vec<Rate> = instance
        .flows()
        .iter()
        .map(|f| f.rate)
        .filter(|r| !r.is_zero())
        .collect();
    let d_min = positive.iter().copied().min().ok_or(ReductionError::AllZeroRates)?;
    let rate = d_min.min(instance.capacity() / positive.len() as u64);
    let flows = instance
        .flows()
        .iter()
        .map(|f| Flow {
            rate: if f.rate.is_zero() { Rate::ZERO } else { rate },
            ..f.clone()
        })
        .collect();
    Ok(instance.with_flows(flows)?)
}
