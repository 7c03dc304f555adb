use std::sync::Arc;

use rand::RngCore;

use super::{binomial_size, OrderOblivious, Placement};
use crate::error::{invalid, Result};
use crate::matroid::{ConcreteMatroid, DisjointSets, Matroid};
use crate::overlap::precedes;
use crate::rng::check_probability;
use crate::scalar::Scalar;

/// Extra acceptance condition layered on the partition rule.
#[derive(Clone, Debug)]
pub enum Guard {
    None,
    /// Reject if the element's source edge would close a cycle among the
    /// source edges already accepted. Indexed by element id.
    Forest { endpoints: Arc<Vec<(usize, usize)>>, vertices: usize },
    /// Reject if any block listed for the element already holds an
    /// accepted element. Indexed by element id.
    Blocks { blocks: Arc<Vec<Vec<usize>>> },
}

/// The simple-partition threshold rule: accept `e` if its block is still
/// empty and `e` precedes everything sampled from its block in tie-break
/// order (for distinct weights: is strictly heavier).
#[derive(Clone, Debug)]
pub struct PartitionRule<W> {
    block_of: Arc<Vec<Option<usize>>>,
    p: f64,
    guard: Guard,
    /// Earliest sampled element of each block in tie-break order.
    best: Vec<Option<(usize, W)>>,
    taken: Vec<bool>,
    forest: Option<DisjointSets>,
    accepted: Vec<usize>,
    secondary: Vec<usize>,
}

impl<W: Scalar> PartitionRule<W> {
    /// `block_of[e] = None` marks a loop, which is never accepted.
    pub fn new(block_of: Arc<Vec<Option<usize>>>, p: f64, guard: Guard) -> Result<Self> {
        check_probability(p)?;
        let blocks = block_of.iter().flatten().max().map_or(0, |b| b + 1);
        let forest = match &guard {
            Guard::Forest { vertices, .. } => Some(DisjointSets::new(*vertices)),
            _ => None,
        };
        let blocks = match &guard {
            Guard::Blocks { blocks: listed } => listed
                .iter()
                .flatten()
                .map(|b| b + 1)
                .max()
                .map_or(blocks, |m| m.max(blocks)),
            _ => blocks,
        };
        Ok(PartitionRule {
            block_of,
            p,
            guard,
            best: vec![None; blocks],
            taken: vec![false; blocks],
            forest,
            accepted: Vec::new(),
            secondary: Vec::new(),
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    fn guard_allows(&mut self, e: usize) -> bool {
        match &self.guard {
            Guard::None => true,
            Guard::Forest { endpoints, .. } => {
                let (u, v) = endpoints[e];
                let dsu = self.forest.as_mut().expect("forest guard has a union-find");
                dsu.find(u) != dsu.find(v)
            }
            Guard::Blocks { blocks } => blocks[e].iter().all(|&b| !self.taken[b]),
        }
    }
}

/// The simple-partition algorithm for a simple partition matroid.
pub fn simple_partition_secretary<W: Scalar>(m: &ConcreteMatroid, p: f64) -> Result<PartitionRule<W>> {
    match m {
        ConcreteMatroid::Partition(pm) if pm.is_simple() => {
            PartitionRule::new(Arc::new(pm.block_assignment().to_vec()), p, Guard::None)
        }
        ConcreteMatroid::Partition(_) => {
            Err(invalid("the simple partition algorithm needs every block capacity to be 1"))
        }
        other => Err(invalid(format!(
            "the simple partition algorithm needs a partition matroid, got {}",
            other.family()
        ))),
    }
}

impl<W: Scalar> OrderOblivious<W> for PartitionRule<W> {
    fn sample_size(&mut self, n: usize, rng: &mut dyn RngCore) -> usize {
        binomial_size(n, self.p, rng)
    }

    fn observe_sample(&mut self, sample: &[(usize, W)]) {
        for (e, w) in sample {
            if let Some(b) = self.block_of[*e] {
                if self.best[b].as_ref().is_none_or(|(t, wt)| precedes(*e, w, *t, wt)) {
                    self.best[b] = Some((*e, w.clone()));
                }
            }
        }
    }

    fn offer(&mut self, e: usize, w: &W) -> bool {
        let Some(b) = self.block_of[e] else {
            return false;
        };
        if self.taken[b] || self.best[b].as_ref().is_some_and(|(t, wt)| !precedes(e, w, *t, wt)) {
            return false;
        }
        if !self.guard_allows(e) {
            return false;
        }
        self.taken[b] = true;
        if let (Guard::Forest { endpoints, .. }, Some(dsu)) = (&self.guard, self.forest.as_mut()) {
            let (u, v) = endpoints[e];
            dsu.union(u, v);
        }
        self.accepted.push(e);
        true
    }

    fn place(&mut self, e: usize, placement: Placement) {
        if placement == Placement::Secondary {
            self.secondary.push(e);
        }
    }

    fn accepted(&self) -> Vec<usize> {
        self.accepted.clone()
    }

    fn primary(&self) -> Vec<usize> {
        self.accepted.iter().copied().filter(|e| !self.secondary.contains(e)).collect()
    }
}

/// The algorithm for partition matroids with arbitrary capacities, written
/// against the independence oracle alone.
///
/// The threshold for `e` is the `ℓ`-th heaviest sampled element of its
/// block. It is recovered as the lightest element of the sample optimum
/// whose removal makes room for `e`.
#[derive(Clone, Debug)]
pub struct GeneralizedPartitionSecretary<W> {
    matroid: Arc<dyn Matroid>,
    /// Greedy basis of the sample, heaviest first. Zero weights included.
    basis: Vec<(usize, W)>,
    accepted: Vec<usize>,
    secondary: Vec<usize>,
}

impl<W: Scalar> GeneralizedPartitionSecretary<W> {
    pub const P: f64 = 0.5;

    pub fn new(matroid: Arc<dyn Matroid>) -> Self {
        GeneralizedPartitionSecretary {
            matroid,
            basis: Vec::new(),
            accepted: Vec::new(),
            secondary: Vec::new(),
        }
    }

    /// `t_e`, or `None` when the block has fewer sampled elements than its
    /// capacity.
    pub fn oracle_threshold(&self, e: usize) -> Option<(usize, W)> {
        let mut probe: Vec<usize> = self.basis.iter().map(|(f, _)| *f).collect();
        probe.push(e);
        if self.matroid.independent(&probe) {
            return None;
        }
        let last = probe.len() - 1;
        for i in (0..last).rev() {
            let removed = probe.remove(i);
            let restored = self.matroid.independent(&probe);
            probe.insert(i, removed);
            if restored {
                return Some(self.basis[i].clone());
            }
        }
        None
    }
}

impl<W: Scalar> OrderOblivious<W> for GeneralizedPartitionSecretary<W> {
    fn sample_size(&mut self, n: usize, rng: &mut dyn RngCore) -> usize {
        binomial_size(n, Self::P, rng)
    }

    fn observe_sample(&mut self, sample: &[(usize, W)]) {
        let mut sorted = sample.to_vec();
        sorted.sort_by(|a, b| {
            if precedes(a.0, &a.1, b.0, &b.1) {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        });
        let mut ids = Vec::new();
        for (e, w) in sorted {
            ids.push(e);
            if self.matroid.independent(&ids) {
                self.basis.push((e, w));
            } else {
                ids.pop();
            }
        }
    }

    fn offer(&mut self, e: usize, w: &W) -> bool {
        let mut probe = self.accepted.clone();
        probe.push(e);
        if !self.matroid.independent(&probe) {
            return false;
        }
        if self.oracle_threshold(e).is_some_and(|(t, wt)| !precedes(e, w, t, &wt)) {
            return false;
        }
        self.accepted.push(e);
        true
    }

    fn place(&mut self, e: usize, placement: Placement) {
        if placement == Placement::Secondary {
            self.secondary.push(e);
        }
    }

    fn accepted(&self) -> Vec<usize> {
        self.accepted.clone()
    }

    fn primary(&self) -> Vec<usize> {
        self.accepted.iter().copied().filter(|e| !self.secondary.contains(e)).collect()
    }
}
