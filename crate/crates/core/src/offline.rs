//! Offline optima: greedy over one matroid or an intersection, exact brute
//! force for small ground sets, and greedy-relevant elements.
//!
//! Every routine walks elements in a [`TieBreakOrder`] and skips elements of
//! weight zero, so that zeroed-out elements behave exactly like absent ones.

use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::matroid::{Matroid, TieBreakOrder};
use crate::scalar::Scalar;

/// Default ground-set limit for [`brute_force_opt`].
pub const BRUTE_FORCE_LIMIT: usize = 20;

/// `k ≥ 1` matroids over one ground set; feasible sets are the common
/// independent sets.
#[derive(Clone, Debug)]
pub struct Intersection {
    matroids: Vec<Arc<dyn Matroid>>,
    n: usize,
}

impl Intersection {
    pub fn new(matroids: Vec<Arc<dyn Matroid>>) -> Result<Self> {
        let Some(first) = matroids.first() else {
            return Err(invalid("an intersection needs at least one matroid"));
        };
        let n = first.ground_size();
        if let Some((j, m)) = matroids.iter().enumerate().find(|(_, m)| m.ground_size() != n) {
            return Err(invalid(format!(
                "matroid {j} has ground size {}, matroid 0 has {n}",
                m.ground_size()
            )));
        }
        Ok(Intersection { matroids, n })
    }

    pub fn single(m: Arc<dyn Matroid>) -> Self {
        let n = m.ground_size();
        Intersection { matroids: vec![m], n }
    }

    pub fn k(&self) -> usize {
        self.matroids.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matroids(&self) -> &[Arc<dyn Matroid>] {
        &self.matroids
    }

    pub fn matroid(&self, j: usize) -> &Arc<dyn Matroid> {
        &self.matroids[j]
    }

    /// Unchecked feasibility: independent in every matroid.
    pub fn feasible(&self, set: &[usize]) -> bool {
        self.matroids.iter().all(|m| m.independent(set))
    }

    pub fn is_feasible(&self, set: &[usize]) -> Result<bool> {
        let set = crate::matroid::checked_set(self.n, set)?;
        Ok(self.feasible(&set))
    }
}

/// Greedy output together with its insertion history.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreedyTrace {
    /// Selected elements in insertion (tie-break) order.
    pub selected: Vec<usize>,
}

impl GreedyTrace {
    /// The part of the solution present just before `e` was inserted, or
    /// `None` if `e` was not selected.
    pub fn prefix_before(&self, e: usize) -> Option<&[usize]> {
        self.selected
            .iter()
            .position(|&x| x == e)
            .map(|i| &self.selected[..i])
    }

    pub fn contains(&self, e: usize) -> bool {
        self.selected.contains(&e)
    }

    /// Selected ids, ascending.
    pub fn sorted(&self) -> Vec<usize> {
        let mut ids = self.selected.clone();
        ids.sort_unstable();
        ids
    }
}

/// Maximum-weight basis of a single matroid. Returned in insertion order.
pub fn greedy_single<W: Scalar>(m: &dyn Matroid, weights: &[W], order: &TieBreakOrder) -> Vec<usize> {
    let mut chosen = Vec::new();
    for e in order.iter() {
        if !weights[e].is_positive() {
            continue;
        }
        chosen.push(e);
        if !m.independent(&chosen) {
            chosen.pop();
        }
    }
    chosen
}

/// Greedy over the intersection using all elements.
pub fn greedy_intersection<W: Scalar>(
    c: &Intersection,
    weights: &[W],
    order: &TieBreakOrder,
) -> GreedyTrace {
    greedy_on(c, weights, order, |_| true)
}

/// `greedy(S)`: greedy over the intersection restricted to elements for
/// which `allowed` holds.
pub fn greedy_on<W: Scalar>(
    c: &Intersection,
    weights: &[W],
    order: &TieBreakOrder,
    allowed: impl Fn(usize) -> bool,
) -> GreedyTrace {
    let mut selected = Vec::new();
    for e in order.iter() {
        if !allowed(e) || !weights[e].is_positive() {
            continue;
        }
        selected.push(e);
        if !c.feasible(&selected) {
            selected.pop();
        }
    }
    GreedyTrace { selected }
}

/// Exact maximum-weight feasible set with the default size limit.
pub fn brute_force_opt<W: Scalar>(
    c: &Intersection,
    weights: &[W],
    order: &TieBreakOrder,
) -> Result<Vec<usize>> {
    brute_force_opt_with_limit(c, weights, order, BRUTE_FORCE_LIMIT)
}

/// Exact maximum-weight feasible set by depth-first search over feasible
/// sets in tie-break order, trying inclusion before exclusion.
///
/// Among equally heavy optima the first one found wins, which is the one
/// that includes the earliest possible elements of the order. The result is
/// sorted in tie-break order.
pub fn brute_force_opt_with_limit<W: Scalar>(
    c: &Intersection,
    weights: &[W],
    order: &TieBreakOrder,
    limit: usize,
) -> Result<Vec<usize>> {
    if c.n() > limit {
        return Err(Error::ResourceLimit(format!(
            "brute force over {} elements exceeds the limit of {limit}",
            c.n()
        )));
    }
    let candidates: Vec<usize> = order.iter().filter(|&e| weights[e].is_positive()).collect();
    // remaining[i] = total weight of candidates[i..]
    let mut remaining = vec![W::zero(); candidates.len() + 1];
    for i in (0..candidates.len()).rev() {
        remaining[i] = remaining[i + 1].clone() + weights[candidates[i]].clone();
    }
    let mut search = Search {
        c,
        weights,
        candidates: &candidates,
        remaining: &remaining,
        current: Vec::new(),
        current_weight: W::zero(),
        best: Vec::new(),
        best_weight: W::zero(),
    };
    search.descend(0);
    Ok(search.best)
}

struct Search<'a, W> {
    c: &'a Intersection,
    weights: &'a [W],
    candidates: &'a [usize],
    remaining: &'a [W],
    current: Vec<usize>,
    current_weight: W,
    best: Vec<usize>,
    best_weight: W,
}

impl<W: Scalar> Search<'_, W> {
    fn descend(&mut self, i: usize) {
        if self.current_weight > self.best_weight {
            self.best = self.current.clone();
            self.best_weight = self.current_weight.clone();
        }
        if i == self.candidates.len()
            || self.current_weight.clone() + self.remaining[i].clone() <= self.best_weight
        {
            return;
        }
        let e = self.candidates[i];
        self.current.push(e);
        if self.c.feasible(&self.current) {
            let w = self.weights[e].clone();
            self.current_weight = self.current_weight.clone() + w.clone();
            self.descend(i + 1);
            self.current_weight = self.current_weight.clone() - w;
        }
        self.current.pop();
        self.descend(i + 1);
    }
}

/// Greedy-relevance of every element with respect to the sample `S`:
/// `e ∉ S` is relevant iff `e ∈ greedy(S + e)`.
///
/// Running greedy on `S + e` repeats the run on `S` until `e` comes up, so
/// `e` is relevant iff it extends the part of `greedy(S)` that precedes it.
pub fn imp_mask<W: Scalar>(
    c: &Intersection,
    weights: &[W],
    order: &TieBreakOrder,
    sample: &[bool],
) -> Vec<bool> {
    let g = greedy_on(c, weights, order, |e| sample[e]);
    let positions: Vec<usize> = g.selected.iter().map(|&e| order.position(e)).collect();
    let mut relevant = vec![false; c.n()];
    let mut probe = Vec::with_capacity(g.selected.len() + 1);
    for e in 0..c.n() {
        if sample[e] || !weights[e].is_positive() {
            continue;
        }
        let before = positions.partition_point(|&pos| pos < order.position(e));
        probe.clear();
        probe.extend_from_slice(&g.selected[..before]);
        probe.push(e);
        relevant[e] = c.feasible(&probe);
    }
    relevant
}

/// `imp(S)`, ascending ids.
pub fn imp_set<W: Scalar>(
    c: &Intersection,
    weights: &[W],
    order: &TieBreakOrder,
    sample: &[bool],
) -> Vec<usize> {
    crate::matroid::members(&imp_mask(c, weights, order, sample))
}
