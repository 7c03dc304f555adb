//! Matroid oracles over a dense ground set `0..n`.
//!
//! Every matroid answers a single question, "is this set independent?".
//! Rank and span are derived from it by greedy construction, so the derived
//! matroids (dual, restriction, direct sum) only have to forward independence
//! queries.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::sync::Arc;

use crate::error::{invalid, Result};
use crate::scalar::Scalar;

mod derived;
mod desc;
mod graphic;
mod laminar;
mod linear;
pub mod matching;
mod partition;
mod transversal;
mod uniform;

pub use derived::{DirectSum, Dual, Restriction};
pub use desc::{ConcreteMatroid, LaminarSetDesc, MatroidDesc};
pub use graphic::{DisjointSets, GraphicMatroid};
pub use laminar::LaminarMatroid;
pub use linear::LinearMatroid;
pub use partition::PartitionMatroid;
pub use transversal::TransversalMatroid;
pub use uniform::UniformMatroid;

/// Independence oracle over the ground set `0..ground_size()`.
///
/// Oracles are immutable once built and may be shared between threads.
pub trait Matroid: Debug + Send + Sync {
    fn ground_size(&self) -> usize;

    /// Independence test for a set of distinct, in-range ids. Callers that
    /// cannot guarantee this should go through [`Matroid::is_independent`].
    fn independent(&self, set: &[usize]) -> bool;

    /// Range-checked independence query. Duplicate ids are ignored.
    fn is_independent(&self, set: &[usize]) -> Result<bool> {
        let set = checked_set(self.ground_size(), set)?;
        Ok(self.independent(&set))
    }

    fn rank(&self, set: &[usize]) -> Result<usize> {
        let set = checked_set(self.ground_size(), set)?;
        Ok(self.rank_of(&set))
    }

    /// Whether `e` lies in the span of `set`, i.e. `rank(set + e) == rank(set)`.
    fn in_span(&self, set: &[usize], e: usize) -> Result<bool> {
        let set = checked_set(self.ground_size(), set)?;
        check_id(self.ground_size(), e)?;
        Ok(self.spans(&set, e))
    }

    /// Size of a maximal independent subset, built greedily.
    fn rank_of(&self, set: &[usize]) -> usize {
        self.basis_of(set).len()
    }

    /// A maximal independent subset of `set`, built greedily in the given order.
    fn basis_of(&self, set: &[usize]) -> Vec<usize> {
        let mut basis = Vec::new();
        for &e in set {
            basis.push(e);
            if !self.independent(&basis) {
                basis.pop();
            }
        }
        basis
    }

    fn spans(&self, set: &[usize], e: usize) -> bool {
        if set.contains(&e) {
            return true;
        }
        let mut basis = self.basis_of(set);
        basis.push(e);
        !self.independent(&basis)
    }

    fn is_loop(&self, e: usize) -> bool {
        !self.independent(&[e])
    }
}

impl<M: Matroid + ?Sized> Matroid for Arc<M> {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }

    fn independent(&self, set: &[usize]) -> bool {
        (**self).independent(set)
    }
}

impl<M: Matroid + ?Sized> Matroid for Box<M> {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }

    fn independent(&self, set: &[usize]) -> bool {
        (**self).independent(set)
    }
}

pub(crate) fn check_id(n: usize, e: usize) -> Result<()> {
    if e >= n {
        return Err(invalid(format!("element id {e} out of range for ground set of size {n}")));
    }
    Ok(())
}

/// Validates ids against `n` and drops duplicates, keeping first occurrences.
pub fn checked_set(n: usize, set: &[usize]) -> Result<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut out = Vec::with_capacity(set.len());
    for &e in set {
        check_id(n, e)?;
        if !std::mem::replace(&mut seen[e], true) {
            out.push(e);
        }
    }
    Ok(out)
}

/// Membership mask of length `n` for the given ids.
pub fn mask(n: usize, ids: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &e in ids {
        m[e] = true;
    }
    m
}

/// Ids set in a membership mask, ascending.
pub fn members(mask: &[bool]) -> Vec<usize> {
    mask.iter()
        .enumerate()
        .filter_map(|(i, &b)| b.then_some(i))
        .collect()
}

/// The global element numbering used by every greedy procedure: weight
/// descending, ties broken by ascending id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TieBreakOrder {
    order: Vec<usize>,
    position: Vec<usize>,
}

impl TieBreakOrder {
    pub fn new<W: Scalar>(weights: &[W]) -> Self {
        let mut order: Vec<usize> = (0..weights.len()).collect();
        order.sort_by(|&a, &b| {
            weights[b]
                .partial_cmp(&weights[a])
                .unwrap_or(Ordering::Equal)
                .then(a.cmp(&b))
        });
        let mut position = vec![0; weights.len()];
        for (pos, &e) in order.iter().enumerate() {
            position[e] = pos;
        }
        TieBreakOrder { order, position }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Elements from heaviest to lightest.
    pub fn as_slice(&self) -> &[usize] {
        &self.order
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = usize> + '_ {
        self.order.iter().copied()
    }

    /// Zero-based rank of `e` in the order (0 = heaviest).
    pub fn position(&self, e: usize) -> usize {
        self.position[e]
    }

    /// The first `len` elements, i.e. the `len` heaviest.
    pub fn prefix(&self, len: usize) -> &[usize] {
        &self.order[..len.min(self.order.len())]
    }

    pub fn precedes(&self, a: usize, b: usize) -> bool {
        self.position[a] < self.position[b]
    }

    /// Sorts ids into this order.
    pub fn sort(&self, ids: &mut [usize]) {
        ids.sort_by_key(|&e| self.position[e]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tie_break_is_weight_desc_then_id_asc() {
        let order = TieBreakOrder::new(&[2, 5, 2, 7, 5]);
        assert_eq!(order.as_slice(), &[3, 1, 4, 0, 2]);
        assert_eq!(order.position(3), 0);
        assert!(order.precedes(0, 2));
        assert!(order.precedes(1, 4));
        assert_eq!(order.prefix(2), &[3, 1]);
    }

    #[test]
    fn checked_queries_reject_out_of_range_ids() {
        let m = UniformMatroid::new(3, 2);
        assert!(m.is_independent(&[0, 3]).is_err());
        assert!(m.rank(&[5]).is_err());
        assert!(m.in_span(&[0], 9).is_err());
        assert_eq!(m.rank(&[]).unwrap(), 0);
        assert_eq!(m.rank(&[0, 1, 2]).unwrap(), 2);
        assert!(m.is_independent(&[1, 1]).unwrap());
    }
}
