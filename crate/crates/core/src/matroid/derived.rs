use std::sync::Arc;

use super::Matroid;
use crate::error::{invalid, Result};

/// Dual matroid: `S` is independent iff `N \ S` still spans the base, i.e.
/// `rank(N \ S) = rank(N)`. The dual of a graphic matroid is co-graphic.
#[derive(Clone, Debug)]
pub struct Dual {
    base: Arc<dyn Matroid>,
    base_rank: usize,
}

impl Dual {
    pub fn new(base: Arc<dyn Matroid>) -> Self {
        let all: Vec<usize> = (0..base.ground_size()).collect();
        let base_rank = base.rank_of(&all);
        Dual { base, base_rank }
    }

    pub fn base(&self) -> &Arc<dyn Matroid> {
        &self.base
    }
}

impl Matroid for Dual {
    fn ground_size(&self) -> usize {
        self.base.ground_size()
    }

    fn independent(&self, set: &[usize]) -> bool {
        let n = self.base.ground_size();
        let mut removed = vec![false; n];
        for &e in set {
            removed[e] = true;
        }
        let rest: Vec<usize> = (0..n).filter(|&e| !removed[e]).collect();
        self.base.rank_of(&rest) == self.base_rank
    }
}

/// `M | T`: the base restricted to `subset`, re-indexed so that local id `i`
/// is base element `subset[i]`.
#[derive(Clone, Debug)]
pub struct Restriction {
    base: Arc<dyn Matroid>,
    subset: Vec<usize>,
}

impl Restriction {
    pub fn new(base: Arc<dyn Matroid>, subset: Vec<usize>) -> Result<Self> {
        let n = base.ground_size();
        let mut seen = vec![false; n];
        for &e in &subset {
            if e >= n {
                return Err(invalid(format!("restriction id {e} out of range (n = {n})")));
            }
            if std::mem::replace(&mut seen[e], true) {
                return Err(invalid(format!("restriction lists element {e} twice")));
            }
        }
        Ok(Restriction { base, subset })
    }

    /// Base id of local element `i`.
    pub fn base_id(&self, i: usize) -> usize {
        self.subset[i]
    }
}

impl Matroid for Restriction {
    fn ground_size(&self) -> usize {
        self.subset.len()
    }

    fn independent(&self, set: &[usize]) -> bool {
        let mapped: Vec<usize> = set.iter().map(|&i| self.subset[i]).collect();
        self.base.independent(&mapped)
    }
}

/// Disjoint union: part `j` occupies the id range starting at the sum of the
/// ground sizes of parts `0..j`.
#[derive(Clone, Debug)]
pub struct DirectSum {
    parts: Vec<Arc<dyn Matroid>>,
    offsets: Vec<usize>,
}

impl DirectSum {
    pub fn new(parts: Vec<Arc<dyn Matroid>>) -> Self {
        let mut offsets = Vec::with_capacity(parts.len() + 1);
        let mut acc = 0;
        for p in &parts {
            offsets.push(acc);
            acc += p.ground_size();
        }
        offsets.push(acc);
        DirectSum { parts, offsets }
    }

    pub fn offset(&self, part: usize) -> usize {
        self.offsets[part]
    }

    fn part_of(&self, e: usize) -> usize {
        // offsets is sorted; last entry is the total size
        self.offsets.partition_point(|&o| o <= e) - 1
    }
}

impl Matroid for DirectSum {
    fn ground_size(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    fn independent(&self, set: &[usize]) -> bool {
        let mut split: Vec<Vec<usize>> = vec![Vec::new(); self.parts.len()];
        for &e in set {
            let j = self.part_of(e);
            split[j].push(e - self.offsets[j]);
        }
        self.parts
            .iter()
            .zip(&split)
            .all(|(p, s)| s.is_empty() || p.independent(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{GraphicMatroid, UniformMatroid};

    fn triangle() -> Arc<dyn Matroid> {
        Arc::new(GraphicMatroid::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap())
    }

    #[test]
    fn cographic_triangle() {
        let d = Dual::new(triangle());
        // r*({0}) = 1 + r({1,2}) - r(N) = 1 + 2 - 2
        assert_eq!(d.rank(&[0]).unwrap(), 1);
        assert_eq!(d.rank(&[0, 1, 2]).unwrap(), 1);
        assert!(!d.independent(&[0, 1]));
    }

    #[test]
    fn restriction_reindexes() {
        let r = Restriction::new(triangle(), vec![2, 0]).unwrap();
        assert_eq!(r.ground_size(), 2);
        assert_eq!(r.base_id(0), 2);
        assert!(r.independent(&[0, 1]));
        assert!(Restriction::new(triangle(), vec![0, 0]).is_err());
        assert!(Restriction::new(triangle(), vec![3]).is_err());
    }

    #[test]
    fn direct_sum_splits_by_range() {
        let s = DirectSum::new(vec![
            Arc::new(UniformMatroid::new(2, 1)),
            Arc::new(UniformMatroid::new(3, 2)),
        ]);
        assert_eq!(s.ground_size(), 5);
        assert!(s.independent(&[0, 2, 3]));
        assert!(!s.independent(&[0, 1]));
        assert!(!s.independent(&[2, 3, 4]));
        assert_eq!(s.rank_of(&[0, 1, 2, 3, 4]), 3);
    }
}
