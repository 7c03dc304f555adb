use super::Matroid;
use crate::error::{invalid, Result};

/// Caps `|I ∩ L| <= cap(L)` for every set `L` of a laminar family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaminarMatroid {
    n: usize,
    sets: Vec<(Vec<usize>, usize)>,
    // indices of the family sets containing each element
    containing: Vec<Vec<usize>>,
}

impl LaminarMatroid {
    pub fn new(n: usize, sets: Vec<(Vec<usize>, usize)>) -> Result<Self> {
        let mut masks = Vec::with_capacity(sets.len());
        for (elements, _) in &sets {
            let mut m = vec![false; n];
            for &e in elements {
                if e >= n {
                    return Err(invalid(format!("element id {e} out of range (n = {n})")));
                }
                m[e] = true;
            }
            masks.push(m);
        }
        for a in 0..sets.len() {
            for b in a + 1..sets.len() {
                let meet = (0..n).any(|e| masks[a][e] && masks[b][e]);
                let a_in_b = (0..n).all(|e| !masks[a][e] || masks[b][e]);
                let b_in_a = (0..n).all(|e| !masks[b][e] || masks[a][e]);
                if meet && !a_in_b && !b_in_a {
                    return Err(invalid(format!(
                        "family sets {a} and {b} are neither nested nor disjoint"
                    )));
                }
            }
        }
        let mut containing = vec![Vec::new(); n];
        for (s, m) in masks.iter().enumerate() {
            for e in 0..n {
                if m[e] {
                    containing[e].push(s);
                }
            }
        }
        Ok(LaminarMatroid { n, sets, containing })
    }

    pub fn sets(&self) -> &[(Vec<usize>, usize)] {
        &self.sets
    }
}

impl Matroid for LaminarMatroid {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn independent(&self, set: &[usize]) -> bool {
        let mut used = vec![0usize; self.sets.len()];
        for &e in set {
            for &s in &self.containing[e] {
                used[s] += 1;
                if used[s] > self.sets[s].1 {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_caps() {
        // {0,1,2,3} cap 2 containing {0,1} cap 1
        let m = LaminarMatroid::new(4, vec![(vec![0, 1, 2, 3], 2), (vec![0, 1], 1)]).unwrap();
        assert!(m.independent(&[0, 2]));
        assert!(!m.independent(&[0, 1]));
        assert!(!m.independent(&[0, 2, 3]));
        assert_eq!(m.rank_of(&[0, 1, 2, 3]), 2);
    }

    #[test]
    fn rejects_crossing_sets() {
        assert!(LaminarMatroid::new(3, vec![(vec![0, 1], 1), (vec![1, 2], 1)]).is_err());
    }
}
