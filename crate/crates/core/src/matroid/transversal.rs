use super::matching::has_perfect_left_matching;
use super::Matroid;
use crate::error::{invalid, Result};

/// Element `e` may be matched to any right node in `adjacency[e]`; a set is
/// independent iff all of its elements can be matched at once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransversalMatroid {
    right: usize,
    adjacency: Vec<Vec<usize>>,
}

impl TransversalMatroid {
    pub fn new(right: usize, adjacency: Vec<Vec<usize>>) -> Result<Self> {
        for (e, adj) in adjacency.iter().enumerate() {
            if let Some(r) = adj.iter().find(|&&r| r >= right) {
                return Err(invalid(format!(
                    "element {e} is adjacent to right node {r} outside 0..{right}"
                )));
            }
        }
        let adjacency = adjacency
            .into_iter()
            .map(|mut adj| {
                adj.sort_unstable();
                adj.dedup();
                adj
            })
            .collect();
        Ok(TransversalMatroid { right, adjacency })
    }

    pub fn right_count(&self) -> usize {
        self.right
    }

    pub fn neighbours(&self, e: usize) -> &[usize] {
        &self.adjacency[e]
    }
}

impl Matroid for TransversalMatroid {
    fn ground_size(&self) -> usize {
        self.adjacency.len()
    }

    fn independent(&self, set: &[usize]) -> bool {
        let adj: Vec<&[usize]> = set.iter().map(|&e| self.adjacency[e].as_slice()).collect();
        has_perfect_left_matching(&adj, self.right)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_admits_one_element() {
        let m = TransversalMatroid::new(1, vec![vec![0], vec![0], vec![0]]).unwrap();
        assert!(m.is_independent(&[0]).unwrap());
        assert!(!m.is_independent(&[0, 1]).unwrap());
    }

    #[test]
    fn isolated_elements_are_loops() {
        let m = TransversalMatroid::new(2, vec![vec![], vec![0, 1]]).unwrap();
        assert!(m.is_loop(0));
        assert!(!m.is_loop(1));
        assert!(TransversalMatroid::new(1, vec![vec![1]]).is_err());
    }
}
