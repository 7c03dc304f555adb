use super::Matroid;
use crate::error::{invalid, Result};

/// Union-find with path halving and union by size.
#[derive(Clone, Debug)]
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes of `a` and `b`; false if they were already one class.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

/// Cycle matroid of a multigraph: element `e` is the edge `edges[e]`, and a
/// set of edges is independent iff it is a forest. Self-loops are loops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphicMatroid {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl GraphicMatroid {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if let Some((i, _)) = edges
            .iter()
            .enumerate()
            .find(|(_, &(u, v))| u >= vertices || v >= vertices)
        {
            return Err(invalid(format!(
                "edge {i} has an endpoint outside 0..{vertices}"
            )));
        }
        Ok(GraphicMatroid { vertices, edges })
    }

    /// Complete graph on `n` vertices, edges in lexicographic order.
    pub fn complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        GraphicMatroid { vertices: n, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }
}

impl Matroid for GraphicMatroid {
    fn ground_size(&self) -> usize {
        self.edges.len()
    }

    fn independent(&self, set: &[usize]) -> bool {
        // a forest on V vertices has at most V - 1 edges
        if !set.is_empty() && set.len() >= self.vertices {
            return false;
        }
        let mut dsu = DisjointSets::new(self.vertices);
        set.iter().all(|&e| {
            let (u, v) = self.edges[e];
            dsu.union(u, v)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> GraphicMatroid {
        GraphicMatroid::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn forests_are_independent() {
        let m = triangle();
        assert!(m.is_independent(&[0, 1]).unwrap());
        assert!(!m.is_independent(&[0, 1, 2]).unwrap());
        assert!(m.in_span(&[0, 1], 2).unwrap());
    }

    #[test]
    fn self_loops_and_parallel_edges() {
        let m = GraphicMatroid::new(2, vec![(0, 0), (0, 1), (1, 0)]).unwrap();
        assert!(m.is_loop(0));
        assert!(!m.independent(&[1, 2]));
        assert!(m.independent(&[2]));
        assert!(GraphicMatroid::new(2, vec![(0, 2)]).is_err());
    }

    #[test]
    fn complete_graph_rank() {
        let k4 = GraphicMatroid::complete(4);
        assert_eq!(k4.ground_size(), 6);
        assert_eq!(k4.rank_of(&(0..6).collect::<Vec<_>>()), 3);
    }
}
