//! Random instance families.

use std::fmt;
use std::str::FromStr;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::SecretaryInstance;
use crate::error::{invalid, Error, Result};
use crate::matroid::{LaminarSetDesc, MatroidDesc};
use crate::scalar::ExactValue;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// One partition matroid with caps 1 or 2.
    RandomPartition,
    /// One laminar matroid: a root with two nested children.
    RandomLaminar,
    /// One graphic matroid; `size` is the number of edges.
    RandomGraph,
    /// One transversal matroid; each element sees one or two right nodes.
    RandomBipartite,
    /// One linear matroid whose matrix is the incidence matrix of a random
    /// directed graph (totally unimodular, two nonzeros per column) plus a
    /// few unit columns.
    RandomSparseMatrix,
    /// Bipartite matching: partition by left endpoint and by right endpoint.
    BipartiteMatchingIntersection,
    /// A simple partition matroid and a transversal matroid.
    PartitionTransversal,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::RandomPartition,
        Family::RandomLaminar,
        Family::RandomGraph,
        Family::RandomBipartite,
        Family::RandomSparseMatrix,
        Family::BipartiteMatchingIntersection,
        Family::PartitionTransversal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::RandomPartition => "random-partition",
            Family::RandomLaminar => "random-laminar",
            Family::RandomGraph => "random-graph",
            Family::RandomBipartite => "random-bipartite",
            Family::RandomSparseMatrix => "random-sparse-matrix",
            Family::BipartiteMatchingIntersection => "bipartite-matching-intersection",
            Family::PartitionTransversal => "partition-transversal",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "partition×transversal" || s == "partition-x-transversal" {
            return Ok(Family::PartitionTransversal);
        }
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| invalid(format!("unknown instance family {s:?}")))
    }
}

/// Distinct integer weights in `1..=10n`, so that optima are unique.
fn distinct_weights(n: usize, rng: &mut ChaCha8Rng) -> Vec<i64> {
    index::sample(rng, 10 * n.max(1), n).into_iter().map(|v| v as i64 + 1).collect()
}

/// `count` random blocks over `0..n`, every block nonempty when `count ≤ n`.
fn random_blocks(n: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    (0..n).map(|e| if e < count { e } else { rng.random_range(0..count) }).collect()
}

fn group(block_of: &[usize], count: usize) -> Vec<Vec<usize>> {
    let mut blocks = vec![Vec::new(); count];
    for (e, &b) in block_of.iter().enumerate() {
        blocks[b].push(e);
    }
    blocks
}

fn random_adjacency(n: usize, right: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    (0..n)
        .map(|_| {
            let degree = rng.random_range(1..=2.min(right));
            let mut nbrs = index::sample(rng, right, degree).into_vec();
            nbrs.sort_unstable();
            nbrs
        })
        .collect()
}

/// Deterministic in `(family, size, seed)`.
pub fn generate_instance(family: Family, size: usize, seed: u64) -> Result<SecretaryInstance<i64>> {
    if size == 0 {
        return Err(invalid("instance size must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = size;
    let matroids = match family {
        Family::RandomPartition => {
            let count = (n / 3).max(1);
            let block_of = random_blocks(n, count, &mut rng);
            let caps = (0..count).map(|_| rng.random_range(1..=2)).collect();
            vec![MatroidDesc::Partition { blocks: group(&block_of, count), caps: Some(caps) }]
        }
        Family::RandomLaminar => {
            let mut ids: Vec<usize> = (0..n).collect();
            ids.shuffle(&mut rng);
            let split = n / 2;
            let (left, right) = ids.split_at(split);
            let mut sets = vec![LaminarSetDesc { elements: (0..n).collect(), cap: (n / 2).max(1) }];
            for part in [left, right] {
                if !part.is_empty() {
                    let mut elements = part.to_vec();
                    elements.sort_unstable();
                    let cap = rng.random_range(1..=part.len().div_ceil(2));
                    sets.push(LaminarSetDesc { elements, cap });
                }
            }
            vec![MatroidDesc::Laminar { n, sets }]
        }
        Family::RandomGraph => {
            let vertices = (n / 2 + 1).max(3);
            let edges = (0..n)
                .map(|_| {
                    let pair = index::sample(&mut rng, vertices, 2);
                    [pair.index(0).min(pair.index(1)), pair.index(0).max(pair.index(1))]
                })
                .collect();
            vec![MatroidDesc::Graphic { vertices, edges }]
        }
        Family::RandomBipartite => {
            let right = (n / 2).max(2);
            vec![MatroidDesc::Transversal { right, adjacency: random_adjacency(n, right, &mut rng) }]
        }
        Family::RandomSparseMatrix => {
            let rows = (n / 2).max(2);
            let mut matrix = vec![vec![ExactValue::from(0); n]; rows];
            for c in 0..n {
                if rng.random_bool(0.25) {
                    matrix[rng.random_range(0..rows)][c] = ExactValue::from(1);
                } else {
                    let pair = index::sample(&mut rng, rows, 2);
                    matrix[pair.index(0)][c] = ExactValue::from(1);
                    matrix[pair.index(1)][c] = ExactValue::from(-1);
                }
            }
            vec![MatroidDesc::Linear { rows: matrix }]
        }
        Family::BipartiteMatchingIntersection => {
            let side = (n / 2).max(1);
            let left = random_blocks(n, side, &mut rng);
            let right: Vec<usize> = (0..n).map(|_| rng.random_range(0..side)).collect();
            vec![
                MatroidDesc::Partition { blocks: group(&left, side), caps: None },
                MatroidDesc::Partition { blocks: group(&right, side), caps: None },
            ]
        }
        Family::PartitionTransversal => {
            let count = (n / 2).max(1);
            let block_of = random_blocks(n, count, &mut rng);
            let right = (n / 2).max(2);
            vec![
                MatroidDesc::Partition { blocks: group(&block_of, count), caps: None },
                MatroidDesc::Transversal { right, adjacency: random_adjacency(n, right, &mut rng) },
            ]
        }
    };
    let instance = SecretaryInstance { weights: distinct_weights(n, &mut rng), matroids, objective: None };
    instance.validate()?;
    Ok(instance)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_family_builds_and_is_reproducible() {
        for family in Family::ALL {
            for size in [1, 4, 9] {
                let a = generate_instance(family, size, 7).unwrap();
                assert_eq!(a, generate_instance(family, size, 7).unwrap(), "{family}");
                assert_eq!(a.n(), size);
                let mut w = a.weights.clone();
                w.sort_unstable();
                w.dedup();
                assert_eq!(w.len(), size, "weights are distinct");
            }
            assert_eq!(family.name().parse::<Family>().unwrap(), family);
        }
        assert!("random-hypergraph".parse::<Family>().is_err());
        assert_eq!("partition×transversal".parse::<Family>().unwrap(), Family::PartitionTransversal);
    }

    #[test]
    fn matching_instances_have_two_partition_matroids() {
        let inst = generate_instance(Family::BipartiteMatchingIntersection, 6, 1).unwrap();
        assert_eq!(inst.k(), 2);
        assert!(inst.matroids.iter().all(|m| m.family() == "partition"));
    }
}
