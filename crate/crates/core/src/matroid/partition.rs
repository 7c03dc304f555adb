use super::Matroid;
use crate::error::{invalid, Result};

/// At most `caps[b]` elements may be taken from block `b`. Elements outside
/// every block are loops; the refined matroids of the reduce-and-solve
/// constructions use those as dummy refinements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionMatroid {
    block_of: Vec<Option<usize>>,
    caps: Vec<usize>,
}

impl PartitionMatroid {
    /// Blocks must partition `0..n` where `n` is the total number of ids;
    /// every cap must be at least one.
    pub fn new(blocks: Vec<Vec<usize>>, caps: Vec<usize>) -> Result<Self> {
        let n = blocks.iter().map(Vec::len).sum();
        let m = Self::with_loops(n, blocks, caps)?;
        if let Some(e) = m.block_of.iter().position(Option::is_none) {
            return Err(invalid(format!("element {e} belongs to no block")));
        }
        if m.caps.contains(&0) {
            return Err(invalid("partition caps must be at least 1"));
        }
        Ok(m)
    }

    /// Simple partition matroid (all caps 1) given each element's block.
    pub fn simple(block_of: Vec<usize>) -> Self {
        let count = block_of.iter().map(|b| b + 1).max().unwrap_or(0);
        PartitionMatroid {
            block_of: block_of.into_iter().map(Some).collect(),
            caps: vec![1; count],
        }
    }

    /// Like [`PartitionMatroid::new`] but ids in `0..n` not covered by any
    /// block are loops.
    pub fn with_loops(n: usize, blocks: Vec<Vec<usize>>, caps: Vec<usize>) -> Result<Self> {
        if blocks.len() != caps.len() {
            return Err(invalid(format!(
                "{} blocks but {} caps",
                blocks.len(),
                caps.len()
            )));
        }
        let mut block_of = vec![None; n];
        for (b, block) in blocks.iter().enumerate() {
            for &e in block {
                if e >= n {
                    return Err(invalid(format!("element id {e} out of range (n = {n})")));
                }
                if block_of[e].replace(b).is_some() {
                    return Err(invalid(format!("element {e} appears in two blocks")));
                }
            }
        }
        Ok(PartitionMatroid { block_of, caps })
    }

    pub fn block_of(&self, e: usize) -> Option<usize> {
        self.block_of[e]
    }

    pub fn block_assignment(&self) -> &[Option<usize>] {
        &self.block_of
    }

    pub fn block_count(&self) -> usize {
        self.caps.len()
    }

    pub fn cap(&self, block: usize) -> usize {
        self.caps[block]
    }

    pub fn caps(&self) -> &[usize] {
        &self.caps
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.caps.len()];
        for (e, b) in self.block_of.iter().enumerate() {
            if let Some(b) = b {
                blocks[*b].push(e);
            }
        }
        blocks
    }

    pub fn is_simple(&self) -> bool {
        self.caps.iter().all(|&c| c == 1)
    }
}

impl Matroid for PartitionMatroid {
    fn ground_size(&self) -> usize {
        self.block_of.len()
    }

    fn independent(&self, set: &[usize]) -> bool {
        let mut used = vec![0usize; self.caps.len()];
        for &e in set {
            match self.block_of[e] {
                None => return false,
                Some(b) => {
                    used[b] += 1;
                    if used[b] > self.caps[b] {
                        return false;
                    }
                }
            }
        }
        true
    }
}
