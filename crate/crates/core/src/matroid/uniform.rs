use super::Matroid;

/// Every set of at most `rank` elements is independent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformMatroid {
    n: usize,
    rank: usize,
}

impl UniformMatroid {
    pub fn new(n: usize, rank: usize) -> Self {
        UniformMatroid { n, rank }
    }

    pub fn full_rank(&self) -> usize {
        self.rank.min(self.n)
    }
}

impl Matroid for UniformMatroid {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn independent(&self, set: &[usize]) -> bool {
        set.len() <= self.rank
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_is_capped() {
        let m = UniformMatroid::new(4, 2);
        assert_eq!(m.rank(&[0, 1, 2]).unwrap(), 2);
        assert!(m.spans(&[0, 1], 3));
        assert!(!m.spans(&[0], 3));
        assert!(UniformMatroid::new(2, 0).is_loop(1));
    }
}
