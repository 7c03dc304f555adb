//! Exhaustive matroid axiom checks over all subsets of a small ground set.
//!
//! Ranks here come from the independence table alone (largest independent
//! subset), not from the oracle's own rank routine.

use misp::Matroid;

/// Largest ground set the tables are built for.
pub const MAX_N: usize = 10;

fn ids(mask: usize, n: usize) -> Vec<usize> {
    (0..n).filter(|&e| mask >> e & 1 == 1).collect()
}

/// Independence of every `A ⊆ 0..n`, indexed by bitmask.
pub fn independence_table(m: &dyn Matroid) -> Vec<bool> {
    let n = m.ground_size();
    assert!(n <= MAX_N, "ground set of {n} is too large to tabulate");
    (0..1usize << n).map(|a| m.independent(&ids(a, n))).collect()
}

/// `rank[A]` = size of a largest independent subset of `A`.
pub fn rank_table(indep: &[bool]) -> Vec<usize> {
    let mut rank = vec![0usize; indep.len()];
    for a in 0..indep.len() {
        rank[a] = if indep[a] {
            a.count_ones() as usize
        } else {
            (0..usize::BITS)
                .filter(|e| a >> e & 1 == 1)
                .map(|e| rank[a & !(1 << e)])
                .max()
                .unwrap_or(0)
        };
    }
    rank
}

/// First axiom violation found, if any: the empty set, downward closure,
/// exchange, and agreement of the oracle's rank with the table.
pub fn check_axioms(m: &dyn Matroid) -> Result<(), String> {
    let n = m.ground_size();
    let indep = independence_table(m);
    if !indep[0] {
        return Err("the empty set is dependent".into());
    }
    for a in 1..indep.len() {
        if !indep[a] {
            continue;
        }
        for e in 0..n {
            if a >> e & 1 == 1 && !indep[a & !(1 << e)] {
                return Err(format!("{:?} independent but not {:?}", ids(a, n), ids(a & !(1 << e), n)));
            }
        }
    }
    for i in (0..indep.len()).filter(|&i| indep[i]) {
        for j in (0..indep.len()).filter(|&j| indep[j] && j.count_ones() > i.count_ones()) {
            let extends = (0..n).any(|e| j >> e & 1 == 1 && i >> e & 1 == 0 && indep[i | 1 << e]);
            if !extends {
                return Err(format!("no exchange from {:?} into {:?}", ids(j, n), ids(i, n)));
            }
        }
    }
    let rank = rank_table(&indep);
    for a in 0..indep.len() {
        let oracle = m.rank_of(&ids(a, n));
        if oracle != rank[a] {
            return Err(format!("rank of {:?} is {} by oracle, {} by table", ids(a, n), oracle, rank[a]));
        }
    }
    Ok(())
}

/// Checks `r*(A) = |A| − r(N) + r(N∖A)` for every `A`.
pub fn check_dual_rank(m: &dyn Matroid, dual: &dyn Matroid) -> Result<(), String> {
    let n = m.ground_size();
    if dual.ground_size() != n {
        return Err("dual has a different ground set".into());
    }
    let r = rank_table(&independence_table(m));
    let r_star = rank_table(&independence_table(dual));
    let full = (1usize << n) - 1;
    for a in 0..=full {
        let expected = a.count_ones() as usize + r[full ^ a] - r[full];
        if r_star[a] != expected {
            return Err(format!("dual rank of {:?} is {}, identity gives {expected}", ids(a, n), r_star[a]));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use misp::matroid::{Dual, GraphicMatroid, UniformMatroid};
    use std::sync::Arc;

    /// Maximal independent sets {0} and {1,2}: exchange fails.
    #[derive(Debug)]
    struct NotAMatroid;

    impl Matroid for NotAMatroid {
        fn ground_size(&self) -> usize {
            3
        }

        fn independent(&self, set: &[usize]) -> bool {
            set.is_empty() || set == [0] || set.iter().all(|&e| e != 0)
        }
    }

    #[test]
    fn accepts_matroids_and_rejects_the_rest() {
        assert!(check_axioms(&GraphicMatroid::complete(4)).is_ok());
        assert!(check_axioms(&UniformMatroid::new(5, 2)).is_ok());
        assert!(check_axioms(&NotAMatroid).unwrap_err().contains("exchange"));
    }

    #[test]
    fn dual_of_uniform() {
        let base: Arc<dyn Matroid> = Arc::new(UniformMatroid::new(5, 2));
        assert!(check_dual_rank(base.as_ref(), &Dual::new(base.clone())).is_ok());
        assert!(check_dual_rank(base.as_ref(), &UniformMatroid::new(5, 2)).is_err());
        assert!(check_dual_rank(base.as_ref(), &UniformMatroid::new(5, 3)).is_ok());
    }

    #[test]
    fn rank_table_by_hand() {
        let rank = rank_table(&independence_table(&UniformMatroid::new(3, 1)));
        assert_eq!(rank, vec![0, 1, 1, 1, 1, 1, 1, 1]);
    }
}
