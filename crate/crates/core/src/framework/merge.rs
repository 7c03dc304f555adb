//! One pooled sample standing in for several independent ones.

use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::matroid::members;
use crate::msp::uniform_subset;
use crate::rng::{bernoulli_mask, check_probability};

/// Counts and realized sets of a merged sample.
///
/// `s` is a `μ_p` sample and `s_j[j]` a uniform `m_j[j]`-subset, jointly
/// distributed as if drawn independently. `q_j[j] = |S_j ∩ (S ∪ S_1 ∪ … ∪
/// S_{j−1})|`, and `pooled` is `S ∪ S_1 ∪ … ∪ S_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergedSamplePlan {
    pub m: usize,
    pub m_j: Vec<usize>,
    pub q_j: Vec<usize>,
    pub pooled: Vec<usize>,
    pub s: Vec<usize>,
    pub s_j: Vec<Vec<usize>>,
}

impl MergedSamplePlan {
    /// `m + Σ_j (m_j − q_j)`.
    pub fn pooled_size(&self) -> usize {
        self.m + self.m_j.iter().zip(&self.q_j).map(|(m, q)| m - q).sum::<usize>()
    }
}

/// Draws `S ~ μ_p` and one uniform sample per entry of `sizes`.
///
/// The counts `(m, m_j, q_j)` come from a throwaway run of the independent
/// draws. A single uniform set `A` of size `m + Σ(m_j − q_j)` is then taken
/// and split: `S` is a uniform `m`-subset of `A`, and each `S_j` takes `q_j`
/// elements of what is already used and `m_j − q_j` fresh ones.
pub fn merge_samples<R: Rng + ?Sized>(
    n: usize,
    p: f64,
    sizes: &[usize],
    rng: &mut R,
) -> Result<MergedSamplePlan> {
    check_probability(p)?;
    if let Some(&m) = sizes.iter().find(|&&m| m > n) {
        return Err(invalid(format!("sample size {m} exceeds the ground set size {n}")));
    }

    let mut used = bernoulli_mask(n, p, rng);
    let m = used.iter().filter(|&&b| b).count();
    let mut q_j = Vec::with_capacity(sizes.len());
    for &m_j in sizes {
        let s_j = uniform_subset(n, m_j, rng);
        q_j.push(s_j.iter().filter(|&&e| used[e]).count());
        for e in s_j {
            used[e] = true;
        }
    }

    let size = m + sizes.iter().zip(&q_j).map(|(m, q)| m - q).sum::<usize>();
    let pooled = uniform_subset(n, size, rng);
    let pick = |from: &[usize], count: usize, rng: &mut R| -> Vec<usize> {
        uniform_subset(from.len(), count, rng).into_iter().map(|i| from[i]).collect()
    };

    let s = pick(&pooled, m, rng);
    let mut seen = vec![false; n];
    for &e in &s {
        seen[e] = true;
    }
    let mut s_j = Vec::with_capacity(sizes.len());
    for (&m_j, &q) in sizes.iter().zip(&q_j) {
        let old: Vec<usize> = pooled.iter().copied().filter(|&e| seen[e]).collect();
        let fresh: Vec<usize> = pooled.iter().copied().filter(|&e| !seen[e]).collect();
        let mut set = pick(&old, q, rng);
        set.extend(pick(&fresh, m_j - q, rng));
        set.sort_unstable();
        for &e in &set {
            seen[e] = true;
        }
        s_j.push(set);
    }
    if members(&seen) != pooled {
        return Err(Error::Invariant("merged samples do not cover the pooled sample".into()));
    }
    let plan = MergedSamplePlan { m, m_j: sizes.to_vec(), q_j, pooled, s, s_j };
    debug_assert_eq!(plan.pooled.len(), plan.pooled_size());
    Ok(plan)
}

/// The same sets drawn independently, as the reference distribution.
pub fn independent_samples<R: Rng + ?Sized>(
    n: usize,
    p: f64,
    sizes: &[usize],
    rng: &mut R,
) -> Result<(Vec<usize>, Vec<Vec<usize>>)> {
    check_probability(p)?;
    if let Some(&m) = sizes.iter().find(|&&m| m > n) {
        return Err(invalid(format!("sample size {m} exceeds the ground set size {n}")));
    }
    let s = members(&bernoulli_mask(n, p, rng));
    let s_j = sizes.iter().map(|&m| uniform_subset(n, m, rng)).collect();
    Ok((s, s_j))
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn sizes_and_cover() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let plan = merge_samples(9, 0.75, &[3, 5], &mut rng).unwrap();
            assert_eq!(plan.s.len(), plan.m);
            assert_eq!(plan.pooled.len(), plan.pooled_size());
            for (j, set) in plan.s_j.iter().enumerate() {
                assert_eq!(set.len(), plan.m_j[j]);
                assert!(set.iter().all(|e| plan.pooled.binary_search(e).is_ok()));
            }
        }
    }

    #[test]
    fn no_inner_samples_is_a_plain_bernoulli_sample() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let plan = merge_samples(6, 1.0, &[], &mut rng).unwrap();
        assert_eq!(plan.s, vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(plan.pooled, plan.s);
        let plan = merge_samples(6, 0.0, &[], &mut rng).unwrap();
        assert!(plan.pooled.is_empty());
    }

    #[test]
    fn oversized_requests_are_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(merge_samples(3, 0.5, &[4], &mut rng).is_err());
        assert!(merge_samples(3, 1.5, &[1], &mut rng).is_err());
    }

    #[test]
    fn marginal_of_s_is_p() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let trials = 20_000;
        let mut hits = [0usize; 4];
        for _ in 0..trials {
            for e in merge_samples(4, 0.75, &[2, 1], &mut rng).unwrap().s {
                hits[e] += 1;
            }
        }
        for h in hits {
            let freq = h as f64 / trials as f64;
            let se = (0.75f64 * 0.25 / trials as f64).sqrt();
            assert!((freq - 0.75).abs() < 4.0 * se, "{freq}");
        }
    }
}
