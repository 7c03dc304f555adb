//! Exact outcome distributions by exhaustive enumeration.

use std::cell::Cell;
use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use misp::arrival::ArrivalOrder;
use misp::matroid::{mask, members, ConcreteMatroid};
use misp::msp::{simple_partition_secretary, OrderOblivious};
use misp::overlap::{direct_outcome, simulate_greedy_with};
use misp::{Intersection, Rational, Result, Scalar, TieBreakOrder};

/// `(G, W)` with both sides sorted.
pub type Outcome = (Vec<usize>, Vec<usize>);

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

fn power(base: &Rational, exp: usize) -> Rational {
    (0..exp).fold(Rational::one(), |acc, _| acc * base)
}

/// Distribution of `(G, W)` from the coupled process. Coins are asked only
/// for some elements, so the coin sequences form a prefix tree; each leaf
/// is weighted by its own coin probabilities.
pub fn coupled_distribution<W: Scalar>(
    c: &Intersection,
    weights: &[W],
    order: &TieBreakOrder,
    p: &Rational,
) -> Result<BTreeMap<Outcome, Rational>> {
    let q = Rational::one() - p;
    let mut dist = BTreeMap::new();
    let mut stack = vec![Vec::<bool>::new()];
    while let Some(prefix) = stack.pop() {
        let asked = Cell::new(0usize);
        let run = simulate_greedy_with(
            c,
            weights,
            order,
            |_| {
                let i = asked.get();
                asked.set(i + 1);
                prefix.get(i).copied().unwrap_or(false)
            },
            true,
        )?;
        if asked.get() > prefix.len() {
            for bit in [false, true] {
                let mut longer = prefix.clone();
                longer.push(bit);
                stack.push(longer);
            }
            continue;
        }
        let heads = prefix.iter().filter(|&&b| b).count();
        let prob = power(p, heads) * power(&q, prefix.len() - heads);
        *dist.entry((sorted(run.g), sorted(run.w))).or_insert_with(Rational::zero) += prob;
    }
    Ok(dist)
}

/// Distribution of `(greedy(S), ∩_j OPT′_j)` over `S ~ μ_p`.
pub fn direct_distribution<W: Scalar>(
    c: &Intersection,
    weights: &[W],
    order: &TieBreakOrder,
    p: &Rational,
) -> BTreeMap<Outcome, Rational> {
    let n = c.n();
    let q = Rational::one() - p;
    let mut dist = BTreeMap::new();
    for bits in 0u32..1 << n {
        let sample: Vec<bool> = (0..n).map(|e| bits >> e & 1 == 1).collect();
        let size = bits.count_ones() as usize;
        let prob = power(p, size) * power(&q, n - size);
        let (g, common) = direct_outcome(c, weights, order, &sample);
        *dist.entry((sorted(g), sorted(common))).or_insert_with(Rational::zero) += prob;
    }
    dist
}

/// Every permutation of `items`, in lexicographic order of positions.
pub fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let first = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}

/// Exact probability that the simple partition rule with sampling
/// probability 1/2 selects each element. A binomial sample size followed by
/// a uniform subset is the same as independent fair coins, so the 2^n
/// sample outcomes are equally likely. Uniform random arrival averages over
/// all orders of the remaining elements.
pub fn simple_partition_frequencies<W: Scalar>(
    m: &ConcreteMatroid,
    weights: &[W],
    arrival: &ArrivalOrder,
    opt: &[usize],
) -> Result<Vec<Rational>> {
    let n = weights.len();
    let order = TieBreakOrder::new(weights);
    let opt = mask(n, opt);
    let mut freq = vec![Rational::zero(); n];
    let sample_weight = Rational::new(1.into(), (1u64 << n).into());
    // realize() ignores the generator for the deterministic orders
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for bits in 0u32..1 << n {
        let sampled: Vec<bool> = (0..n).map(|e| bits >> e & 1 == 1).collect();
        let rest: Vec<usize> = (0..n).filter(|&e| !sampled[e]).collect();
        let orders = match arrival {
            ArrivalOrder::UniformRandom => permutations(&rest),
            other => vec![other.realize(&rest, &order, &opt, &mut rng)],
        };
        let each = sample_weight.clone() / Rational::from_integer(orders.len().into());
        for arrivals in orders {
            let mut alg = simple_partition_secretary::<W>(m, 0.5)?;
            let shown: Vec<(usize, W)> = members(&sampled).into_iter().map(|e| (e, weights[e].clone())).collect();
            alg.observe_sample(&shown);
            for e in arrivals {
                if alg.offer(e, &weights[e]) {
                    freq[e] += each.clone();
                }
            }
        }
    }
    Ok(freq)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use misp::matroid::{PartitionMatroid, UniformMatroid};

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    #[test]
    fn single_element_outcomes() {
        let c = Intersection::single(Arc::new(UniformMatroid::new(1, 1)));
        let w = [3i64];
        let order = TieBreakOrder::new(&w);
        let dist = coupled_distribution(&c, &w, &order, &r(3, 4)).unwrap();
        assert_eq!(dist.len(), 2);
        assert_eq!(dist[&(vec![0], vec![])], r(3, 4));
        assert_eq!(dist[&(vec![], vec![0])], r(1, 4));
        assert_eq!(dist, direct_distribution(&c, &w, &order, &r(3, 4)));
    }

    #[test]
    fn permutation_count() {
        assert_eq!(permutations(&[4, 5, 6]).len(), 6);
        assert_eq!(permutations(&[]), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn one_block_of_two() {
        let m = ConcreteMatroid::Partition(PartitionMatroid::simple(vec![0, 0]));
        let f = simple_partition_frequencies(&m, &[2i64, 1], &ArrivalOrder::WeightIncreasing, &[0]).unwrap();
        // 0 is picked only when unsampled and 1 is sampled
        assert_eq!(f[0], r(1, 4));
    }
}
