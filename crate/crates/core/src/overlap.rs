//! The overlap reduction.
//!
//! Given a sample `S`, every unsampled element keeps its weight if it is
//! greedy-relevant with respect to `S` and is zeroed otherwise. The
//! single-matroid optima under the reduced weights then share a large common
//! part in expectation over `S ~ μ_p`.
//!
//! [`simulate_greedy`] is the coupled process that generates `greedy(S)` and
//! that common part in one pass, together with the auxiliary sets `W′` and
//! `H_j` whose invariants explain why the overlap is large.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::matroid::{Matroid, TieBreakOrder};
use crate::offline::{brute_force_opt, greedy_on, greedy_single, imp_mask, Intersection};
use crate::rng::{bernoulli_mask, check_probability, trial_rng};
use crate::scalar::{total, Scalar};
use crate::stats::Estimate;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// In the sample; weight zeroed.
    Sampled,
    /// Unsampled and greedy-relevant; weight kept.
    GreedyRelevant,
    /// Unsampled but irrelevant (including loops and zero weights).
    Zeroed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReducedWeights<W> {
    pub weights: Vec<W>,
    pub provenance: Vec<Provenance>,
}

impl<W: Scalar> ReducedWeights<W> {
    /// Ids that kept their weight.
    pub fn kept(&self) -> Vec<usize> {
        self.provenance
            .iter()
            .enumerate()
            .filter_map(|(e, p)| (*p == Provenance::GreedyRelevant).then_some(e))
            .collect()
    }
}

/// Reduced weights for sample `S` (given as a membership mask).
pub fn overlapping_opt<W: Scalar>(
    c: &Intersection,
    weights: &[W],
    order: &TieBreakOrder,
    sample: &[bool],
) -> ReducedWeights<W> {
    let relevant = imp_mask(c, weights, order, sample);
    let mut reduced = Vec::with_capacity(c.n());
    let mut provenance = Vec::with_capacity(c.n());
    for e in 0..c.n() {
        let (w, p) = if sample[e] {
            (W::zero(), Provenance::Sampled)
        } else if relevant[e] {
            (weights[e].clone(), Provenance::GreedyRelevant)
        } else {
            (W::zero(), Provenance::Zeroed)
        };
        reduced.push(w);
        provenance.push(p);
    }
    ReducedWeights { weights: reduced, provenance }
}

/// Online form of [`overlapping_opt`]: built from the sample alone, it
/// reduces each later element as it arrives, looking only at the sample and
/// that element's own weight.
#[derive(Clone, Debug)]
pub struct OverlapReducer<W> {
    /// `greedy(S)` in insertion order, with weights.
    greedy: Vec<(usize, W)>,
}

impl<W: Scalar> OverlapReducer<W> {
    /// `sample` lists the sampled elements with their weights.
    pub fn new(c: &Intersection, sample: &[(usize, W)]) -> Self {
        let mut sorted = sample.to_vec();
        sorted.sort_by(|a, b| precedes_cmp(a, b));
        let mut greedy: Vec<(usize, W)> = Vec::new();
        let mut ids = Vec::new();
        for (e, w) in sorted {
            if !w.is_positive() {
                continue;
            }
            ids.push(e);
            if c.feasible(&ids) {
                greedy.push((e, w));
            } else {
                ids.pop();
            }
        }
        OverlapReducer { greedy }
    }

    pub fn greedy(&self) -> Vec<usize> {
        self.greedy.iter().map(|(e, _)| *e).collect()
    }

    /// The part of `greedy(S)` that precedes `(e, w)` in tie-break order.
    pub fn prefix(&self, e: usize, w: &W) -> Vec<usize> {
        self.greedy
            .iter()
            .take_while(|(f, wf)| precedes(*f, wf, e, w))
            .map(|(f, _)| *f)
            .collect()
    }

    pub fn is_relevant(&self, c: &Intersection, e: usize, w: &W) -> bool {
        if !w.is_positive() {
            return false;
        }
        let mut probe = self.prefix(e, w);
        probe.push(e);
        c.feasible(&probe)
    }

    pub fn reduce(&self, c: &Intersection, e: usize, w: &W) -> W {
        if self.is_relevant(c, e, w) {
            w.clone()
        } else {
            W::zero()
        }
    }
}

/// Whether `(a, wa)` comes before `(b, wb)`: heavier first, then lower id.
pub fn precedes<W: PartialOrd>(a: usize, wa: &W, b: usize, wb: &W) -> bool {
    wa > wb || (wa == wb && a < b)
}

fn precedes_cmp<W: PartialOrd>(a: &(usize, W), b: &(usize, W)) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    if precedes(a.0, &a.1, b.0, &b.1) {
        Ordering::Less
    } else if a.0 == b.0 {
        Ordering::Equal
    } else {
        Ordering::Greater
    }
}

/// One run of the coupled process. All sets are in insertion order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoupledRun {
    pub g: Vec<usize>,
    pub w: Vec<usize>,
    /// `W′`, the elements that were in every `H_j` when added.
    pub w_ext: Vec<usize>,
    pub opt_hat: Vec<Vec<usize>>,
    pub h: Vec<Vec<usize>>,
}

impl CoupledRun {
    /// Checks `G ∈ 𝓕`, `W′ ⊆ W`, `H_j ∈ 𝓘_j` and `OPT̂_j ⊆ span(H_j)`.
    pub fn check_invariants(&self, c: &Intersection) -> Result<()> {
        if !c.feasible(&self.g) {
            return Err(Error::Invariant("G is not feasible".into()));
        }
        if let Some(e) = self.w_ext.iter().find(|e| !self.w.contains(e)) {
            return Err(Error::Invariant(format!("element {e} is in W′ but not in W")));
        }
        for (j, m) in c.matroids().iter().enumerate() {
            check_h(m.as_ref(), j, &self.h[j], &self.opt_hat[j])?;
        }
        Ok(())
    }

    /// `counts[ℓ - 1] = |set ∩ N_{≤ℓ}|` for `ℓ = 1..=n`.
    pub fn prefix_counts(set: &[usize], order: &TieBreakOrder) -> Vec<usize> {
        let mut hits = vec![0usize; order.len()];
        for &e in set {
            hits[order.position(e)] += 1;
        }
        let mut acc = 0;
        hits.iter()
            .map(|h| {
                acc += h;
                acc
            })
            .collect()
    }
}

fn check_h(m: &dyn Matroid, j: usize, h: &[usize], opt_hat: &[usize]) -> Result<()> {
    if !m.independent(h) {
        return Err(Error::Invariant(format!("H_{j} is dependent")));
    }
    if let Some(e) = opt_hat.iter().find(|&&e| !m.spans(h, e)) {
        return Err(Error::Invariant(format!("OPT̂_{j} element {e} is outside span(H_{j})")));
    }
    Ok(())
}

/// The coupled process with Bernoulli(`p`) coins.
pub fn simulate_greedy<W: Scalar, R: Rng + ?Sized>(
    c: &Intersection,
    weights: &[W],
    order: &TieBreakOrder,
    p: f64,
    rng: &mut R,
) -> Result<CoupledRun> {
    check_probability(p)?;
    simulate_greedy_with(c, weights, order, |_| rng.random_bool(p), false)
}

/// The coupled process with coins supplied by `coin(e)`, which is asked once
/// for each element that could extend `G` (`true` = "sample"). With
/// `check_each_step` every step re-verifies the `H_j` invariants.
///
/// When several elements of `H_j \ G` could be exchanged for the new element
/// the one with the smallest id is evicted.
pub fn simulate_greedy_with<W: Scalar>(
    c: &Intersection,
    weights: &[W],
    order: &TieBreakOrder,
    mut coin: impl FnMut(usize) -> bool,
    check_each_step: bool,
) -> Result<CoupledRun> {
    let k = c.k();
    let mut run = CoupledRun {
        g: Vec::new(),
        w: Vec::new(),
        w_ext: Vec::new(),
        opt_hat: vec![Vec::new(); k],
        h: vec![Vec::new(); k],
    };
    let mut in_g = vec![false; c.n()];
    for e in order.iter() {
        if !weights[e].is_positive() {
            continue;
        }
        run.g.push(e);
        if !c.feasible(&run.g) {
            run.g.pop();
            continue;
        }
        if coin(e) {
            in_g[e] = true;
            for (j, m) in c.matroids().iter().enumerate() {
                exchange_into(m.as_ref(), &mut run.h[j], &in_g, e)
                    .map_err(|msg| Error::Invariant(format!("H_{j}: {msg}")))?;
            }
        } else {
            run.g.pop();
            let mut in_all_opt = true;
            let mut in_all_h = true;
            for (j, m) in c.matroids().iter().enumerate() {
                in_all_opt &= extend_if_independent(m.as_ref(), &mut run.opt_hat[j], e);
                in_all_h &= extend_if_independent(m.as_ref(), &mut run.h[j], e);
            }
            if in_all_opt {
                run.w.push(e);
            }
            if in_all_h {
                run.w_ext.push(e);
            }
        }
        if check_each_step {
            for (j, m) in c.matroids().iter().enumerate() {
                check_h(m.as_ref(), j, &run.h[j], &run.opt_hat[j])?;
            }
        }
    }
    Ok(run)
}

fn extend_if_independent(m: &dyn Matroid, set: &mut Vec<usize>, e: usize) -> bool {
    set.push(e);
    if m.independent(set) {
        true
    } else {
        set.pop();
        false
    }
}

fn exchange_into(
    m: &dyn Matroid,
    h: &mut Vec<usize>,
    in_g: &[bool],
    e: usize,
) -> std::result::Result<(), String> {
    if extend_if_independent(m, h, e) {
        return Ok(());
    }
    let mut candidates: Vec<usize> = (0..h.len()).filter(|&i| !in_g[h[i]]).collect();
    candidates.sort_by_key(|&i| h[i]);
    for i in candidates {
        let f = h[i];
        h[i] = e;
        if m.independent(h) {
            return Ok(());
        }
        h[i] = f;
    }
    Err(format!("no element of H \\ G can be exchanged for {e}"))
}

/// Monte Carlo estimate of `E[w′(∩_j OPT′_j)]` over `S ~ μ_p`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapStats {
    pub mean: f64,
    pub std_err: f64,
    pub trials: usize,
    /// `w(OPT)` from brute force.
    pub opt_weight: f64,
    /// `mean / w(OPT)`, or 1 when `OPT` is empty.
    pub ratio: f64,
}

impl OverlapStats {
    pub fn estimate(&self) -> Estimate {
        Estimate { mean: self.mean, std_err: self.std_err, samples: self.trials }
    }
}

/// The common part `∩_j OPT′_j` of the single-matroid optima under the
/// reduced weights, in tie-break order.
pub fn common_optimum<W: Scalar>(
    c: &Intersection,
    reduced: &[W],
    order: &TieBreakOrder,
) -> Vec<usize> {
    // reduced weights are the original ones or zero, so the original order
    // is also a valid tie-break order for them
    let mut count = vec![0usize; c.n()];
    for m in c.matroids() {
        for e in greedy_single(m.as_ref(), reduced, order) {
            count[e] += 1;
        }
    }
    order.iter().filter(|&e| count[e] == c.k()).collect()
}

pub fn estimate_overlap<W: Scalar, R: Rng + ?Sized>(
    c: &Intersection,
    weights: &[W],
    p: f64,
    trials: usize,
    rng: &mut R,
) -> Result<OverlapStats> {
    if trials == 0 {
        return Err(invalid("estimate_overlap needs at least one trial"));
    }
    check_probability(p)?;
    let order = TieBreakOrder::new(weights);
    let opt = brute_force_opt(c, weights, &order)?;
    let opt_weight = total(weights, &opt).as_f64();
    let master = rng.next_u64();
    let values: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut trial = trial_rng(master, t);
            let sample = bernoulli_mask(c.n(), p, &mut trial);
            let reduced = overlapping_opt(c, weights, &order, &sample);
            total(&reduced.weights, &common_optimum(c, &reduced.weights, &order)).as_f64()
        })
        .collect();
    let est = Estimate::from_samples(&values);
    let ratio = if opt_weight > 0.0 { est.mean / opt_weight } else { 1.0 };
    Ok(OverlapStats { mean: est.mean, std_err: est.std_err, trials, opt_weight, ratio })
}

/// `(greedy(S), ∩_j OPT′_j)` computed directly from a sample mask.
pub fn direct_outcome<W: Scalar>(
    c: &Intersection,
    weights: &[W],
    order: &TieBreakOrder,
    sample: &[bool],
) -> (Vec<usize>, Vec<usize>) {
    let g = greedy_on(c, weights, order, |e| sample[e]).selected;
    let reduced = overlapping_opt(c, weights, order, sample);
    (g, common_optimum(c, &reduced.weights, order))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::matroid::{mask, GraphicMatroid, PartitionMatroid, UniformMatroid};

    fn single(m: impl Matroid + 'static) -> Intersection {
        Intersection::single(Arc::new(m))
    }

    fn bipartite() -> (Intersection, Vec<i64>) {
        // left blocks {0,1},{2,3}; right blocks {0,2},{1,3}
        let left = PartitionMatroid::simple(vec![0, 0, 1, 1]);
        let right = PartitionMatroid::simple(vec![0, 1, 0, 1]);
        let c = Intersection::new(vec![Arc::new(left), Arc::new(right)]).unwrap();
        (c, vec![7, 4, 5, 6])
    }

    #[test]
    fn reduction_example() {
        let c = single(UniformMatroid::new(3, 1));
        let w = [5, 3, 2];
        let order = TieBreakOrder::new(&w);
        let r = overlapping_opt(&c, &w, &order, &mask(3, &[1]));
        assert_eq!(r.weights, vec![5, 0, 0]);
        assert_eq!(
            r.provenance,
            vec![Provenance::GreedyRelevant, Provenance::Sampled, Provenance::Zeroed]
        );
        let all = overlapping_opt(&c, &w, &order, &[true; 3]);
        assert_eq!(all.weights, vec![0, 0, 0]);
        let none = overlapping_opt(&c, &w, &order, &[false; 3]);
        assert_eq!(none.weights, w.to_vec());
    }

    #[test]
    fn online_reducer_matches_batch() {
        let (c, w) = bipartite();
        let order = TieBreakOrder::new(&w);
        for bits in 0..16u32 {
            let sample: Vec<bool> = (0..4).map(|i| bits >> i & 1 == 1).collect();
            let batch = overlapping_opt(&c, &w, &order, &sample);
            let seen: Vec<(usize, i64)> =
                (0..4).filter(|&e| sample[e]).map(|e| (e, w[e])).collect();
            let reducer = OverlapReducer::new(&c, &seen);
            for e in (0..4).filter(|&e| !sample[e]) {
                assert_eq!(reducer.reduce(&c, e, &w[e]), batch.weights[e], "S={bits:b} e={e}");
            }
        }
    }

    #[test]
    fn extreme_coins() {
        let (c, w) = bipartite();
        let order = TieBreakOrder::new(&w);
        let all = simulate_greedy_with(&c, &w, &order, |_| true, true).unwrap();
        assert_eq!(all.g, greedy_on(&c, &w, &order, |_| true).selected);
        assert!(all.w.is_empty() && all.w_ext.is_empty());

        let tri = single(GraphicMatroid::complete(3));
        let tw = [3, 2, 1];
        let to = TieBreakOrder::new(&tw);
        let none = simulate_greedy_with(&tri, &tw, &to, |_| false, true).unwrap();
        assert!(none.g.is_empty());
        assert_eq!(none.w, greedy_single(tri.matroid(0).as_ref(), &tw, &to));
    }

    #[test]
    fn coins_from_a_sample_reproduce_direct_computation() {
        let (c, w) = bipartite();
        let order = TieBreakOrder::new(&w);
        for bits in 0..16u32 {
            let sample: Vec<bool> = (0..4).map(|i| bits >> i & 1 == 1).collect();
            let run = simulate_greedy_with(&c, &w, &order, |e| sample[e], true).unwrap();
            run.check_invariants(&c).unwrap();
            assert_eq!((run.g.clone(), run.w.clone()), direct_outcome(&c, &w, &order, &sample));
        }
    }

    #[test]
    fn random_runs_keep_invariants() {
        let (c, w) = bipartite();
        let order = TieBreakOrder::new(&w);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let run = simulate_greedy(&c, &w, &order, 0.75, &mut rng).unwrap();
            run.check_invariants(&c).unwrap();
        }
    }

    #[test]
    fn prefix_counts_accumulate() {
        let order = TieBreakOrder::new(&[1, 4, 3, 2]);
        // order is 1, 2, 3, 0
        assert_eq!(CoupledRun::prefix_counts(&[2, 0], &order), vec![0, 1, 1, 2]);
    }

    #[test]
    fn estimate_rejects_zero_trials() {
        let c = single(UniformMatroid::new(1, 1));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(estimate_overlap(&c, &[1], 0.5, 0, &mut rng).is_err());
        assert!(estimate_overlap(&c, &[1], 1.5, 10, &mut rng).is_err());
    }

    #[test]
    fn single_element_ratio_is_one_minus_p() {
        let c = single(UniformMatroid::new(1, 1));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let stats = estimate_overlap(&c, &[3], 0.25, 20_000, &mut rng).unwrap();
        assert!((stats.ratio - 0.75).abs() < 4.0 * stats.std_err / 3.0 + 1e-9);
    }
}
