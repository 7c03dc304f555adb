//! Composition of single-matroid secretary algorithms into algorithms for
//! the intersection of several matroids.
//!
//! [`combine_opt_competitive`] runs one OPT-competitive algorithm per matroid
//! on the reduced weights and keeps what all of them accept.
//! [`combine_reduce_and_solve`] does the same for reduce-and-solve
//! procedures, where each element is shown to procedure `i` as one of its
//! refinements `d_i(e)`.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::matroid::TieBreakOrder;
use crate::msp::{ReduceAndSolve, RsParams};
use crate::offline::{brute_force_opt, greedy_single, Intersection};
use crate::overlap::{precedes, OverlapStats, Provenance, ReducedWeights};
use crate::rng::{bernoulli_mask, check_probability, trial_rng};
use crate::scalar::{total, Scalar};
use crate::stats::Estimate;

mod combine;
mod merge;

pub use combine::{combine_opt_competitive, combine_reduce_and_solve, CombinedRun};
pub use merge::{independent_samples, merge_samples, MergedSamplePlan};

/// `(2k − 1) / 2k`.
pub fn outer_probability(k: usize) -> f64 {
    (2 * k - 1) as f64 / (2 * k) as f64
}

/// `∏ c_j / 4k²`.
pub fn opt_competitive_bound(cs: &[f64]) -> f64 {
    let k = cs.len() as f64;
    cs.iter().product::<f64>() / (4.0 * k * k)
}

/// `∏ c^r_i c^o_i / (8k(k+1) · max{Σ c^a_i, 1})`.
pub fn reduce_and_solve_bound(params: &[RsParams]) -> f64 {
    let k = params.len() as f64;
    let product: f64 = params.iter().map(|p| p.c_r * p.c_o).product();
    let additive: f64 = params.iter().map(|p| p.c_a).sum();
    product / (8.0 * k * (k + 1.0) * additive.max(1.0))
}

/// `d_i` for every procedure: `d[i][e]` is a refinement of `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinementAssignment {
    pub d: Vec<Vec<usize>>,
}

impl RefinementAssignment {
    /// Checks that each `d_i(e)` is a refinement of `e`.
    pub fn is_valid<W: Scalar>(&self, procs: &[ReduceAndSolve<W>]) -> bool {
        self.d.len() == procs.len()
            && self.d.iter().zip(procs).all(|(d, rs)| {
                d.len() == rs.ground_size() && d.iter().enumerate().all(|(e, &r)| rs.source(r) == e)
            })
    }
}

/// Output of generalized greedy: the source elements taken, in insertion
/// order, and for each procedure the refinements added to `I_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralizedGreedy {
    pub selected: Vec<usize>,
    pub sets: Vec<Vec<usize>>,
}

/// The first refinement of `e` that keeps `set` independent in the refined
/// matroid of `rs`.
fn first_fit<W: Scalar>(rs: &ReduceAndSolve<W>, set: &mut Vec<usize>, e: usize) -> Option<usize> {
    for &r in rs.refinements(e) {
        set.push(r);
        let ok = rs.refined().independent(set);
        set.pop();
        if ok {
            return Some(r);
        }
    }
    None
}

/// Roles of `e` against the given per-procedure sets, if every procedure
/// has a refinement of `e` that fits.
fn roles<W: Scalar>(procs: &[ReduceAndSolve<W>], sets: &mut [Vec<usize>], e: usize) -> Option<Vec<usize>> {
    procs.iter().zip(sets.iter_mut()).map(|(rs, set)| first_fit(rs, set, e)).collect()
}

pub fn check_ground<W: Scalar>(procs: &[ReduceAndSolve<W>], n: usize) -> Result<()> {
    if procs.is_empty() {
        return Err(invalid("at least one procedure is required"));
    }
    if let Some(rs) = procs.iter().find(|rs| rs.ground_size() != n) {
        return Err(invalid(format!(
            "procedure {} has {} elements, expected {n}",
            rs.name(),
            rs.ground_size()
        )));
    }
    Ok(())
}

/// Greedy over `allowed` elements in tie-break order: an element goes in if
/// every procedure has a refinement that fits, and then the first fitting
/// refinement is added to each `I_i`.
pub fn generalized_greedy<W: Scalar>(
    procs: &[ReduceAndSolve<W>],
    weights: &[W],
    order: &TieBreakOrder,
    allowed: impl Fn(usize) -> bool,
) -> GeneralizedGreedy {
    let mut sets = vec![Vec::new(); procs.len()];
    let mut selected = Vec::new();
    for e in order.iter() {
        if !allowed(e) || !weights[e].is_positive() {
            continue;
        }
        if let Some(picks) = roles(procs, &mut sets, e) {
            selected.push(e);
            for (set, r) in sets.iter_mut().zip(picks) {
                set.push(r);
            }
        }
    }
    GeneralizedGreedy { selected, sets }
}

/// Online form of [`generalized_overlapping_opt`], built from the sample.
#[derive(Clone, Debug)]
pub struct GeneralizedReducer<W> {
    greedy: Vec<(usize, W)>,
    sets: Vec<Vec<usize>>,
}

impl<W: Scalar> GeneralizedReducer<W> {
    pub fn new(procs: &[ReduceAndSolve<W>], sample: &[(usize, W)]) -> Self {
        let mut sorted = sample.to_vec();
        sorted.sort_by(|a, b| {
            if precedes(a.0, &a.1, b.0, &b.1) {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        });
        let mut sets = vec![Vec::new(); procs.len()];
        let mut greedy = Vec::new();
        for (e, w) in sorted {
            if !w.is_positive() {
                continue;
            }
            if let Some(picks) = roles(procs, &mut sets, e) {
                for (set, r) in sets.iter_mut().zip(picks) {
                    set.push(r);
                }
                greedy.push((e, w));
            }
        }
        GeneralizedReducer { greedy, sets }
    }

    pub fn greedy(&self) -> Vec<usize> {
        self.greedy.iter().map(|(e, _)| *e).collect()
    }

    /// `role_i(S, e)` for all `i` if `e` is greedy-relevant, else `None`.
    pub fn roles(&self, procs: &[ReduceAndSolve<W>], e: usize, w: &W) -> Option<Vec<usize>> {
        if !w.is_positive() {
            return None;
        }
        let before = self.greedy.iter().take_while(|(f, wf)| precedes(*f, wf, e, w)).count();
        let mut prefixes: Vec<Vec<usize>> = self.sets.iter().map(|s| s[..before].to_vec()).collect();
        roles(procs, &mut prefixes, e)
    }

    /// `(w′(e), d_·(e))` for an unsampled element.
    pub fn reduce(&self, procs: &[ReduceAndSolve<W>], e: usize, w: &W) -> (W, Vec<usize>) {
        match self.roles(procs, e, w) {
            Some(d) => (w.clone(), d),
            None => (W::zero(), procs.iter().map(|rs| rs.refinements(e)[0]).collect()),
        }
    }
}

/// Reduced weights and refinement choices for the sample `S` (a mask).
pub fn generalized_overlapping_opt<W: Scalar>(
    procs: &[ReduceAndSolve<W>],
    weights: &[W],
    sample: &[bool],
) -> (ReducedWeights<W>, RefinementAssignment) {
    let shown: Vec<(usize, W)> =
        (0..weights.len()).filter(|&e| sample[e]).map(|e| (e, weights[e].clone())).collect();
    let reducer = GeneralizedReducer::new(procs, &shown);
    let mut d: Vec<Vec<usize>> = procs.iter().map(|rs| rs.first_refinements()).collect();
    let mut reduced = Vec::with_capacity(weights.len());
    let mut provenance = Vec::with_capacity(weights.len());
    for (e, w) in weights.iter().enumerate() {
        if sample[e] {
            reduced.push(W::zero());
            provenance.push(Provenance::Sampled);
            continue;
        }
        match reducer.roles(procs, e, w) {
            Some(picks) => {
                for (di, r) in d.iter_mut().zip(picks) {
                    di[e] = r;
                }
                reduced.push(w.clone());
                provenance.push(Provenance::GreedyRelevant);
            }
            None => {
                reduced.push(W::zero());
                provenance.push(Provenance::Zeroed);
            }
        }
    }
    (ReducedWeights { weights: reduced, provenance }, RefinementAssignment { d })
}

/// `OPT′_i`: the optimum of the refined matroid restricted to `d_i(N)`,
/// each refinement weighted by its source's reduced weight. Refined ids.
pub fn refined_optimum<W: Scalar>(rs: &ReduceAndSolve<W>, reduced: &[W], d: &[usize]) -> Vec<usize> {
    let mut w = vec![W::zero(); rs.refined_size()];
    for (e, &r) in d.iter().enumerate() {
        w[r] = reduced[e].clone();
    }
    // refined ids follow source ids, so ties break the same way as on N
    greedy_single(rs.refined().as_ref(), &w, &TieBreakOrder::new(&w))
}

/// `∩_i g(OPT′_i)`, ascending ids.
pub fn generalized_common_optimum<W: Scalar>(
    procs: &[ReduceAndSolve<W>],
    reduced: &[W],
    assignment: &RefinementAssignment,
) -> Vec<usize> {
    let n = reduced.len();
    let mut count = vec![0usize; n];
    for (rs, d) in procs.iter().zip(&assignment.d) {
        for r in refined_optimum(rs, reduced, d) {
            count[rs.source(r)] += 1;
        }
    }
    (0..n).filter(|&e| count[e] == procs.len()).collect()
}

/// Monte Carlo estimate of `E[w′(∩_i g(OPT′_i))]` over `S ~ μ_p`, with the
/// ratio taken against `w(R)`, where `R = ∩_i g(R_i(OPT))` is built from
/// the witness of each procedure.
pub fn estimate_generalized_overlap<W: Scalar, R: Rng + ?Sized>(
    procs: &[ReduceAndSolve<W>],
    weights: &[W],
    p: f64,
    trials: usize,
    rng: &mut R,
) -> Result<OverlapStats> {
    if trials == 0 {
        return Err(invalid("estimate_generalized_overlap needs at least one trial"));
    }
    check_probability(p)?;
    let n = weights.len();
    check_ground(procs, n)?;
    let c = Intersection::new(procs.iter().map(|rs| rs.original().clone()).collect())?;
    let order = TieBreakOrder::new(weights);
    let opt = brute_force_opt(&c, weights, &order)?;
    let mut r_count = vec![0usize; n];
    for rs in procs {
        let d = rs.witness_assignment(&opt)?;
        let picks: Vec<usize> = opt.iter().map(|&e| d[e]).collect();
        if rs.refined().independent(&picks) {
            for &e in &opt {
                r_count[e] += 1;
            }
        }
    }
    let r_set: Vec<usize> = (0..n).filter(|&e| r_count[e] == procs.len()).collect();
    let r_weight = total(weights, &r_set).as_f64();
    let master = rng.next_u64();
    let values: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut trial = trial_rng(master, t);
            let sample = bernoulli_mask(n, p, &mut trial);
            let (reduced, assignment) = generalized_overlapping_opt(procs, weights, &sample);
            let common = generalized_common_optimum(procs, &reduced.weights, &assignment);
            total(&reduced.weights, &common).as_f64()
        })
        .collect();
    let est = Estimate::from_samples(&values);
    let ratio = if r_weight > 0.0 { est.mean / r_weight } else { 1.0 };
    Ok(OverlapStats { mean: est.mean, std_err: est.std_err, trials, opt_weight: r_weight, ratio })
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::matroid::{mask, ConcreteMatroid, GraphicMatroid, PartitionMatroid, TransversalMatroid};
    use crate::msp::{graphic_reduce_and_solve, partition_reduce_and_solve, transversal_reduce_and_solve};
    use crate::overlap::overlapping_opt;

    fn bipartite() -> (Vec<ReduceAndSolve<i64>>, Intersection) {
        let left = ConcreteMatroid::Partition(PartitionMatroid::simple(vec![0, 0, 1, 1, 2]));
        let right = ConcreteMatroid::Partition(PartitionMatroid::simple(vec![0, 1, 0, 2, 1]));
        let procs = vec![
            partition_reduce_and_solve(&left, 0.5).unwrap(),
            partition_reduce_and_solve(&right, 0.5).unwrap(),
        ];
        let c = Intersection::new(vec![left.into_oracle(), right.into_oracle()]).unwrap();
        (procs, c)
    }

    #[test]
    fn bounds() {
        assert!((opt_competitive_bound(&[0.25, 0.25]) - 1.0 / 256.0).abs() < 1e-15);
        assert!((opt_competitive_bound(&[0.25]) - 1.0 / 16.0).abs() < 1e-15);
        let graphic = RsParams { c_r: 1.0, c_o: 4.0 / 27.0, c_a: 0.0 };
        assert!((reduce_and_solve_bound(&[graphic]) - 1.0 / 108.0).abs() < 1e-15);
        let quarter = RsParams { c_r: 1.0, c_o: 0.25, c_a: 0.0 };
        assert!((reduce_and_solve_bound(&[quarter, quarter]) - 1.0 / 768.0).abs() < 1e-15);
        assert_eq!(outer_probability(2), 0.75);
    }

    #[test]
    fn trivial_refinements_reproduce_plain_greedy_and_reduction() {
        let (procs, c) = bipartite();
        let w = [5i64, 4, 3, 2, 1];
        let order = TieBreakOrder::new(&w);
        for bits in 0u32..32 {
            let sample: Vec<bool> = (0..5).map(|e| bits >> e & 1 == 1).collect();
            let gg = generalized_greedy(&procs, &w, &order, |e| sample[e]);
            let plain = crate::offline::greedy_on(&c, &w, &order, |e| sample[e]).selected;
            assert_eq!(gg.selected, plain);
            assert!(gg.sets.iter().all(|s| *s == plain));
            let (reduced, assignment) = generalized_overlapping_opt(&procs, &w, &sample);
            assert_eq!(reduced, overlapping_opt(&c, &w, &order, &sample));
            assert!(assignment.is_valid(&procs));
            let common = generalized_common_optimum(&procs, &reduced.weights, &assignment);
            let mut plain_common = crate::overlap::common_optimum(&c, &reduced.weights, &order);
            plain_common.sort_unstable();
            assert_eq!(common, plain_common);
        }
    }

    #[test]
    fn path_of_two_edges() {
        let g = ConcreteMatroid::Graphic(GraphicMatroid::new(3, vec![(0, 1), (1, 2)]).unwrap());
        let rs = graphic_reduce_and_solve::<i64>(&g, 2.0 / 3.0).unwrap();
        let w = [2i64, 1];
        let gg = generalized_greedy(std::slice::from_ref(&rs), &w, &TieBreakOrder::new(&w), |_| true);
        assert_eq!(gg.selected, vec![0, 1]);
        // edge 0 takes vertex 0, edge 1 takes vertex 1
        assert_eq!(gg.sets[0], vec![rs.refinements(0)[0], rs.refinements(1)[0]]);
        assert!(rs.refined().independent(&gg.sets[0]));
        let none = generalized_greedy(std::slice::from_ref(&rs), &w, &TieBreakOrder::new(&w), |_| false);
        assert!(none.selected.is_empty() && none.sets[0].is_empty());
    }

    #[test]
    fn full_sample_zeroes_everything() {
        let t = ConcreteMatroid::Transversal(TransversalMatroid::new(2, vec![vec![0, 1], vec![1]]).unwrap());
        let procs = vec![transversal_reduce_and_solve::<i64>(&t, 0.5).unwrap()];
        let (reduced, assignment) = generalized_overlapping_opt(&procs, &[3, 2], &mask(2, &[0, 1]));
        assert_eq!(reduced.weights, vec![0, 0]);
        assert_eq!(assignment.d[0], procs[0].first_refinements());
    }

    #[test]
    fn online_reducer_matches_offline() {
        let g = ConcreteMatroid::Graphic(GraphicMatroid::complete(4));
        let procs = vec![graphic_reduce_and_solve::<i64>(&g, 2.0 / 3.0).unwrap()];
        let w = [6i64, 5, 4, 3, 2, 1];
        for bits in 0u32..64 {
            let sample: Vec<bool> = (0..6).map(|e| bits >> e & 1 == 1).collect();
            let shown: Vec<(usize, i64)> = (0..6).filter(|&e| sample[e]).map(|e| (e, w[e])).collect();
            let reducer = GeneralizedReducer::new(&procs, &shown);
            let (reduced, assignment) = generalized_overlapping_opt(&procs, &w, &sample);
            for e in (0..6).filter(|&e| !sample[e]) {
                let (we, d) = reducer.reduce(&procs, e, &w[e]);
                assert_eq!(we, reduced.weights[e]);
                assert_eq!(d[0], assignment.d[0][e]);
            }
        }
    }

    #[test]
    fn graphic_triangle_overlap() {
        let g = ConcreteMatroid::Graphic(GraphicMatroid::complete(3));
        let procs = vec![graphic_reduce_and_solve::<i64>(&g, 2.0 / 3.0).unwrap()];
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let stats = estimate_generalized_overlap(&procs, &[3i64, 2, 1], 0.5, 4000, &mut rng).unwrap();
        assert_eq!(stats.opt_weight, 5.0);
        assert!(stats.estimate().clears(stats.opt_weight / 8.0), "{stats:?}");
    }
}
