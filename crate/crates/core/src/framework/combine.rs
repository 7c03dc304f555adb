//! The combined selection run shared by both frameworks.

use rand::{Rng, RngCore};

use super::merge::{merge_samples, MergedSamplePlan};
use super::{check_ground, outer_probability, GeneralizedReducer};
use crate::arrival::ArrivalOrder;
use crate::error::{invalid, Error, Result};
use crate::matroid::{mask, TieBreakOrder};
use crate::msp::{Assigned, OrderOblivious, Placement, ReduceAndSolve};
use crate::offline::Intersection;
use crate::overlap::OverlapReducer;
use crate::scalar::Scalar;

/// One run of a combined algorithm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinedRun {
    pub plan: MergedSamplePlan,
    /// Elements outside every sample, in arrival order.
    pub arrivals: Vec<usize>,
    /// The output `I`, in acceptance order.
    pub selected: Vec<usize>,
    /// Per inner algorithm, everything it accepted (source ids).
    pub accepted: Vec<Vec<usize>>,
    /// Per inner algorithm, `g(T₁)` (source ids).
    pub primary: Vec<Vec<usize>>,
    /// Inner sample requests that exceeded `n` and were clamped.
    pub clamped: usize,
}

enum Reduction<'a, W> {
    Plain { c: &'a Intersection, reducer: OverlapReducer<W> },
    Refined { procs: &'a [ReduceAndSolve<W>], reducer: GeneralizedReducer<W> },
}

impl<W: Scalar> Reduction<'_, W> {
    /// `w′(e)`, pointing every inner algorithm at `d_i(e)` on the way.
    fn apply(&self, inners: &mut [Assigned<W>], e: usize, w: &W, sampled: bool) -> W {
        match self {
            Reduction::Plain { c, reducer } => {
                if sampled {
                    W::zero()
                } else {
                    reducer.reduce(c, e, w)
                }
            }
            Reduction::Refined { procs, reducer } => {
                let (reduced, d) = if sampled {
                    (W::zero(), procs.iter().map(|rs| rs.refinements(e)[0]).collect())
                } else {
                    reducer.reduce(procs, e, w)
                };
                for (inner, r) in inners.iter_mut().zip(d) {
                    inner.set_refinement(e, r);
                }
                reduced
            }
        }
    }
}

/// Runs one OPT-competitive algorithm per matroid of `c` and keeps the
/// elements all of them accept.
///
/// `inners[j]` runs on matroid `j`. `opt` marks the optimum used by the
/// adversarial arrival orders.
pub fn combine_opt_competitive<W: Scalar, R: Rng>(
    c: &Intersection,
    inners: Vec<Box<dyn OrderOblivious<W>>>,
    weights: &[W],
    arrival: &ArrivalOrder,
    opt: &[bool],
    rng: &mut R,
) -> Result<CombinedRun> {
    if inners.len() != c.k() {
        return Err(invalid(format!("{} algorithms for {} matroids", inners.len(), c.k())));
    }
    if weights.len() != c.n() {
        return Err(invalid(format!("{} weights for {} elements", weights.len(), c.n())));
    }
    let n = c.n();
    let inners = inners.into_iter().map(|a| Assigned::identity(a, n)).collect();
    drive(c, inners, weights, arrival, opt, rng, |sample| Reduction::Plain {
        c,
        reducer: OverlapReducer::new(c, sample),
    })
}

/// Runs one reduce-and-solve procedure per matroid; each element is shown
/// to procedure `i` as `d_i(e)`.
pub fn combine_reduce_and_solve<W: Scalar, R: Rng>(
    procs: &[ReduceAndSolve<W>],
    weights: &[W],
    arrival: &ArrivalOrder,
    opt: &[bool],
    rng: &mut R,
) -> Result<CombinedRun> {
    check_ground(procs, weights.len())?;
    let c = Intersection::new(procs.iter().map(|rs| rs.original().clone()).collect())?;
    let inners = procs.iter().map(|rs| rs.instantiate(rs.first_refinements())).collect();
    drive(&c, inners, weights, arrival, opt, rng, |sample| Reduction::Refined {
        procs,
        reducer: GeneralizedReducer::new(procs, sample),
    })
}

fn drive<'a, W: Scalar, R: Rng>(
    c: &Intersection,
    mut inners: Vec<Assigned<W>>,
    weights: &[W],
    arrival: &ArrivalOrder,
    opt: &[bool],
    rng: &mut R,
    reduction: impl FnOnce(&[(usize, W)]) -> Reduction<'a, W>,
) -> Result<CombinedRun> {
    arrival.validate(weights.len())?;
    let n = weights.len();
    let k = inners.len();
    let order = TieBreakOrder::new(weights);

    let mut clamped = 0;
    let sizes: Vec<usize> = inners
        .iter_mut()
        .map(|a| {
            let m = a.sample_size(n, rng as &mut dyn RngCore);
            if m > n {
                clamped += 1;
            }
            m.min(n)
        })
        .collect();
    let plan = merge_samples(n, outer_probability(k), &sizes, rng)?;

    let in_s = mask(n, &plan.s);
    let shown: Vec<(usize, W)> = plan.s.iter().map(|&e| (e, weights[e].clone())).collect();
    let reduction = reduction(&shown);

    for i in 0..k {
        let sample: Vec<(usize, W)> = plan.s_j[i]
            .iter()
            .map(|&e| (e, reduction.apply(&mut inners, e, &weights[e], in_s[e])))
            .collect();
        inners[i].observe_sample(&sample);
    }

    let in_pool = mask(n, &plan.pooled);
    let remaining: Vec<usize> = (0..n).filter(|&e| !in_pool[e]).collect();
    let arrivals = arrival.realize(&remaining, &order, opt, rng);
    let mut selected = Vec::new();
    for &e in &arrivals {
        let w = reduction.apply(&mut inners, e, &weights[e], false);
        let votes: Vec<bool> = inners.iter_mut().map(|a| a.offer(e, &w)).collect();
        let placement = if votes.iter().all(|&v| v) {
            selected.push(e);
            Placement::Primary
        } else {
            Placement::Secondary
        };
        for (a, _) in inners.iter_mut().zip(&votes).filter(|(_, &v)| v) {
            a.place(e, placement);
        }
    }

    // what an inner algorithm neither sampled nor saw arrive comes last
    for i in 0..k {
        let own = mask(n, &plan.s_j[i]);
        for &e in plan.pooled.iter().filter(|&&e| !own[e]) {
            let w = reduction.apply(&mut inners, e, &weights[e], in_s[e]);
            if inners[i].offer(e, &w) {
                inners[i].place(e, Placement::Secondary);
            }
        }
    }

    let mut sorted = selected.clone();
    sorted.sort_unstable();
    let primary: Vec<Vec<usize>> = inners
        .iter()
        .map(|a| {
            let mut t = a.primary();
            t.sort_unstable();
            t
        })
        .collect();
    if let Some(i) = primary.iter().position(|t| *t != sorted) {
        return Err(Error::Invariant(format!("T1 of inner algorithm {i} does not map onto I")));
    }
    if !c.feasible(&selected) {
        return Err(Error::Invariant(format!("combined output {selected:?} is infeasible")));
    }
    Ok(CombinedRun {
        plan,
        arrivals,
        selected,
        accepted: inners.iter().map(|a| a.accepted()).collect(),
        primary,
        clamped,
    })
}
