//! Submodular objectives and the reduction from submodular to linear weights.
//!
//! [`submodular_online`] learns on a half sample `L`, runs submodular greedy
//! on it, and hands every later element to a linear secretary algorithm with
//! weight `f(u | G_u)` (or 0), where `G_u` is the greedy solution just before
//! `u` would be inserted.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arrival::ArrivalOrder;
use crate::error::{invalid, Error, Result};
use crate::framework::merge_samples;
use crate::matroid::{mask, Matroid, MatroidDesc, TieBreakOrder};
use crate::msp::{OrderOblivious, Placement};
use crate::offline::{greedy_single, Intersection, BRUTE_FORCE_LIMIT};
use crate::rng::check_probability;
use crate::scalar::{ExactValue, Scalar, Weight};

/// Largest `|S|` for which [`convolution_value`] enumerates subsets.
pub const CONVOLUTION_LIMIT: usize = 15;

/// A nonnegative submodular set function over `0..n`.
#[derive(Clone, Debug)]
pub enum SubmodularFunction<W> {
    /// `f(A)` is the total weight of the items covered by `A`; element `e`
    /// covers `sets[e]`.
    Coverage { items: Vec<W>, sets: Vec<Vec<usize>> },
    /// Weight of a heaviest independent subset of `A`.
    MatroidRank { matroid: Arc<dyn Matroid>, weights: Vec<W> },
    /// Total weight of the edges with exactly one endpoint in `A`. The
    /// elements are the vertices. Not monotone.
    Cut { vertices: usize, edges: Vec<(usize, usize, W)> },
    /// `f(A) = Σ_{e∈A} w(e)`.
    Modular { weights: Vec<W> },
}

impl<W: Scalar> SubmodularFunction<W> {
    pub fn ground_size(&self) -> usize {
        match self {
            SubmodularFunction::Coverage { sets, .. } => sets.len(),
            SubmodularFunction::MatroidRank { matroid, .. } => matroid.ground_size(),
            SubmodularFunction::Cut { vertices, .. } => *vertices,
            SubmodularFunction::Modular { weights } => weights.len(),
        }
    }

    pub fn value(&self, set: &[usize]) -> W {
        match self {
            SubmodularFunction::Coverage { items, sets } => {
                let mut covered = vec![false; items.len()];
                for &e in set {
                    for &i in &sets[e] {
                        covered[i] = true;
                    }
                }
                (0..items.len()).filter(|&i| covered[i]).fold(W::zero(), |acc, i| acc + items[i].clone())
            }
            SubmodularFunction::MatroidRank { matroid, weights } => {
                let inside = mask(weights.len(), set);
                let restricted: Vec<W> = (0..weights.len())
                    .map(|e| if inside[e] { weights[e].clone() } else { W::zero() })
                    .collect();
                let basis = greedy_single(matroid.as_ref(), &restricted, &TieBreakOrder::new(&restricted));
                basis.iter().fold(W::zero(), |acc, &e| acc + weights[e].clone())
            }
            SubmodularFunction::Cut { vertices, edges } => {
                let inside = mask(*vertices, set);
                edges
                    .iter()
                    .filter(|(u, v, _)| inside[*u] != inside[*v])
                    .fold(W::zero(), |acc, (_, _, w)| acc + w.clone())
            }
            SubmodularFunction::Modular { weights } => {
                set.iter().fold(W::zero(), |acc, &e| acc + weights[e].clone())
            }
        }
    }

    /// `f(e | A) = f(A + e) − f(A)`.
    pub fn marginal(&self, e: usize, set: &[usize]) -> W {
        let mut with = set.to_vec();
        with.push(e);
        self.value(&with) - self.value(set)
    }

    /// Exhaustive check of nonnegativity and `f(A) + f(B) ≥ f(A∪B) + f(A∩B)`.
    /// Returns the first violating pair of masks.
    pub fn submodularity_violation(&self) -> Result<Option<(u32, u32)>> {
        let n = self.ground_size();
        if n > 12 {
            return Err(Error::ResourceLimit(format!("exhaustive check over {n} elements")));
        }
        let values: Vec<W> = (0u32..1 << n).map(|m| self.value(&bits(m))).collect();
        if let Some(m) = values.iter().position(|v| v.is_negative()) {
            return Ok(Some((m as u32, m as u32)));
        }
        for a in 0u32..1 << n {
            for b in 0u32..1 << n {
                let lhs = values[a as usize].clone() + values[b as usize].clone();
                let rhs = values[(a | b) as usize].clone() + values[(a & b) as usize].clone();
                if lhs < rhs {
                    return Ok(Some((a, b)));
                }
            }
        }
        Ok(None)
    }
}

fn bits(m: u32) -> Vec<usize> {
    (0..32).filter(|i| m >> i & 1 == 1).collect()
}

/// JSON form of a submodular objective.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SubmodularDesc {
    Coverage {
        sets: Vec<Vec<usize>>,
        /// Item weights; all 1 when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        items: Option<Vec<ExactValue>>,
    },
    MatroidRank {
        matroid: MatroidDesc,
        weights: Vec<ExactValue>,
    },
    Cut {
        vertices: usize,
        edges: Vec<(usize, usize, ExactValue)>,
    },
    Modular {
        weights: Vec<ExactValue>,
    },
}

impl SubmodularDesc {
    pub fn build<W: Weight>(&self) -> Result<SubmodularFunction<W>> {
        let convert = |values: &[ExactValue]| -> Result<Vec<W>> {
            let out: Vec<W> = values.iter().map(|v| W::from_exact(&v.0)).collect::<Result<_>>()?;
            if out.iter().any(|v| v.is_negative()) {
                return Err(invalid("objective weights must be nonnegative"));
            }
            Ok(out)
        };
        Ok(match self {
            SubmodularDesc::Coverage { sets, items } => {
                let count = sets.iter().flatten().map(|&i| i + 1).max().unwrap_or(0);
                let items = match items {
                    Some(items) => {
                        if items.len() < count {
                            return Err(invalid(format!(
                                "coverage sets mention item {} but only {} item weights are given",
                                count - 1,
                                items.len()
                            )));
                        }
                        convert(items)?
                    }
                    None => vec![W::one(); count],
                };
                SubmodularFunction::Coverage { items, sets: sets.clone() }
            }
            SubmodularDesc::MatroidRank { matroid, weights } => {
                let matroid = matroid.build()?;
                if matroid.ground_size() != weights.len() {
                    return Err(invalid("matroid-rank objective needs one weight per element"));
                }
                SubmodularFunction::MatroidRank { matroid, weights: convert(weights)? }
            }
            SubmodularDesc::Cut { vertices, edges } => {
                let mut out = Vec::with_capacity(edges.len());
                for (u, v, w) in edges {
                    if u >= vertices || v >= vertices {
                        return Err(invalid(format!("cut edge ({u}, {v}) leaves 0..{vertices}")));
                    }
                    out.push((*u, *v, convert(std::slice::from_ref(w))?.remove(0)));
                }
                SubmodularFunction::Cut { vertices: *vertices, edges: out }
            }
            SubmodularDesc::Modular { weights } => SubmodularFunction::Modular { weights: convert(weights)? },
        })
    }
}

/// Value oracle that only answers on revealed elements.
#[derive(Debug)]
pub struct RevealGuard<'a, W> {
    f: &'a SubmodularFunction<W>,
    revealed: Vec<bool>,
}

impl<'a, W: Scalar> RevealGuard<'a, W> {
    pub fn new(f: &'a SubmodularFunction<W>) -> Self {
        RevealGuard { f, revealed: vec![false; f.ground_size()] }
    }

    pub fn reveal(&mut self, e: usize) {
        self.revealed[e] = true;
    }

    pub fn try_value(&self, set: &[usize]) -> Result<W> {
        match set.iter().find(|&&e| !self.revealed[e]) {
            Some(e) => Err(invalid(format!("objective queried on unrevealed element {e}"))),
            None => Ok(self.f.value(set)),
        }
    }

    /// Like [`Self::try_value`], but premature queries only fail in debug
    /// builds.
    pub fn value(&self, set: &[usize]) -> W {
        debug_assert!(self.try_value(set).is_ok(), "premature query on {set:?}");
        self.f.value(set)
    }
}

/// Greedy by marginal gain over the elements in `allowed`: repeatedly adds
/// the feasible element with the largest positive marginal, lower id first
/// on ties. Returned in insertion order.
pub fn submodular_greedy<W: Scalar>(
    c: &Intersection,
    f: impl Fn(&[usize]) -> W,
    allowed: &[bool],
) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut taken = vec![false; c.n()];
    let mut current = f(&chosen);
    loop {
        let mut best: Option<(usize, W)> = None;
        for e in 0..c.n() {
            if !allowed[e] || taken[e] {
                continue;
            }
            chosen.push(e);
            if c.feasible(&chosen) {
                let gain = f(&chosen) - current.clone();
                if gain.is_positive() && best.as_ref().is_none_or(|(_, g)| gain > *g) {
                    best = Some((e, gain));
                }
            }
            chosen.pop();
        }
        match best {
            Some((e, gain)) => {
                chosen.push(e);
                taken[e] = true;
                current = current + gain;
            }
            None => return chosen,
        }
    }
}

/// `f_w(S) = min_{A ⊆ S} f(A) + w(S \ A)`.
pub fn convolution_value<W: Scalar>(f: &SubmodularFunction<W>, w: &[W], set: &[usize]) -> Result<W> {
    convolution_value_with_limit(f, w, set, CONVOLUTION_LIMIT)
}

pub fn convolution_value_with_limit<W: Scalar>(
    f: &SubmodularFunction<W>,
    w: &[W],
    set: &[usize],
    limit: usize,
) -> Result<W> {
    if set.len() > limit {
        return Err(Error::ResourceLimit(format!(
            "convolution over {} elements exceeds the limit of {limit}",
            set.len()
        )));
    }
    let mut best: Option<W> = None;
    for m in 0u32..1 << set.len() {
        let (mut inside, mut rest) = (Vec::new(), W::zero());
        for (i, &e) in set.iter().enumerate() {
            if m >> i & 1 == 1 {
                inside.push(e);
            } else {
                rest = rest + w[e].clone();
            }
        }
        let value = f.value(&inside) + rest;
        if best.as_ref().is_none_or(|b| value < *b) {
            best = Some(value);
        }
    }
    Ok(best.expect("at least the empty subset"))
}

/// A feasible set maximizing `f`, by enumeration of all feasible sets.
pub fn brute_force_max<W: Scalar>(c: &Intersection, f: &SubmodularFunction<W>) -> Result<(Vec<usize>, W)> {
    if c.n() > BRUTE_FORCE_LIMIT {
        return Err(Error::ResourceLimit(format!(
            "brute force over {} elements exceeds the limit of {BRUTE_FORCE_LIMIT}",
            c.n()
        )));
    }
    fn go<W: Scalar>(
        c: &Intersection,
        f: &SubmodularFunction<W>,
        next: usize,
        set: &mut Vec<usize>,
        best: &mut (Vec<usize>, W),
    ) {
        let value = f.value(set);
        if value > best.1 {
            *best = (set.clone(), value);
        }
        for e in next..c.n() {
            set.push(e);
            if c.feasible(set) {
                go(c, f, e + 1, set, best);
            }
            set.pop();
        }
    }
    let mut best = (Vec::new(), f.value(&[]));
    go(c, f, 0, &mut Vec::new(), &mut best);
    Ok(best)
}

/// One run of the submodular reduction.
#[derive(Clone, Debug, PartialEq)]
pub struct SubmodularRun<W> {
    /// The learning sample `L`.
    pub learning: Vec<usize>,
    /// `G`, submodular greedy on `L`, in insertion order.
    pub greedy: Vec<usize>,
    /// `E`: relevant elements that won their coin, ascending.
    pub revealed: Vec<usize>,
    /// Linear weights handed to the inner algorithm (0 outside `E`).
    pub weights: Vec<W>,
    /// `Q`, everything the inner algorithm accepted.
    pub inner_accepted: Vec<usize>,
    /// `Q ∩ E`, ascending.
    pub selected: Vec<usize>,
    pub value: W,
}

/// `α / 3k`.
pub fn default_online_probability(alpha: f64, k: usize) -> f64 {
    alpha / (3.0 * k as f64)
}

/// `α² / 128k²`.
pub fn online_bound(alpha: f64, k: usize) -> f64 {
    alpha * alpha / (128.0 * (k * k) as f64)
}

/// The reduction with learning sample `L ~ μ_{1/2}`.
///
/// `inner` must produce sets feasible in `c`. Its own sample is drawn
/// alongside `L` from one pooled sample; elements of `L` get weight 0, and
/// those it neither sampled nor saw arrive are fed to it at the end.
pub fn submodular_online<W: Scalar, R: Rng>(
    c: &Intersection,
    f: &SubmodularFunction<W>,
    mut inner: Box<dyn OrderOblivious<W>>,
    p: f64,
    arrival: &ArrivalOrder,
    opt: &[bool],
    rng: &mut R,
) -> Result<SubmodularRun<W>> {
    check_probability(p)?;
    let n = c.n();
    if f.ground_size() != n {
        return Err(invalid(format!("objective has {} elements, constraint {n}", f.ground_size())));
    }
    arrival.validate(n)?;
    let mut guard = RevealGuard::new(f);

    let m = inner.sample_size(n, rng).min(n);
    let plan = merge_samples(n, 0.5, &[m], rng)?;
    let learning = plan.s.clone();
    let in_l = mask(n, &learning);
    for &e in &learning {
        guard.reveal(e);
    }
    let greedy = submodular_greedy(c, |s| guard.value(s), &in_l);

    let mut weights = vec![W::zero(); n];
    let mut in_e = vec![false; n];
    let mut synthetic = |e: usize, guard: &mut RevealGuard<'_, W>, rng: &mut R| -> W {
        if in_l[e] {
            return W::zero();
        }
        guard.reveal(e);
        let mut allowed = in_l.clone();
        allowed[e] = true;
        let rerun = submodular_greedy(c, |s| guard.value(s), &allowed);
        if let Some(pos) = rerun.iter().position(|&x| x == e) {
            if rng.random_bool(p) {
                in_e[e] = true;
                weights[e] = guard.value(&[&rerun[..pos], &[e]].concat()) - guard.value(&rerun[..pos]);
                return weights[e].clone();
            }
        }
        W::zero()
    };

    let inner_sample: Vec<(usize, W)> =
        plan.s_j[0].iter().map(|&e| (e, synthetic(e, &mut guard, rng))).collect();
    inner.observe_sample(&inner_sample);

    let in_pool = mask(n, &plan.pooled);
    let remaining: Vec<usize> = (0..n).filter(|&e| !in_pool[e]).collect();
    let order = TieBreakOrder::new(&vec![W::zero(); n]);
    for e in arrival.realize(&remaining, &order, opt, rng) {
        let w = synthetic(e, &mut guard, rng);
        if inner.offer(e, &w) {
            inner.place(e, Placement::Primary);
        }
    }
    let own = mask(n, &plan.s_j[0]);
    for &e in plan.pooled.iter().filter(|&&e| !own[e]) {
        let w = synthetic(e, &mut guard, rng);
        if inner.offer(e, &w) {
            inner.place(e, Placement::Primary);
        }
    }

    let mut inner_accepted = inner.accepted();
    inner_accepted.sort_unstable();
    if !c.feasible(&inner_accepted) {
        return Err(Error::Invariant(format!("inner algorithm accepted infeasible {inner_accepted:?}")));
    }
    let selected: Vec<usize> = inner_accepted.iter().copied().filter(|&e| in_e[e]).collect();
    let value = f.value(&selected);
    Ok(SubmodularRun {
        learning,
        greedy,
        revealed: (0..n).filter(|&e| in_e[e]).collect(),
        weights,
        inner_accepted,
        selected,
        value,
    })
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::matroid::{ConcreteMatroid, GraphicMatroid, PartitionMatroid, UniformMatroid};
    use crate::msp::simple_partition_secretary;
    use crate::offline::greedy_intersection;

    fn coverage() -> SubmodularFunction<i64> {
        SubmodularFunction::Coverage { items: vec![1; 3], sets: vec![vec![0, 1], vec![1, 2], vec![2]] }
    }

    #[test]
    fn coverage_greedy() {
        let c = Intersection::single(Arc::new(UniformMatroid::new(3, 2)));
        let f = coverage();
        let chosen = submodular_greedy(&c, |s| f.value(s), &[true; 3]);
        assert_eq!(chosen, vec![0, 1]);
        assert_eq!(f.value(&chosen), 3);
    }

    #[test]
    fn modular_greedy_is_linear_greedy() {
        let w = vec![3i64, 7, 7, 1, 4];
        let m = PartitionMatroid::simple(vec![0, 0, 1, 1, 2]);
        let c = Intersection::single(Arc::new(m));
        let f = SubmodularFunction::Modular { weights: w.clone() };
        let chosen = submodular_greedy(&c, |s| f.value(s), &[true; 5]);
        assert_eq!(chosen, greedy_intersection(&c, &w, &TieBreakOrder::new(&w)).selected);
        let zero = SubmodularFunction::Modular { weights: vec![0i64; 5] };
        assert!(submodular_greedy(&c, |s| zero.value(s), &[true; 5]).is_empty());
    }

    #[test]
    fn every_variant_is_submodular() {
        let rank = SubmodularFunction::MatroidRank {
            matroid: Arc::new(GraphicMatroid::complete(4)),
            weights: vec![5i64, 1, 3, 2, 2, 4],
        };
        let cut = SubmodularFunction::Cut {
            vertices: 5,
            edges: vec![(0, 1, 2i64), (1, 2, 1), (2, 3, 3), (3, 4, 1), (4, 0, 2), (0, 2, 1)],
        };
        assert_eq!(coverage().submodularity_violation().unwrap(), None);
        assert_eq!(rank.submodularity_violation().unwrap(), None);
        assert_eq!(cut.submodularity_violation().unwrap(), None);
        assert!(cut.value(&[0, 1, 2, 3, 4]) < cut.value(&[0]), "cuts are not monotone");
        let bad = SubmodularFunction::Cut { vertices: 2, edges: vec![(0, 1, -1i64)] };
        assert!(bad.submodularity_violation().unwrap().is_some());
    }

    #[test]
    fn convolution_edge_cases() {
        let f = coverage();
        assert_eq!(convolution_value(&f, &[5, 5, 5], &[]).unwrap(), 0);
        assert_eq!(convolution_value(&f, &[0, 0, 0], &[0, 1]).unwrap(), 0);
        assert_eq!(convolution_value(&f, &[100, 100, 100], &[0, 1]).unwrap(), 3);
        assert_eq!(convolution_value(&f, &[1, 1, 1], &[0, 1, 2]).unwrap(), 3);
        let many: Vec<usize> = (0..16).collect();
        let modular = SubmodularFunction::Modular { weights: vec![1i64; 16] };
        assert!(matches!(convolution_value(&modular, &[1; 16], &many), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn reveal_guard_refuses_premature_queries() {
        let f = coverage();
        let mut guard = RevealGuard::new(&f);
        guard.reveal(0);
        assert_eq!(guard.try_value(&[0]).unwrap(), 2);
        assert!(guard.try_value(&[0, 1]).is_err());
    }

    #[test]
    fn description_parses() {
        let desc: SubmodularDesc =
            serde_json::from_str(r#"{"type":"cut","vertices":3,"edges":[[0,1,"1/2"],[1,2,1]]}"#).unwrap();
        let f = desc.build::<crate::Rational>().unwrap();
        assert_eq!(f.ground_size(), 3);
        let desc: SubmodularDesc = serde_json::from_str(r#"{"type":"coverage","sets":[[0],[0,1]]}"#).unwrap();
        assert_eq!(desc.build::<i64>().unwrap().value(&[1]), 2);
        let bad: SubmodularDesc = serde_json::from_str(r#"{"type":"modular","weights":[-1]}"#).unwrap();
        assert!(bad.build::<i64>().is_err());
    }

    #[test]
    fn online_output_is_feasible_and_inside_e() {
        let pm = ConcreteMatroid::Partition(PartitionMatroid::simple(vec![0, 0, 1, 1, 2, 2]));
        let c = Intersection::single(pm.clone().into_oracle());
        let f = SubmodularFunction::Coverage {
            items: vec![1i64; 6],
            sets: vec![vec![0, 1], vec![1], vec![2, 3], vec![3, 4], vec![5], vec![0, 5]],
        };
        let (_, best) = brute_force_max(&c, &f).unwrap();
        assert_eq!(best, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..300 {
            let inner = Box::new(simple_partition_secretary::<i64>(&pm, 0.5).unwrap());
            let run = submodular_online(&c, &f, inner, 0.5, &ArrivalOrder::UniformRandom, &[false; 6], &mut rng)
                .unwrap();
            assert!(c.feasible(&run.selected));
            assert!(run.selected.iter().all(|e| run.revealed.contains(e)));
            assert!(run.revealed.iter().all(|&e| run.weights[e] > 0));
            assert!(run.learning.iter().all(|e| !run.revealed.contains(e)));
        }
    }

    #[test]
    fn bound_helpers() {
        assert_eq!(online_bound(0.25, 1), 1.0 / 2048.0);
        assert_eq!(default_online_probability(0.25, 1), 0.25 / 3.0);
    }
}
