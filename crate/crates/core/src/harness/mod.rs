//! Simulation harness: instances, algorithm selection and Monte Carlo
//! estimation of competitive ratios and selection frequencies.
//!
//! Trial `t` of a run with master seed `s` draws all of its randomness from
//! [`trial_rng`]`(s, t)`, so a report is a pure function of the instance, the
//! algorithm, the arrival order, the trial count and the seed.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arrival::ArrivalOrder;
use crate::error::{invalid, Error, Result};
use crate::framework::{
    combine_opt_competitive, combine_reduce_and_solve, opt_competitive_bound, reduce_and_solve_bound,
    refined_optimum,
};
use crate::matroid::{mask, ConcreteMatroid, Matroid, PartitionMatroid, TieBreakOrder};
use crate::msp::{
    generalized_partition_reduce_and_solve, graphic_reduce_and_solve, partition_reduce_and_solve,
    run_standalone, sparse_linear_reduce_and_solve, transversal_reduce_and_solve, OrderOblivious,
    ReduceAndSolve,
};
use crate::offline::{brute_force_opt, greedy_intersection, Intersection};
use crate::rng::trial_rng;
use crate::scalar::{total, Scalar, Weight};
use crate::stats::Estimate;
use crate::submodular::{
    brute_force_max, default_online_probability, online_bound, submodular_online, SubmodularFunction,
};

pub mod generate;
mod instance;

pub use generate::{generate_instance, Family};
pub use instance::SecretaryInstance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgorithmKind {
    /// Simple-partition threshold rule on the single matroid.
    Partition,
    /// Capacity-aware partition rule (sampling probability fixed at 1/2).
    GeneralizedPartition,
    /// Vertex-refined partition rule with an acyclicity guard.
    Graphic,
    /// Row-refined partition rule for column-sparse matrices.
    SparseLinear,
    /// Right-node-refined partition rule.
    Transversal,
    /// Whichever of the above fits the single matroid.
    Single,
    /// Combiner over OPT-competitive per-matroid algorithms.
    CombineOpt,
    /// Combiner over reduce-and-solve procedures.
    CombineRs,
    /// Submodular reduction over the single-matroid algorithm.
    Submodular,
    /// Offline greedy; a sanity baseline.
    Greedy,
}

impl AlgorithmKind {
    pub const ALL: [AlgorithmKind; 10] = [
        AlgorithmKind::Partition,
        AlgorithmKind::GeneralizedPartition,
        AlgorithmKind::Graphic,
        AlgorithmKind::SparseLinear,
        AlgorithmKind::Transversal,
        AlgorithmKind::Single,
        AlgorithmKind::CombineOpt,
        AlgorithmKind::CombineRs,
        AlgorithmKind::Submodular,
        AlgorithmKind::Greedy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlgorithmKind::Partition => "partition",
            AlgorithmKind::GeneralizedPartition => "generalized-partition",
            AlgorithmKind::Graphic => "graphic",
            AlgorithmKind::SparseLinear => "sparse-linear",
            AlgorithmKind::Transversal => "transversal",
            AlgorithmKind::Single => "single",
            AlgorithmKind::CombineOpt => "combine-opt",
            AlgorithmKind::CombineRs => "combine-rs",
            AlgorithmKind::Submodular => "submodular",
            AlgorithmKind::Greedy => "greedy",
        }
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgorithmKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AlgorithmKind::ALL
            .into_iter()
            .find(|k| k.name() == s.trim())
            .ok_or_else(|| invalid(format!("unknown algorithm {s:?}")))
    }
}

/// An algorithm with its optional parameter overrides.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Algorithm {
    pub kind: AlgorithmKind,
    /// Sampling probability of the single-matroid rules, or of the
    /// submodular reduction for [`AlgorithmKind::Submodular`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// Column sparsity bound for sparse linear matroids; defaults to the
    /// densest column.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sparsity: Option<usize>,
}

impl Algorithm {
    pub fn new(kind: AlgorithmKind) -> Self {
        Algorithm { kind, p: None, sparsity: None }
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = Some(p);
        self
    }
}

fn family_kind(m: &ConcreteMatroid) -> Result<AlgorithmKind> {
    Ok(match m {
        ConcreteMatroid::Partition(pm) if pm.is_simple() => AlgorithmKind::Partition,
        ConcreteMatroid::Partition(_) | ConcreteMatroid::Uniform(_) => AlgorithmKind::GeneralizedPartition,
        ConcreteMatroid::Graphic(_) => AlgorithmKind::Graphic,
        ConcreteMatroid::Linear(_) => AlgorithmKind::SparseLinear,
        ConcreteMatroid::Transversal(_) => AlgorithmKind::Transversal,
        ConcreteMatroid::Laminar(_) => {
            return Err(invalid("no secretary algorithm is implemented for laminar matroids"))
        }
    })
}

/// A uniform matroid is a partition matroid with a single block.
fn as_partition(m: &ConcreteMatroid) -> Result<ConcreteMatroid> {
    match m {
        ConcreteMatroid::Uniform(u) if u.full_rank() >= 1 => Ok(ConcreteMatroid::Partition(
            PartitionMatroid::new(vec![(0..u.ground_size()).collect()], vec![u.full_rank()])?,
        )),
        other => Ok(other.clone()),
    }
}

/// The reduce-and-solve procedure for one matroid. `kind` picks the rule;
/// composite kinds pick by family.
pub fn procedure_for<W: Scalar>(
    m: &ConcreteMatroid,
    kind: AlgorithmKind,
    p: Option<f64>,
    sparsity: Option<usize>,
) -> Result<ReduceAndSolve<W>> {
    let kind = match kind {
        AlgorithmKind::Partition
        | AlgorithmKind::GeneralizedPartition
        | AlgorithmKind::Graphic
        | AlgorithmKind::SparseLinear
        | AlgorithmKind::Transversal => kind,
        _ => family_kind(m)?,
    };
    match kind {
        AlgorithmKind::Partition => partition_reduce_and_solve(m, p.unwrap_or(0.5)),
        AlgorithmKind::GeneralizedPartition => generalized_partition_reduce_and_solve(&as_partition(m)?),
        AlgorithmKind::Graphic => graphic_reduce_and_solve(m, p.unwrap_or(2.0 / 3.0)),
        AlgorithmKind::Transversal => transversal_reduce_and_solve(m, p.unwrap_or(0.5)),
        AlgorithmKind::SparseLinear => {
            let k = match (sparsity, m) {
                (Some(k), _) => k,
                (None, ConcreteMatroid::Linear(lin)) => lin.column_sparsity().max(1),
                (None, other) => {
                    return Err(invalid(format!("sparse-linear needs a linear matroid, got {}", other.family())))
                }
            };
            sparse_linear_reduce_and_solve(m, k, p)
        }
        _ => unreachable!("composite kinds resolved above"),
    }
}

/// An algorithm prepared for repeated trials on one instance.
pub struct TrialRunner<W> {
    algorithm: Algorithm,
    weights: Vec<W>,
    c: Intersection,
    /// The optimum (linear or submodular) as a membership mask.
    opt: Vec<bool>,
    opt_ids: Vec<usize>,
    guaranteed: Vec<usize>,
    opt_value: f64,
    bound: Option<f64>,
    plan: Plan<W>,
}

enum Plan<W> {
    Single { rs: ReduceAndSolve<W>, d: Vec<usize> },
    CombineOpt { procs: Vec<ReduceAndSolve<W>> },
    CombineRs { procs: Vec<ReduceAndSolve<W>> },
    Submodular { f: SubmodularFunction<W>, inner: ReduceAndSolve<W>, p: f64 },
    Greedy { selected: Vec<usize> },
}

impl<W: Weight> TrialRunner<W> {
    pub fn new(instance: &SecretaryInstance<W>, algorithm: &Algorithm) -> Result<Self> {
        instance.validate()?;
        let c = instance.constraint()?;
        let weights = instance.weights.clone();
        let order = TieBreakOrder::new(&weights);
        let objective = instance.objective()?;
        if objective.is_some() && algorithm.kind != AlgorithmKind::Submodular {
            return Err(invalid(format!(
                "instance has a submodular objective; use the submodular algorithm, not {}",
                algorithm.kind
            )));
        }
        let (opt_ids, opt_value) = match &objective {
            Some(f) => {
                let (set, value) = brute_force_max(&c, f)?;
                (set, value.as_f64())
            }
            None => {
                let set = brute_force_opt(&c, &weights, &order)?;
                let value = total(&weights, &set).as_f64();
                (set, value)
            }
        };
        let single = |kind: AlgorithmKind| -> Result<ReduceAndSolve<W>> {
            if instance.k() != 1 {
                return Err(invalid(format!("{} runs on a single matroid, the instance has {}", kind, instance.k())));
            }
            procedure_for(&instance.concrete(0)?, kind, algorithm.p, algorithm.sparsity)
        };
        let all = |kind: AlgorithmKind| -> Result<Vec<ReduceAndSolve<W>>> {
            (0..instance.k())
                .map(|j| procedure_for(&instance.concrete(j)?, kind, algorithm.p, algorithm.sparsity))
                .collect()
        };
        let k = instance.k();
        let mut guaranteed = opt_ids.clone();
        let (plan, bound) = match algorithm.kind {
            AlgorithmKind::CombineOpt => {
                let procs = all(AlgorithmKind::CombineOpt)?;
                if let Some(rs) = procs.iter().find(|rs| rs.refined_size() != rs.ground_size()) {
                    return Err(invalid(format!(
                        "combine-opt needs OPT-competitive algorithms; the {} rule is only weakly so, use combine-rs",
                        rs.name()
                    )));
                }
                let cs: Vec<f64> = procs.iter().map(|rs| rs.params().c_o).collect();
                (Plan::CombineOpt { procs }, Some(opt_competitive_bound(&cs)))
            }
            AlgorithmKind::CombineRs => {
                let procs = all(AlgorithmKind::CombineRs)?;
                let params: Vec<_> = procs.iter().map(|rs| rs.params()).collect();
                (Plan::CombineRs { procs }, Some(reduce_and_solve_bound(&params)))
            }
            AlgorithmKind::Submodular => {
                let f = objective
                    .unwrap_or_else(|| SubmodularFunction::Modular { weights: weights.clone() });
                let inner = procedure_for(&instance.concrete(0)?, AlgorithmKind::Single, None, algorithm.sparsity)?;
                if k != 1 || inner.refined_size() != inner.ground_size() {
                    return Err(invalid(
                        "the submodular reduction runs over a single partition or uniform matroid",
                    ));
                }
                let alpha = inner.params().c_o;
                let p = algorithm.p.unwrap_or(default_online_probability(alpha, k));
                (Plan::Submodular { f, inner, p }, Some(online_bound(alpha, k)))
            }
            AlgorithmKind::Greedy => {
                let selected = greedy_intersection(&c, &weights, &order).selected;
                (Plan::Greedy { selected }, Some(1.0 / k as f64))
            }
            kind => {
                let rs = single(kind)?;
                let d = rs.covering_assignment(&opt_ids, &weights)?;
                guaranteed = refined_optimum(&rs, &weights, &d).into_iter().map(|r| rs.source(r)).collect();
                guaranteed.sort_unstable();
                let bound = rs.params().c_r * rs.params().c_o;
                (Plan::Single { rs, d }, Some(bound))
            }
        };
        Ok(TrialRunner {
            algorithm: algorithm.clone(),
            opt: mask(instance.n(), &opt_ids),
            weights,
            c,
            opt_ids,
            guaranteed,
            opt_value,
            bound,
            plan,
        })
    }

    pub fn algorithm(&self) -> &Algorithm {
        &self.algorithm
    }

    pub fn opt(&self) -> &[usize] {
        &self.opt_ids
    }

    /// Elements with a per-element selection guarantee: the optimum of the
    /// instance the algorithm actually runs on. For refined single-matroid
    /// rules that is the restriction to one refinement per element, which
    /// keeps `opt` optimal whenever some choice of refinements allows it.
    pub fn guaranteed(&self) -> &[usize] {
        &self.guaranteed
    }

    pub fn opt_value(&self) -> f64 {
        self.opt_value
    }

    /// The guaranteed ratio being tested, where one is known.
    pub fn bound(&self) -> Option<f64> {
        self.bound
    }

    /// One trial; returns the selected set and its objective value.
    pub fn run<R: Rng>(&self, arrival: &ArrivalOrder, rng: &mut R) -> Result<(Vec<usize>, f64)> {
        let selected = match &self.plan {
            Plan::Single { rs, d } => {
                let mut alg = rs.instantiate(d.clone());
                let order = TieBreakOrder::new(&self.weights);
                let run = run_standalone(&mut alg, &self.weights, &order, arrival, &self.opt, rng);
                if !rs.original().independent(&run.accepted) {
                    return Err(Error::Invariant(format!("{} accepted a dependent set", rs.name())));
                }
                run.accepted
            }
            Plan::CombineOpt { procs } => {
                let inners: Vec<Box<dyn OrderOblivious<W>>> = procs.iter().map(|rs| rs.new_inner()).collect();
                combine_opt_competitive(&self.c, inners, &self.weights, arrival, &self.opt, rng)?.selected
            }
            Plan::CombineRs { procs } => {
                combine_reduce_and_solve(procs, &self.weights, arrival, &self.opt, rng)?.selected
            }
            Plan::Submodular { f, inner, p } => {
                let run = submodular_online(&self.c, f, inner.new_inner(), *p, arrival, &self.opt, rng)?;
                return Ok((run.selected, run.value.as_f64()));
            }
            Plan::Greedy { selected } => selected.clone(),
        };
        let mut sorted = selected;
        sorted.sort_unstable();
        let value = total(&self.weights, &sorted).as_f64();
        Ok((sorted, value))
    }
}

/// One row of a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub ratio: f64,
    pub accepted: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub algorithm: Algorithm,
    pub order: String,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub opt: Vec<usize>,
    /// See [`TrialRunner::guaranteed`].
    pub guaranteed: Vec<usize>,
    pub opt_value: f64,
    pub mean_ratio: f64,
    pub std_err: f64,
    pub bound: Option<f64>,
    /// Fraction of trials selecting each element.
    pub frequencies: Vec<f64>,
    pub records: Vec<TrialRecord>,
}

impl SimulationReport {
    pub fn estimate(&self) -> Estimate {
        Estimate { mean: self.mean_ratio, std_err: self.std_err, samples: self.trials }
    }

    /// Selection frequency of `e` with its standard error.
    pub fn frequency(&self, e: usize) -> Estimate {
        let hits = self.records.iter().filter(|r| r.accepted.binary_search(&e).is_ok()).count();
        Estimate::from_counts(hits, self.trials)
    }

    /// The guaranteed element selected least often.
    pub fn weakest_guaranteed_element(&self) -> Option<(usize, Estimate)> {
        self.guaranteed
            .iter()
            .map(|&e| (e, self.frequency(e)))
            .min_by(|a, b| a.1.mean.total_cmp(&b.1.mean).then(a.0.cmp(&b.0)))
    }

    /// `mean + 3·SE − bound`, when a bound is known; nonnegative means the
    /// run is consistent with the bound.
    pub fn margin(&self) -> Option<f64> {
        self.bound.map(|b| self.estimate().upper() - b)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Columns `trial, ratio, accepted_ids, seed`; ids are `;`-separated.
    pub fn write_csv<Wr: Write>(&self, out: Wr) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(["trial", "ratio", "accepted_ids", "seed"])?;
        for r in &self.records {
            let ids: Vec<String> = r.accepted.iter().map(usize::to_string).collect();
            writer.write_record([
                r.trial.to_string(),
                r.ratio.to_string(),
                ids.join(";"),
                self.seed.to_string(),
            ])?;
        }
        writer.flush()?;
        Ok(())
    }

    pub fn save_json(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }
}

/// Runs `trials` independent trials in parallel.
pub fn monte_carlo<W: Weight>(
    instance: &SecretaryInstance<W>,
    algorithm: &Algorithm,
    order: &ArrivalOrder,
    trials: usize,
    seed: u64,
) -> Result<SimulationReport> {
    let runner = TrialRunner::new(instance, algorithm)?;
    simulate(&runner, order, trials, seed)
}

/// [`monte_carlo`] with an already prepared runner.
pub fn simulate<W: Weight>(
    runner: &TrialRunner<W>,
    order: &ArrivalOrder,
    trials: usize,
    seed: u64,
) -> Result<SimulationReport> {
    if trials == 0 {
        return Err(invalid("at least one trial is required"));
    }
    let n = runner.weights.len();
    order.validate(n)?;
    let outcomes: Vec<(Vec<usize>, f64)> = (0..trials as u64)
        .into_par_iter()
        .map(|t| runner.run(order, &mut trial_rng(seed, t)))
        .collect::<Result<_>>()?;
    let ratio = |value: f64| if runner.opt_value > 0.0 { value / runner.opt_value } else { 1.0 };
    let ratios: Vec<f64> = outcomes.iter().map(|(_, v)| ratio(*v)).collect();
    let est = Estimate::from_samples(&ratios);
    let mut counts = vec![0usize; n];
    for (set, _) in &outcomes {
        for &e in set {
            counts[e] += 1;
        }
    }
    Ok(SimulationReport {
        algorithm: runner.algorithm.clone(),
        order: order.to_string(),
        n,
        trials,
        seed,
        opt: runner.opt_ids.clone(),
        guaranteed: runner.guaranteed.clone(),
        opt_value: runner.opt_value,
        mean_ratio: est.mean,
        std_err: est.std_err,
        bound: runner.bound,
        frequencies: counts.iter().map(|&c| c as f64 / trials as f64).collect(),
        records: outcomes
            .into_iter()
            .zip(ratios)
            .enumerate()
            .map(|(trial, ((accepted, _), ratio))| TrialRecord { trial, ratio, accepted })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::MatroidDesc;

    fn partition_instance() -> SecretaryInstance<i64> {
        SecretaryInstance {
            weights: vec![6, 5, 4, 3, 2, 1],
            matroids: vec![MatroidDesc::Partition { blocks: vec![vec![0, 3], vec![1, 4], vec![2, 5]], caps: None }],
            objective: None,
        }
    }

    #[test]
    fn same_seed_same_report() {
        let inst = partition_instance();
        let algo = Algorithm::new(AlgorithmKind::Partition).with_p(0.5);
        let a = monte_carlo(&inst, &algo, &ArrivalOrder::UniformRandom, 500, 7).unwrap();
        let b = monte_carlo(&inst, &algo, &ArrivalOrder::UniformRandom, 500, 7).unwrap();
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
        let c = monte_carlo(&inst, &algo, &ArrivalOrder::UniformRandom, 500, 8).unwrap();
        assert_ne!(a.records, c.records);
    }

    #[test]
    fn greedy_baseline_is_exact_on_one_matroid() {
        let report =
            monte_carlo(&partition_instance(), &Algorithm::new(AlgorithmKind::Greedy), &ArrivalOrder::OptLast, 3, 0)
                .unwrap();
        assert_eq!(report.mean_ratio, 1.0);
        assert_eq!(report.std_err, 0.0);
    }

    #[test]
    fn partition_opt_elements_are_picked_a_quarter_of_the_time() {
        let inst = partition_instance();
        let algo = Algorithm::new(AlgorithmKind::Partition).with_p(0.5);
        for order in ArrivalOrder::test_family() {
            let report = monte_carlo(&inst, &algo, &order, 10_000, 3).unwrap();
            assert_eq!(report.opt, vec![0, 1, 2]);
            assert_eq!(report.guaranteed, report.opt);
            let (_, weakest) = report.weakest_guaranteed_element().unwrap();
            assert!(weakest.clears(0.25), "{order}: {weakest:?}");
            assert!(report.frequencies.iter().all(|f| (0.0..=1.0).contains(f)));
        }
    }

    #[test]
    fn csv_layout() {
        let report =
            monte_carlo(&partition_instance(), &Algorithm::new(AlgorithmKind::Greedy), &ArrivalOrder::UniformRandom, 2, 5)
                .unwrap();
        let mut out = Vec::new();
        report.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text, "trial,ratio,accepted_ids,seed\n0,1,0;1;2,5\n1,1,0;1;2,5\n");
    }

    #[test]
    fn bad_requests() {
        let inst = partition_instance();
        let algo = Algorithm::new(AlgorithmKind::Graphic);
        assert!(TrialRunner::new(&inst, &algo).is_err());
        assert!(monte_carlo(&inst, &Algorithm::new(AlgorithmKind::Partition), &ArrivalOrder::UniformRandom, 0, 1).is_err());
        let big = generate_instance(Family::RandomPartition, 25, 0).unwrap();
        assert!(matches!(
            TrialRunner::new(&big, &Algorithm::new(AlgorithmKind::Partition)),
            Err(Error::ResourceLimit(_))
        ));
        assert_eq!("combine-rs".parse::<AlgorithmKind>().unwrap(), AlgorithmKind::CombineRs);
    }
}
