use std::sync::Arc;
use std::time::Duration;

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use misp::arrival::ArrivalOrder;
use misp::framework::{independent_samples, merge_samples};
use misp::harness::{
    generate_instance, monte_carlo, Algorithm, AlgorithmKind, Family, SimulationReport,
};
use misp::matroid::{
    DirectSum, Dual, GraphicMatroid, LaminarMatroid, LinearMatroid, MatroidDesc, PartitionMatroid,
    Restriction, TransversalMatroid, UniformMatroid,
};
use misp::msp::{GeneralizedPartitionSecretary, OrderOblivious};
use misp::offline::{brute_force_opt, greedy_intersection, greedy_single};
use misp::overlap::{estimate_overlap, simulate_greedy_with, CoupledRun};
use misp::rng::{bernoulli_mask, trial_rng};
use misp::scalar::{total, ExactValue};
use misp::stats::Estimate;
use misp::submodular::{brute_force_max, submodular_greedy, SubmodularDesc, SubmodularFunction};
use misp::{IntInstance, Intersection, Matroid, Rational, Result, TieBreakOrder};

use crate::axioms::{check_axioms, check_dual_rank};
use crate::chi2::goodness_of_fit;
use crate::enumerate::{coupled_distribution, direct_distribution, simple_partition_frequencies};
use crate::{Criterion, Outcome};

const TRIALS: usize = 10_000;

pub static CRITERIA: [Criterion; 15] = [
    Criterion { id: 1, title: "matroid axioms", limit: secs(10), check: axioms },
    Criterion { id: 2, title: "greedy exactness", limit: secs(30), check: greedy_exact },
    Criterion { id: 3, title: "greedy k-approximation", limit: secs(60), check: greedy_k_approx },
    Criterion { id: 4, title: "optimum overlap", limit: secs(120), check: overlap },
    Criterion { id: 5, title: "coupled greedy prefixes", limit: secs(120), check: coupling },
    Criterion { id: 6, title: "distributional equivalence", limit: secs(10), check: equivalence },
    Criterion { id: 7, title: "simple partition", limit: secs(120), check: simple_partition },
    Criterion { id: 8, title: "generalized partition", limit: secs(120), check: generalized_partition },
    Criterion { id: 9, title: "graphic reduce-and-solve", limit: secs(120), check: graphic },
    Criterion { id: 10, title: "sparse linear, transversal", limit: secs(180), check: linear_transversal },
    Criterion { id: 11, title: "OPT-competitive combiner", limit: secs(180), check: combine_opt },
    Criterion { id: 12, title: "reduce-and-solve combiner", limit: secs(300), check: combine_rs },
    Criterion { id: 13, title: "sample merging", limit: secs(60), check: sample_merging },
    Criterion { id: 14, title: "submodular", limit: secs(300), check: submodular },
    Criterion { id: 15, title: "determinism", limit: secs(300), check: determinism },
];

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn family(f: Family, n: usize, seed: u64) -> Result<(String, IntInstance)> {
    Ok((format!("{f}/{n}#{seed}"), generate_instance(f, n, seed)?))
}

fn instance(weights: Vec<i64>, matroids: Vec<MatroidDesc>) -> IntInstance {
    IntInstance { weights, matroids, objective: None }
}

fn k4(weights: Vec<i64>) -> IntInstance {
    let edges = vec![[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];
    instance(weights, vec![MatroidDesc::Graphic { vertices: 4, edges }])
}

fn partition(blocks: Vec<Vec<usize>>) -> MatroidDesc {
    MatroidDesc::Partition { blocks, caps: None }
}

/// The 6-element, 3-block simple partition instance.
fn three_blocks() -> IntInstance {
    instance(vec![6, 5, 4, 3, 2, 1], vec![partition(vec![vec![0, 3], vec![1, 4], vec![2, 5]])])
}

/// Worst case seen across several Monte Carlo estimates.
struct Tally {
    bound: f64,
    all_clear: bool,
    worst: Option<(String, Estimate)>,
    shifted: usize,
}

impl Tally {
    fn new(bound: f64) -> Self {
        Tally { bound, all_clear: true, worst: None, shifted: 0 }
    }

    fn add(&mut self, label: String, est: Estimate) {
        self.all_clear &= est.clears(self.bound);
        let slack = |e: &Estimate| e.upper() - self.bound;
        if self.worst.as_ref().is_none_or(|(_, w)| slack(&est) < slack(w)) {
            self.worst = Some((label, est));
        }
    }

    fn describe(&self, what: &str) -> String {
        match &self.worst {
            Some((label, e)) => format!(
                "worst {what} {:.4} ± {:.4} at {label}, bound {:.5}",
                e.mean, e.std_err, self.bound
            ),
            None => "nothing measured".into(),
        }
    }

    fn outcome(self, what: &str) -> Outcome {
        let mut detail = self.describe(what);
        if self.shifted > 0 {
            detail += &format!(" ({} runs measured a restricted optimum other than OPT)", self.shifted);
        }
        Outcome::new(self.all_clear && self.worst.is_some(), detail)
    }
}

fn run_orders(inst: &IntInstance, algo: &Algorithm, seed: u64) -> Result<Vec<SimulationReport>> {
    ArrivalOrder::test_family()
        .iter()
        .enumerate()
        .map(|(i, order)| monte_carlo(inst, algo, order, TRIALS, seed + i as u64))
        .collect()
}

/// The selection frequency of every element of the optimum the algorithm
/// runs on, under every test order. For the refined rules that optimum is
/// the one of the restriction to the chosen refinements; `shifted` counts
/// instances where it differs from OPT.
fn frequency_check(cases: &[(String, IntInstance)], algo: &Algorithm, bound: f64, seed: u64) -> Result<Tally> {
    let mut tally = Tally::new(bound);
    for (i, (label, inst)) in cases.iter().enumerate() {
        for report in run_orders(inst, algo, seed + 10 * i as u64)? {
            tally.shifted += usize::from(report.guaranteed != report.opt);
            for &e in &report.guaranteed {
                tally.add(format!("{label} {} e{e}", report.order), report.frequency(e));
            }
        }
    }
    Ok(tally)
}

/// Mean ratio to OPT, under every test order.
fn ratio_check(cases: &[(String, IntInstance)], algo: &Algorithm, bound: f64, seed: u64) -> Result<Tally> {
    let mut tally = Tally::new(bound);
    for (i, (label, inst)) in cases.iter().enumerate() {
        for report in run_orders(inst, algo, seed + 10 * i as u64)? {
            tally.add(format!("{label} {}", report.order), report.estimate());
        }
    }
    Ok(tally)
}

fn combine(parts: Vec<Outcome>) -> Outcome {
    let passed = parts.iter().all(|o| o.passed);
    let detail = parts.into_iter().map(|o| o.detail).collect::<Vec<_>>().join("; ");
    Outcome::new(passed, detail)
}

fn rational_rows(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
    rows.iter().map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect()).collect()
}

fn axioms() -> Result<Outcome> {
    let mut base: Vec<(String, Arc<dyn Matroid>)> = vec![
        ("uniform(6,3)".into(), Arc::new(UniformMatroid::new(6, 3))),
        ("uniform(4,0)".into(), Arc::new(UniformMatroid::new(4, 0))),
        (
            "partition caps 2,1,1".into(),
            Arc::new(PartitionMatroid::new(vec![vec![0, 1, 2], vec![3, 4], vec![5, 6, 7]], vec![2, 1, 1])?),
        ),
        (
            "partition with loops".into(),
            Arc::new(PartitionMatroid::with_loops(7, vec![vec![0, 1], vec![3, 4, 5]], vec![1, 2])?),
        ),
        ("K4".into(), Arc::new(GraphicMatroid::complete(4))),
        (
            "multigraph".into(),
            Arc::new(GraphicMatroid::new(4, vec![(0, 0), (0, 1), (0, 1), (1, 2), (2, 3), (3, 1), (0, 2)])?),
        ),
        (
            "laminar".into(),
            Arc::new(LaminarMatroid::new(
                8,
                vec![((0..8).collect(), 3), (vec![0, 1, 2, 3], 2), (vec![0, 1], 1), (vec![5, 6], 1)],
            )?),
        ),
        (
            "rational linear".into(),
            Arc::new(LinearMatroid::from_rows(rational_rows(&[
                &[1, 0, 0, 1, 1, 0, 2, 0],
                &[0, 1, 0, 1, 0, 1, 4, 0],
                &[0, 0, 1, 0, 1, 1, 6, 0],
            ]))?),
        ),
        (
            "transversal".into(),
            Arc::new(TransversalMatroid::new(
                3,
                vec![vec![0], vec![0, 1], vec![1], vec![1, 2], vec![2], vec![0, 2], vec![]],
            )?),
        ),
    ];
    for f in [
        Family::RandomPartition,
        Family::RandomLaminar,
        Family::RandomGraph,
        Family::RandomBipartite,
        Family::RandomSparseMatrix,
    ] {
        let (label, inst) = family(f, 8, 11)?;
        base.push((label, inst.matroids[0].build()?));
    }
    let k4: Arc<dyn Matroid> = Arc::new(GraphicMatroid::complete(4));
    let mut all = base.clone();
    all.push(("restriction of K4".into(), Arc::new(Restriction::new(k4.clone(), vec![0, 2, 3, 5])?)));
    all.push((
        "direct sum".into(),
        Arc::new(DirectSum::new(vec![
            Arc::new(UniformMatroid::new(3, 1)),
            Arc::new(GraphicMatroid::complete(3)),
            Arc::new(TransversalMatroid::new(1, vec![vec![0], vec![0]])?),
        ])),
    ));
    for (label, m) in &base {
        all.push((format!("dual of {label}"), Arc::new(Dual::new(m.clone()))));
    }
    for (label, m) in &all {
        if m.ground_size() > 8 {
            return Ok(Outcome::new(false, format!("{label} has more than 8 elements")));
        }
        if let Err(msg) = check_axioms(m.as_ref()) {
            return Ok(Outcome::new(false, format!("{label}: {msg}")));
        }
    }
    for (label, m) in &base {
        if let Err(msg) = check_dual_rank(m.as_ref(), &Dual::new(m.clone())) {
            return Ok(Outcome::new(false, format!("{label}: {msg}")));
        }
    }
    Ok(Outcome::new(
        true,
        format!("{} matroids pass exhaustively, dual rank identity exact on {}", all.len(), base.len()),
    ))
}

const SINGLE_FAMILIES: [Family; 5] = [
    Family::RandomPartition,
    Family::RandomLaminar,
    Family::RandomGraph,
    Family::RandomBipartite,
    Family::RandomSparseMatrix,
];

fn greedy_exact() -> Result<Outcome> {
    let mut mismatches = Vec::new();
    for i in 0..200 {
        let (label, inst) = family(SINGLE_FAMILIES[i % 5], 1 + (i * 7) % 12, 1000 + i as u64)?;
        let c = inst.constraint()?;
        let order = TieBreakOrder::new(&inst.weights);
        let mut g = greedy_single(c.matroid(0).as_ref(), &inst.weights, &order);
        let mut opt = brute_force_opt(&c, &inst.weights, &order)?;
        g.sort_unstable();
        opt.sort_unstable();
        if g != opt {
            mismatches.push(label);
        }
    }
    Ok(Outcome::new(
        mismatches.is_empty(),
        format!("200 instances, n ≤ 12; mismatches: {mismatches:?}"),
    ))
}

fn greedy_k_approx() -> Result<Outcome> {
    let mut worst = f64::INFINITY;
    for i in 0..200 {
        let f = if i % 2 == 0 { Family::BipartiteMatchingIntersection } else { Family::PartitionTransversal };
        let (_, inst) = family(f, 1 + (i * 5) % 12, 2000 + i as u64)?;
        let c = inst.constraint()?;
        let order = TieBreakOrder::new(&inst.weights);
        let g = total(&inst.weights, &greedy_intersection(&c, &inst.weights, &order).selected);
        let opt = total(&inst.weights, &brute_force_opt(&c, &inst.weights, &order)?);
        if c.k() as i64 * g < opt {
            return Ok(Outcome::new(false, format!("w(greedy) = {g} < w(OPT)/{} = {opt}/{}", c.k(), c.k())));
        }
        worst = worst.min(g as f64 / opt as f64);
    }
    Ok(Outcome::new(true, format!("200 two-matroid instances; smallest w(greedy)/w(OPT) = {worst:.4} ≥ 1/2")))
}

fn two_matroid_cases() -> Result<Vec<(String, IntInstance)>> {
    [
        (Family::BipartiteMatchingIntersection, 8, 1),
        (Family::BipartiteMatchingIntersection, 10, 2),
        (Family::BipartiteMatchingIntersection, 12, 3),
        (Family::PartitionTransversal, 10, 4),
        (Family::PartitionTransversal, 12, 5),
    ]
    .into_iter()
    .map(|(f, n, s)| family(f, n, s))
    .collect()
}

fn overlap() -> Result<Outcome> {
    let mut tally = Tally::new(1.0 / 16.0);
    for (i, (label, inst)) in two_matroid_cases()?.into_iter().enumerate() {
        let c = inst.constraint()?;
        let mut rng = ChaCha8Rng::seed_from_u64(400 + i as u64);
        let stats = estimate_overlap(&c, &inst.weights, 0.75, TRIALS, &mut rng)?;
        // scale to a ratio so instances are comparable
        let scale = stats.opt_weight;
        let est = stats.estimate();
        tally.add(label, Estimate { mean: est.mean / scale, std_err: est.std_err / scale, samples: est.samples });
    }
    Ok(tally.outcome("w′(∩ OPT′)/w(OPT)"))
}

fn coupling() -> Result<Outcome> {
    let cases = [family(Family::BipartiteMatchingIntersection, 10, 1)?, family(Family::PartitionTransversal, 10, 2)?];
    let p = 0.75;
    let mut tally = Tally::new(0.0);
    for (i, (label, inst)) in cases.iter().enumerate() {
        let c = inst.constraint()?;
        let order = TieBreakOrder::new(&inst.weights);
        let n = c.n();
        let mut diffs = vec![Vec::with_capacity(TRIALS); n];
        for t in 0..TRIALS as u64 {
            let mut rng = trial_rng(500 + i as u64, t);
            let run = simulate_greedy_with(&c, &inst.weights, &order, |_| rng.random_bool(p), true)?;
            run.check_invariants(&c)?;
            let w = CoupledRun::prefix_counts(&run.w, &order);
            let g = CoupledRun::prefix_counts(&run.g, &order);
            for l in 0..n {
                diffs[l].push(w[l] as f64 - g[l] as f64 / 6.0);
            }
        }
        for (l, d) in diffs.iter().enumerate() {
            tally.add(format!("{label} ℓ={}", l + 1), Estimate::from_samples(d));
        }
    }
    let detail = tally.describe("|W∩N≤ℓ| − |G∩N≤ℓ|/6");
    Ok(Outcome::new(tally.all_clear, format!("{detail}; invariants held on every step of every run")))
}

fn equivalence() -> Result<Outcome> {
    let mut cases: Vec<(String, IntInstance)> = Vec::new();
    for f in Family::ALL {
        for n in 1..=4 {
            for seed in 0..3 {
                cases.push(family(f, n, seed)?);
            }
        }
    }
    cases.push(("ties and a zero".into(), instance(vec![2, 2, 0], vec![MatroidDesc::Uniform { n: 3, rank: 2 }])));
    cases.push((
        "equal-weight 2×2 matching".into(),
        instance(vec![1, 1, 1, 1], vec![partition(vec![vec![0, 1], vec![2, 3]]), partition(vec![vec![0, 2], vec![1, 3]])]),
    ));
    let ps = [Rational::new(1.into(), 2.into()), Rational::new(3.into(), 4.into())];
    for (label, inst) in &cases {
        let c = inst.constraint()?;
        let order = TieBreakOrder::new(&inst.weights);
        for p in &ps {
            let coupled = coupled_distribution(&c, &inst.weights, &order, p)?;
            let direct = direct_distribution(&c, &inst.weights, &order, p);
            let mass: Rational = coupled.values().cloned().sum();
            if coupled != direct || !mass.is_one() {
                return Ok(Outcome::new(false, format!("{label} at p = {p}: distributions differ")));
            }
        }
    }
    Ok(Outcome::new(true, format!("{} instances with n ≤ 4, p ∈ {{1/2, 3/4}}: identical exact distributions", cases.len())))
}

fn simple_partition() -> Result<Outcome> {
    let quarter = Rational::new(1.into(), 4.into());
    let micro = [
        (vec![1], vec![vec![0]]),
        (vec![2, 1], vec![vec![0, 1]]),
        (vec![1, 2], vec![vec![0, 1]]),
        (vec![1, 1], vec![vec![0, 1]]),
        (vec![1, 2], vec![vec![0], vec![1]]),
    ];
    let mut lowest = Rational::one();
    for (weights, blocks) in micro {
        let inst = instance(weights, vec![partition(blocks)]);
        let c = inst.constraint()?;
        let opt = brute_force_opt(&c, &inst.weights, &TieBreakOrder::new(&inst.weights))?;
        let m = inst.concrete(0)?;
        for order in ArrivalOrder::test_family() {
            let freq = simple_partition_frequencies(&m, &inst.weights, &order, &opt)?;
            for &e in &opt {
                if freq[e] < quarter {
                    return Ok(Outcome::new(false, format!("{inst:?} {order}: e{e} picked with probability {}", freq[e])));
                }
                lowest = lowest.min(freq[e].clone());
            }
        }
    }
    let cases = vec![
        ("3 blocks".to_string(), three_blocks()),
        (
            "3 blocks, shuffled weights".to_string(),
            instance(vec![2, 6, 3, 5, 1, 4], vec![partition(vec![vec![0, 3], vec![1, 4], vec![2, 5]])]),
        ),
    ];
    let algo = Algorithm::new(AlgorithmKind::Partition).with_p(0.5);
    let tally = frequency_check(&cases, &algo, 0.25, 700)?;
    let exact = Outcome::new(true, format!("n ≤ 2 exact: lowest OPT probability {lowest}"));
    Ok(combine(vec![tally.outcome("OPT frequency"), exact]))
}

fn generalized_partition() -> Result<Outcome> {
    let matroids = [
        PartitionMatroid::new(vec![(0..6).collect()], vec![2])?,
        PartitionMatroid::new(vec![vec![0, 1, 2], vec![3, 4, 5]], vec![2, 1])?,
        PartitionMatroid::new(vec![vec![0, 1], vec![2, 3, 4], vec![5]], vec![1, 2, 1])?,
        PartitionMatroid::with_loops(6, vec![vec![0, 2, 4], vec![1, 3]], vec![2, 1])?,
    ];
    let weight_sets: [[i64; 6]; 2] = [[5, 3, 6, 1, 4, 2], [2, 2, 1, 1, 3, 3]];
    let mut compared = 0usize;
    for pm in &matroids {
        let oracle: Arc<dyn Matroid> = Arc::new(pm.clone());
        for weights in &weight_sets {
            let order = TieBreakOrder::new(weights);
            for bits in 0u32..1 << 6 {
                let sampled: Vec<usize> = (0..6).filter(|e| bits >> e & 1 == 1).collect();
                let mut alg = GeneralizedPartitionSecretary::<i64>::new(oracle.clone());
                alg.observe_sample(&sampled.iter().map(|&e| (e, weights[e])).collect::<Vec<_>>());
                for e in (0..6).filter(|e| bits >> e & 1 == 0) {
                    let direct = pm.block_of(e).and_then(|b| {
                        let mut mates: Vec<usize> = sampled.iter().copied().filter(|&f| pm.block_of(f) == Some(b)).collect();
                        order.sort(&mut mates);
                        let cap = pm.cap(b);
                        (cap >= 1 && mates.len() >= cap).then(|| mates[cap - 1])
                    });
                    let via_oracle = alg.oracle_threshold(e).map(|(f, _)| f);
                    if direct != via_oracle {
                        return Ok(Outcome::new(
                            false,
                            format!("{pm:?}, sample {sampled:?}, e{e}: oracle {via_oracle:?}, direct {direct:?}"),
                        ));
                    }
                    compared += 1;
                }
            }
        }
    }
    let cases = vec![
        family(Family::RandomPartition, 9, 2)?,
        family(Family::RandomPartition, 10, 5)?,
        ("uniform(6,2)".into(), instance(vec![4, 9, 2, 7, 5, 1], vec![MatroidDesc::Uniform { n: 6, rank: 2 }])),
    ];
    let tally = frequency_check(&cases, &Algorithm::new(AlgorithmKind::GeneralizedPartition), 0.25, 800)?;
    let exact = Outcome::new(true, format!("oracle and direct thresholds agree on {compared} cases"));
    Ok(combine(vec![exact, tally.outcome("OPT frequency")]))
}

fn graphic() -> Result<Outcome> {
    let mut cases = vec![("K4".to_string(), k4(vec![3, 6, 1, 5, 2, 4]))];
    for seed in 1..=3 {
        cases.push(family(Family::RandomGraph, 8, seed)?);
    }
    let algo = Algorithm::new(AlgorithmKind::Graphic).with_p(2.0 / 3.0);
    // every trial checks that the accepted edges form a forest
    let tally = frequency_check(&cases, &algo, 4.0 / 27.0, 900)?;
    Ok(tally.outcome("OPT-edge frequency"))
}

fn linear_transversal() -> Result<Outcome> {
    let tu = MatroidDesc::Linear {
        rows: [[1, 0, 1, 1], [-1, 1, 0, 0], [0, -1, -1, 0]]
            .iter()
            .map(|r| r.iter().map(|&v| ExactValue::from(v)).collect())
            .collect(),
    };
    let linear = vec![
        ("4-column TU".to_string(), instance(vec![4, 3, 2, 1], vec![tu])),
        family(Family::RandomSparseMatrix, 8, 1)?,
        family(Family::RandomSparseMatrix, 8, 2)?,
    ];
    let algo = Algorithm { kind: AlgorithmKind::SparseLinear, p: Some(0.5), sparsity: Some(2) };
    let sparse = frequency_check(&linear, &algo, 1.0 / 8.0, 1000)?.outcome("sparse-linear OPT frequency");
    let bipartite = vec![
        (
            "complete 2×2".to_string(),
            instance(vec![2, 1], vec![MatroidDesc::Transversal { right: 2, adjacency: vec![vec![0, 1], vec![0, 1]] }]),
        ),
        family(Family::RandomBipartite, 8, 1)?,
        family(Family::RandomBipartite, 8, 2)?,
    ];
    let algo = Algorithm::new(AlgorithmKind::Transversal).with_p(0.5);
    let transversal = frequency_check(&bipartite, &algo, 0.25, 1100)?.outcome("transversal OPT frequency");
    Ok(combine(vec![sparse, transversal]))
}

fn combine_opt() -> Result<Outcome> {
    let algo = Algorithm::new(AlgorithmKind::CombineOpt);
    let pairs = vec![
        family(Family::BipartiteMatchingIntersection, 8, 1)?,
        family(Family::BipartiteMatchingIntersection, 8, 2)?,
    ];
    // the combiner fails the run if its output is dependent in either matroid
    let two = ratio_check(&pairs, &algo, 1.0 / 256.0, 1200)?.outcome("k=2 ratio");
    let one = ratio_check(&[("3 blocks".into(), three_blocks())], &algo, 1.0 / 16.0, 1300)?.outcome("k=1 ratio");
    Ok(combine(vec![two, one]))
}

fn combine_rs() -> Result<Outcome> {
    let algo = Algorithm::new(AlgorithmKind::CombineRs);
    let graphs = vec![("K4".to_string(), k4(vec![3, 6, 1, 5, 2, 4])), family(Family::RandomGraph, 8, 1)?];
    // every run checks g(T₁) = I for each inner algorithm
    let one = ratio_check(&graphs, &algo, 1.0 / 108.0, 1400)?.outcome("k=1 graphic ratio");
    let pt = vec![family(Family::PartitionTransversal, 8, 1)?, family(Family::PartitionTransversal, 8, 2)?];
    let two = ratio_check(&pt, &algo, 1.0 / 768.0, 1500)?.outcome("partition×transversal ratio");
    Ok(combine(vec![one, two]))
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn sample_merging() -> Result<Outcome> {
    const DRAWS: usize = 100_000;
    let cases: [(usize, f64, &[usize]); 4] = [(3, 0.5, &[1, 2]), (3, 0.75, &[2]), (2, 1.0 / 3.0, &[1, 1]), (3, 0.25, &[3, 1])];
    let mut lowest = (f64::INFINITY, String::new());
    for (i, &(n, p, sizes)) in cases.iter().enumerate() {
        let sets = sizes.len() + 1;
        let cells = 1usize << (n * sets);
        let encode = |s: &[usize], s_j: &[Vec<usize>]| -> usize {
            std::iter::once(s).chain(s_j.iter().map(Vec::as_slice)).enumerate().fold(0, |acc, (j, set)| {
                acc | set.iter().fold(0, |m, &e| m | 1 << e) << (n * j)
            })
        };
        let probs: Vec<f64> = (0..cells)
            .map(|cell| {
                let part = |j: usize| ((cell >> (n * j)) & ((1 << n) - 1)).count_ones() as usize;
                let m = part(0);
                let mut prob = p.powi(m as i32) * (1.0 - p).powi((n - m) as i32);
                for (j, &m_j) in sizes.iter().enumerate() {
                    prob *= if part(j + 1) == m_j { 1.0 / binomial(n, m_j) } else { 0.0 };
                }
                prob
            })
            .collect();
        let mut merged = vec![0u64; cells];
        let mut reference = vec![0u64; cells];
        let mut rng = ChaCha8Rng::seed_from_u64(1600 + i as u64);
        for _ in 0..DRAWS {
            let plan = merge_samples(n, p, sizes, &mut rng)?;
            merged[encode(&plan.s, &plan.s_j)] += 1;
            let (s, s_j) = independent_samples(n, p, sizes, &mut rng)?;
            reference[encode(&s, &s_j)] += 1;
        }
        for (route, counts) in [("merged", &merged), ("independent", &reference)] {
            let test = goodness_of_fit(counts, &probs);
            if test.p_value < lowest.0 {
                lowest = (test.p_value, format!("{route} n={n} p={p:.3} sizes {sizes:?} (χ² {:.1}, df {})", test.statistic, test.df));
            }
        }
    }
    Ok(Outcome::new(lowest.0 > 0.01, format!("lowest p-value {:.4} for {}", lowest.0, lowest.1)))
}

/// Exhaustive `f(A) + f(B) ≥ f(A∪B) + f(A∩B)` and `f ≥ 0`.
fn check_submodular(f: &SubmodularFunction<i64>) -> std::result::Result<(), String> {
    let n = f.ground_size();
    let ids = |m: usize| -> Vec<usize> { (0..n).filter(|&e| m >> e & 1 == 1).collect() };
    let values: Vec<i64> = (0..1usize << n).map(|m| f.value(&ids(m))).collect();
    if let Some(m) = values.iter().position(|&v| v < 0) {
        return Err(format!("f({:?}) < 0", ids(m)));
    }
    for a in 0..values.len() {
        for b in 0..values.len() {
            if values[a] + values[b] < values[a | b] + values[a & b] {
                return Err(format!("violated at A = {:?}, B = {:?}", ids(a), ids(b)));
            }
        }
    }
    Ok(())
}

fn objectives(rng: &mut ChaCha8Rng) -> Result<Vec<(String, SubmodularFunction<i64>)>> {
    let n = 8;
    let items: Vec<i64> = (0..10).map(|_| rng.random_range(1..=5)).collect();
    let sets = (0..n)
        .map(|_| {
            let k = rng.random_range(1..=3);
            rand::seq::index::sample(rng, 10, k).into_vec()
        })
        .collect();
    let edges = (0..12)
        .map(|_| {
            let pair = rand::seq::index::sample(rng, n, 2);
            (pair.index(0), pair.index(1), rng.random_range(1..=4))
        })
        .collect();
    let graph = generate_instance(Family::RandomGraph, 8, 3)?;
    Ok(vec![
        ("coverage".into(), SubmodularFunction::Coverage { items, sets }),
        ("cut".into(), SubmodularFunction::Cut { vertices: n, edges }),
        (
            "graphic rank".into(),
            SubmodularFunction::MatroidRank { matroid: graph.matroids[0].build()?, weights: graph.weights.clone() },
        ),
        ("modular".into(), SubmodularFunction::Modular { weights: graph.weights }),
    ])
}

fn submodular() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(1700);
    let functions = objectives(&mut rng)?;
    for (label, f) in &functions {
        check_submodular(f).map_err(|msg| misp::Error::Invariant(format!("{label}: {msg}")))?;
        if f.submodularity_violation()?.is_some() {
            return Ok(Outcome::new(false, format!("{label}: the library check disagrees")));
        }
    }

    let simple4 = partition(vec![vec![0, 1], vec![2, 3], vec![4, 5], vec![6, 7]]);
    let constraints: Vec<(String, Intersection)> = vec![
        ("partition".into(), instance(vec![1; 8], vec![simple4.clone()]).constraint()?),
        ("uniform(8,3)".into(), instance(vec![1; 8], vec![MatroidDesc::Uniform { n: 8, rank: 3 }]).constraint()?),
        family(Family::BipartiteMatchingIntersection, 8, 1).and_then(|(l, i)| Ok((l, i.constraint()?)))?,
        family(Family::PartitionTransversal, 8, 2).and_then(|(l, i)| Ok((l, i.constraint()?)))?,
    ];
    let mut greedy_cases = 0usize;
    let mut restriction = Tally::new(0.0);
    for (fl, f) in functions.iter().take(2) {
        for (cl, c) in &constraints {
            let k = c.k() as i64;
            let all = vec![true; c.n()];
            let g = submodular_greedy(c, |s| f.value(s), &all);
            let fg = f.value(&g);
            for bits in 0u32..1 << c.n() {
                let set: Vec<usize> = (0..c.n()).filter(|e| bits >> e & 1 == 1).collect();
                if !c.feasible(&set) {
                    continue;
                }
                let mut union = set.clone();
                union.extend(g.iter().copied().filter(|e| !set.contains(e)));
                if (k + 1) * fg < f.value(&union) {
                    return Ok(Outcome::new(false, format!("{fl} on {cl}: f(G) < f(C∪G)/(k+1) for C = {set:?}")));
                }
                greedy_cases += 1;
            }
            let (_, best) = brute_force_max(c, f)?;
            let target = best as f64 / (4.0 * (k + 1) as f64);
            let values: Vec<f64> = (0..TRIALS as u64)
                .map(|t| {
                    let sample = bernoulli_mask(c.n(), 0.5, &mut trial_rng(1800, t));
                    f.value(&submodular_greedy(c, |s| f.value(s), &sample)) as f64 - target
                })
                .collect();
            restriction.add(format!("{fl} on {cl}"), Estimate::from_samples(&values));
        }
    }

    let coverage = SubmodularDesc::Coverage {
        sets: vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3], vec![4, 5], vec![0, 5], vec![6], vec![1, 6]],
        items: Some([3, 1, 2, 4, 1, 2, 5].iter().map(|&v| ExactValue::from(v)).collect()),
    };
    let online_inst = IntInstance { weights: vec![1; 8], matroids: vec![simple4], objective: Some(coverage) };
    let online = ratio_check(
        &[("coverage on 4 blocks".into(), online_inst)],
        &Algorithm::new(AlgorithmKind::Submodular),
        1.0 / 2048.0,
        1900,
    )?
    .outcome("Online(p) ratio");

    let exhaustive = Outcome::new(true, format!("{} functions submodular on all pairs; greedy bound on {greedy_cases} feasible C", functions.len()));
    let restricted = {
        let detail = restriction.describe("f(greedy(S)) − f(OPT)/(4(k+1))");
        Outcome::new(restriction.all_clear, detail)
    };
    Ok(combine(vec![exhaustive, restricted, online]))
}

fn report_bytes(report: &SimulationReport) -> Result<Vec<u8>> {
    let mut bytes = report.to_json()?.into_bytes();
    report.write_csv(&mut bytes)?;
    Ok(bytes)
}

fn determinism() -> Result<Outcome> {
    let coverage = SubmodularDesc::Coverage { sets: vec![vec![0], vec![0, 1], vec![1], vec![2], vec![2, 3], vec![3]], items: None };
    let mut submodular_inst = three_blocks();
    submodular_inst.objective = Some(coverage);
    let runs = vec![
        (three_blocks(), AlgorithmKind::Partition),
        (k4(vec![3, 6, 1, 5, 2, 4]), AlgorithmKind::Graphic),
        (generate_instance(Family::BipartiteMatchingIntersection, 8, 1)?, AlgorithmKind::CombineOpt),
        (generate_instance(Family::PartitionTransversal, 8, 1)?, AlgorithmKind::CombineRs),
        (submodular_inst, AlgorithmKind::Submodular),
    ];
    let pool = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| misp::Error::InvalidArgument(e.to_string()))
    };
    let (one, four) = (pool(1)?, pool(4)?);
    for (inst, kind) in &runs {
        let algo = Algorithm::new(*kind);
        let run = || monte_carlo(inst, &algo, &ArrivalOrder::UniformRandom, 2_000, 42).and_then(|r| report_bytes(&r));
        let reference = run()?;
        if one.install(run)? != reference || four.install(run)? != reference {
            return Ok(Outcome::new(false, format!("{kind} report changed between runs")));
        }
    }
    for f in Family::ALL {
        if generate_instance(f, 9, 5)?.to_json()? != generate_instance(f, 9, 5)?.to_json()? {
            return Ok(Outcome::new(false, format!("{f} generator is not reproducible")));
        }
    }
    Ok(Outcome::new(
        true,
        format!("{} algorithms byte-identical across reruns on 1, 4 and default threads; generators reproducible", runs.len()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_in_order() {
        for (i, c) in CRITERIA.iter().enumerate() {
            assert_eq!(c.id, i + 1);
        }
    }

    #[test]
    fn tally_keeps_the_tightest() {
        let mut t = Tally::new(0.25);
        t.add("a".into(), Estimate { mean: 0.5, std_err: 0.01, samples: 100 });
        t.add("b".into(), Estimate { mean: 0.26, std_err: 0.01, samples: 100 });
        t.add("c".into(), Estimate { mean: 0.4, std_err: 0.01, samples: 100 });
        assert!(t.all_clear);
        assert_eq!(t.worst.as_ref().unwrap().0, "b");
        t.add("d".into(), Estimate { mean: 0.2, std_err: 0.01, samples: 100 });
        assert!(!t.all_clear);
    }

    #[test]
    fn axioms_pass() {
        assert!(axioms().unwrap().passed);
    }

    #[test]
    fn exact_equivalence_passes() {
        assert!(equivalence().unwrap().passed);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(3, 2), 3.0);
        assert_eq!(binomial(3, 0), 1.0);
        assert_eq!(binomial(3, 3), 1.0);
    }
}
