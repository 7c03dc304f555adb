use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use misp::arrival::ArrivalOrder;
use misp::framework::{combine_reduce_and_solve, merge_samples};
use misp::harness::{generate_instance, procedure_for, AlgorithmKind, Family};
use misp::matroid::{mask, members};
use misp::offline::{brute_force_opt, greedy_intersection, greedy_single, Intersection};
use misp::overlap::{overlapping_opt, simulate_greedy, OverlapReducer, Provenance};
use misp::scalar::total;
use misp::{IntInstance, Matroid, TieBreakOrder};

fn family() -> impl Strategy<Value = Family> {
    prop::sample::select(Family::ALL.to_vec())
}

fn instance(max_n: usize) -> impl Strategy<Value = IntInstance> {
    (family(), 1..=max_n, any::<u64>()).prop_map(|(f, n, seed)| generate_instance(f, n, seed).unwrap())
}

fn setup(inst: &IntInstance) -> (Intersection, TieBreakOrder) {
    (inst.constraint().unwrap(), TieBreakOrder::new(&inst.weights))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn greedy_is_optimal_on_one_matroid(inst in instance(10)) {
        let (c, order) = setup(&inst);
        for m in c.matroids() {
            let one = Intersection::single(m.clone());
            let g = greedy_single(m.as_ref(), &inst.weights, &order);
            let opt = brute_force_opt(&one, &inst.weights, &order).unwrap();
            prop_assert!(m.independent(&g));
            prop_assert_eq!(total(&inst.weights, &g), total(&inst.weights, &opt));
        }
    }

    #[test]
    fn greedy_is_a_k_approximation(inst in instance(10)) {
        let (c, order) = setup(&inst);
        let g = greedy_intersection(&c, &inst.weights, &order).selected;
        let opt = brute_force_opt(&c, &inst.weights, &order).unwrap();
        prop_assert!(c.feasible(&g));
        prop_assert!(c.feasible(&opt));
        let k = c.k() as i64;
        prop_assert!(k * total(&inst.weights, &g) >= total(&inst.weights, &opt));
    }

    #[test]
    fn reduction_only_zeroes(inst in instance(10), seed in any::<u64>()) {
        let (c, order) = setup(&inst);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sample: Vec<bool> = (0..c.n()).map(|_| rand::Rng::random_bool(&mut rng, 0.5)).collect();
        let reduced = overlapping_opt(&c, &inst.weights, &order, &sample);
        let online = OverlapReducer::new(
            &c,
            &members(&sample).into_iter().map(|e| (e, inst.weights[e])).collect::<Vec<_>>(),
        );
        for e in 0..c.n() {
            let w = reduced.weights[e];
            prop_assert!(w == 0 || w == inst.weights[e]);
            prop_assert_eq!(sample[e], reduced.provenance[e] == Provenance::Sampled);
            if !sample[e] {
                prop_assert_eq!(online.reduce(&c, e, &inst.weights[e]), w);
            }
        }
        // the relevant elements plus greedy(S) never exceed feasibility one at a time
        for e in reduced.kept() {
            let mut probe = online.prefix(e, &inst.weights[e]);
            probe.push(e);
            prop_assert!(c.feasible(&probe));
        }
    }

    #[test]
    fn coupled_process_invariants(inst in instance(9), seed in any::<u64>()) {
        let (c, order) = setup(&inst);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let run = simulate_greedy(&c, &inst.weights, &order, 0.75, &mut rng).unwrap();
        prop_assert!(run.check_invariants(&c).is_ok());
        prop_assert!(run.w_ext.iter().all(|e| run.w.contains(e)));
    }

    #[test]
    fn merged_samples_are_consistent(n in 0usize..12, p in 0.0f64..=1.0, raw in prop::collection::vec(0usize..12, 0..4), seed in any::<u64>()) {
        let sizes: Vec<usize> = raw.into_iter().map(|m| m.min(n)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let plan = merge_samples(n, p, &sizes, &mut rng).unwrap();
        prop_assert_eq!(plan.s.len(), plan.m);
        prop_assert_eq!(&plan.m_j, &sizes);
        prop_assert_eq!(plan.pooled.len(), plan.pooled_size());
        let mut used = mask(n, &plan.s);
        for (j, s_j) in plan.s_j.iter().enumerate() {
            prop_assert_eq!(s_j.len(), sizes[j]);
            prop_assert_eq!(s_j.iter().filter(|&&e| used[e]).count(), plan.q_j[j]);
            for &e in s_j {
                used[e] = true;
            }
        }
        prop_assert_eq!(members(&used), {
            let mut a = plan.pooled.clone();
            a.sort_unstable();
            a
        });
    }

    #[test]
    fn combined_output_is_feasible(n in 2usize..9, seed in any::<u64>(), trial in any::<u64>()) {
        let inst = generate_instance(Family::PartitionTransversal, n, seed).unwrap();
        let c = inst.constraint().unwrap();
        let procs: Vec<_> = (0..inst.k())
            .map(|j| procedure_for::<i64>(&inst.concrete(j).unwrap(), AlgorithmKind::Single, None, None).unwrap())
            .collect();
        let opt = mask(n, &brute_force_opt(&c, &inst.weights, &TieBreakOrder::new(&inst.weights)).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(trial);
        let run = combine_reduce_and_solve(&procs, &inst.weights, &ArrivalOrder::UniformRandom, &opt, &mut rng).unwrap();
        prop_assert!(c.feasible(&run.selected));
        for primary in &run.primary {
            let mut a = primary.clone();
            a.sort_unstable();
            let mut b = run.selected.clone();
            b.sort_unstable();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn tie_order_is_weight_then_id(weights in prop::collection::vec(0i64..4, 1..10)) {
        let order = TieBreakOrder::new(&weights);
        for pair in order.as_slice().windows(2) {
            let (a, b) = (pair[0], pair[1]);
            prop_assert!(weights[a] > weights[b] || (weights[a] == weights[b] && a < b));
        }
    }
}
