//! Order-oblivious single-matroid secretary algorithms.
//!
//! An order-oblivious algorithm first names a sample size `m`, is shown a
//! uniformly random `m`-subset of the elements, and then sees the rest one at
//! a time in an order it does not control, deciding on each immediately.
//!
//! An outer framework may additionally act as a *switching adversary*: after
//! each acceptance it tells the algorithm whether the element went to the
//! primary sub-solution `T₁` (which must stay independent) or to `T₂`.

use rand::seq::index;
use rand::{Rng, RngCore};
use rand_distr::{Binomial, Distribution};

use crate::arrival::ArrivalOrder;
use crate::matroid::TieBreakOrder;

mod partition;
mod reduce;

pub use partition::{simple_partition_secretary, GeneralizedPartitionSecretary, Guard, PartitionRule};
pub use reduce::{
    generalized_partition_reduce_and_solve, graphic_reduce_and_solve, partition_reduce_and_solve,
    sparse_linear_reduce_and_solve, transversal_reduce_and_solve, Assigned, InnerFactory,
    ReduceAndSolve, RsParams, Witness,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Placement {
    /// `T₁`: counts toward the output and must stay independent.
    Primary,
    /// `T₂`: discarded by the adversary.
    Secondary,
}

pub trait OrderOblivious<W>: Send {
    /// How many elements to sample out of `n`. May be random.
    fn sample_size(&mut self, n: usize, rng: &mut dyn RngCore) -> usize;

    /// Shows the sample, with weights, before any arrival.
    fn observe_sample(&mut self, sample: &[(usize, W)]);

    /// Irrevocable decision on an arriving element.
    fn offer(&mut self, e: usize, w: &W) -> bool;

    /// Where the switching adversary put the element just accepted.
    fn place(&mut self, e: usize, placement: Placement);

    /// Every accepted element, in acceptance order.
    fn accepted(&self) -> Vec<usize>;

    /// Accepted elements not placed in `T₂`.
    fn primary(&self) -> Vec<usize>;
}

impl<W, A: OrderOblivious<W> + ?Sized> OrderOblivious<W> for Box<A> {
    fn sample_size(&mut self, n: usize, rng: &mut dyn RngCore) -> usize {
        (**self).sample_size(n, rng)
    }

    fn observe_sample(&mut self, sample: &[(usize, W)]) {
        (**self).observe_sample(sample)
    }

    fn offer(&mut self, e: usize, w: &W) -> bool {
        (**self).offer(e, w)
    }

    fn place(&mut self, e: usize, placement: Placement) {
        (**self).place(e, placement)
    }

    fn accepted(&self) -> Vec<usize> {
        (**self).accepted()
    }

    fn primary(&self) -> Vec<usize> {
        (**self).primary()
    }
}

/// `m ~ Binomial(n, p)`; a uniform `m`-subset is then a `μ_p` sample.
pub fn binomial_size(n: usize, p: f64, rng: &mut dyn RngCore) -> usize {
    Binomial::new(n as u64, p)
        .expect("probability validated at construction")
        .sample(rng) as usize
}

/// Uniformly random `m`-subset of `0..n`, ascending.
pub fn uniform_subset<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Vec<usize> {
    let mut ids = index::sample(rng, n, m.min(n)).into_vec();
    ids.sort_unstable();
    ids
}

/// Result of running one algorithm on its own.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandaloneRun {
    pub sample: Vec<usize>,
    pub arrivals: Vec<usize>,
    pub accepted: Vec<usize>,
}

/// Runs `alg` over elements `0..weights.len()` with every acceptance placed
/// in `T₁`. `opt` marks the optimum used by the adversarial orders.
pub fn run_standalone<W: Clone, R: RngCore>(
    alg: &mut dyn OrderOblivious<W>,
    weights: &[W],
    order: &TieBreakOrder,
    arrival: &ArrivalOrder,
    opt: &[bool],
    rng: &mut R,
) -> StandaloneRun {
    let n = weights.len();
    let m = alg.sample_size(n, rng).min(n);
    let sample = uniform_subset(n, m, rng);
    let shown: Vec<(usize, W)> = sample.iter().map(|&e| (e, weights[e].clone())).collect();
    alg.observe_sample(&shown);
    let in_sample = crate::matroid::mask(n, &sample);
    let remaining: Vec<usize> = (0..n).filter(|&e| !in_sample[e]).collect();
    let arrivals = arrival.realize(&remaining, order, opt, rng);
    for &e in &arrivals {
        if alg.offer(e, &weights[e]) {
            alg.place(e, Placement::Primary);
        }
    }
    StandaloneRun { sample, arrivals, accepted: alg.accepted() }
}
