//! Deterministic per-trial random streams.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The generator for trial `trial` under `master`. Each trial gets its own
/// ChaCha stream, so trial `t` can be replayed without running `0..t`.
pub fn trial_rng(master: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(trial);
    rng
}

/// `n` independent Bernoulli(`p`) draws, as a membership mask.
pub fn bernoulli_mask<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Vec<bool> {
    (0..n).map(|_| rng.random_bool(p)).collect()
}

pub(crate) fn check_probability(p: f64) -> crate::Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(crate::error::invalid(format!("probability {p} outside [0, 1]")));
    }
    Ok(())
}
