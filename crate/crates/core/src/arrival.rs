//! Arrival orders for the selection phase.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matroid::TieBreakOrder;

/// How the non-sample elements are presented to an algorithm.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArrivalOrder {
    UniformRandom,
    WeightDecreasing,
    WeightIncreasing,
    /// Everything outside `OPT` first (lightest first), then `OPT` (lightest first).
    OptLast,
    /// `OPT` first (heaviest first), then everything else (heaviest first).
    OptFirst,
    /// A fixed permutation of the whole ground set; sampled elements are skipped.
    Explicit(Vec<usize>),
}

impl ArrivalOrder {
    /// The orders every guarantee is tested against.
    pub fn test_family() -> [ArrivalOrder; 5] {
        [
            ArrivalOrder::UniformRandom,
            ArrivalOrder::WeightDecreasing,
            ArrivalOrder::WeightIncreasing,
            ArrivalOrder::OptLast,
            ArrivalOrder::OptFirst,
        ]
    }

    /// Orders `remaining`. `order` is the instance's tie-break order and
    /// `opt` marks the optimum the adversarial orders are built around.
    pub fn realize<R: Rng + ?Sized>(
        &self,
        remaining: &[usize],
        order: &TieBreakOrder,
        opt: &[bool],
        rng: &mut R,
    ) -> Vec<usize> {
        let mut out = remaining.to_vec();
        match self {
            ArrivalOrder::UniformRandom => out.shuffle(rng),
            ArrivalOrder::WeightDecreasing => order.sort(&mut out),
            ArrivalOrder::WeightIncreasing => {
                order.sort(&mut out);
                out.reverse();
            }
            ArrivalOrder::OptLast => {
                order.sort(&mut out);
                out.reverse();
                out.sort_by_key(|&e| opt[e]);
            }
            ArrivalOrder::OptFirst => {
                order.sort(&mut out);
                out.sort_by_key(|&e| !opt[e]);
            }
            ArrivalOrder::Explicit(perm) => {
                let mut rank = vec![usize::MAX; order.len()];
                for (i, &e) in perm.iter().enumerate() {
                    rank[e] = i;
                }
                out.sort_by_key(|&e| (rank[e], e));
            }
        }
        out
    }

    /// Checks that an explicit order is a permutation of `0..n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        if let ArrivalOrder::Explicit(perm) = self {
            let mut seen = vec![false; n];
            for &e in perm {
                if e >= n || std::mem::replace(&mut seen[e], true) {
                    return Err(Error::InvalidArgument(format!(
                        "explicit order is not a permutation of 0..{n}"
                    )));
                }
            }
            if perm.len() != n {
                return Err(Error::InvalidArgument(format!(
                    "explicit order lists {} of {n} elements",
                    perm.len()
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for ArrivalOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArrivalOrder::UniformRandom => f.write_str("uniform"),
            ArrivalOrder::WeightDecreasing => f.write_str("decreasing"),
            ArrivalOrder::WeightIncreasing => f.write_str("increasing"),
            ArrivalOrder::OptLast => f.write_str("opt-last"),
            ArrivalOrder::OptFirst => f.write_str("opt-first"),
            ArrivalOrder::Explicit(perm) => {
                let ids: Vec<String> = perm.iter().map(usize::to_string).collect();
                f.write_str(&ids.join(","))
            }
        }
    }
}

/// Accepts `uniform`, `decreasing`, `increasing`, `opt-last`, `opt-first`,
/// or a comma-separated permutation such as `2,0,1`.
impl FromStr for ArrivalOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "uniform" | "uniform-random" | "random" => ArrivalOrder::UniformRandom,
            "decreasing" | "weight-decreasing" => ArrivalOrder::WeightDecreasing,
            "increasing" | "weight-increasing" => ArrivalOrder::WeightIncreasing,
            "opt-last" => ArrivalOrder::OptLast,
            "opt-first" => ArrivalOrder::OptFirst,
            other => {
                let perm = other
                    .split(',')
                    .map(|t| t.trim().parse::<usize>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| Error::Parse(format!("unknown arrival order {other:?}")))?;
                ArrivalOrder::Explicit(perm)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::matroid::mask;

    #[test]
    fn deterministic_orders() {
        let w = [4, 1, 3, 2, 5];
        let order = TieBreakOrder::new(&w);
        let opt = mask(5, &[0, 4]);
        let remaining = [0, 1, 2, 3];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let realize = |o: ArrivalOrder, rng: &mut ChaCha8Rng| o.realize(&remaining, &order, &opt, rng);
        assert_eq!(realize(ArrivalOrder::WeightDecreasing, &mut rng), vec![0, 2, 3, 1]);
        assert_eq!(realize(ArrivalOrder::WeightIncreasing, &mut rng), vec![1, 3, 2, 0]);
        assert_eq!(realize(ArrivalOrder::OptLast, &mut rng), vec![1, 3, 2, 0]);
        assert_eq!(realize(ArrivalOrder::OptFirst, &mut rng), vec![0, 2, 3, 1]);
        assert_eq!(
            realize(ArrivalOrder::Explicit(vec![4, 3, 2, 1, 0]), &mut rng),
            vec![3, 2, 1, 0]
        );
        let mut shuffled = realize(ArrivalOrder::UniformRandom, &mut rng);
        shuffled.sort_unstable();
        assert_eq!(shuffled, remaining);
    }

    #[test]
    fn parses_and_validates() {
        assert_eq!("opt-last".parse::<ArrivalOrder>().unwrap(), ArrivalOrder::OptLast);
        let explicit: ArrivalOrder = "2, 0,1".parse().unwrap();
        assert_eq!(explicit, ArrivalOrder::Explicit(vec![2, 0, 1]));
        assert!(explicit.validate(3).is_ok());
        assert!(explicit.validate(4).is_err());
        assert!(ArrivalOrder::Explicit(vec![0, 0]).validate(2).is_err());
        assert!("sideways".parse::<ArrivalOrder>().is_err());
        for o in ArrivalOrder::test_family() {
            assert_eq!(o.to_string().parse::<ArrivalOrder>().unwrap(), o);
        }
    }
}
