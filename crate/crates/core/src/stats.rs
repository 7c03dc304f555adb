//! Sample means with standard errors.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    /// Standard error of the mean, from the unbiased sample variance.
    pub std_err: f64,
    pub samples: usize,
}

impl Estimate {
    pub fn from_samples(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return Estimate { mean: 0.0, std_err: 0.0, samples: 0 };
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let std_err = if n > 1 {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        } else {
            0.0
        };
        Estimate { mean, std_err, samples: n }
    }

    /// Frequency of `hits` successes among `n` trials.
    pub fn from_counts(hits: usize, n: usize) -> Self {
        if n == 0 {
            return Estimate { mean: 0.0, std_err: 0.0, samples: 0 };
        }
        let mean = hits as f64 / n as f64;
        // Bernoulli sample variance n/(n-1) * m(1-m)
        let std_err = if n > 1 {
            (mean * (1.0 - mean) / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Estimate { mean, std_err, samples: n }
    }

    /// `mean - 3 * std_err`.
    pub fn lower(&self) -> f64 {
        self.mean - 3.0 * self.std_err
    }

    /// `mean + 3 * std_err`.
    pub fn upper(&self) -> f64 {
        self.mean + 3.0 * self.std_err
    }

    /// `mean >= bound - 3 * std_err`: the estimate is consistent with an
    /// expectation of at least `bound`.
    pub fn clears(&self, bound: f64) -> bool {
        self.upper() >= bound
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_hand_computation() {
        let e = Estimate::from_samples(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(e.mean, 2.5);
        // sample variance 5/3, se = sqrt(5/12)
        assert!((e.std_err - (5.0f64 / 12.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn counts_agree_with_samples() {
        let values = [1.0, 0.0, 0.0, 1.0, 1.0];
        let a = Estimate::from_samples(&values);
        let b = Estimate::from_counts(3, 5);
        assert!((a.mean - b.mean).abs() < 1e-12);
        assert!((a.std_err - b.std_err).abs() < 1e-12);
    }
}
