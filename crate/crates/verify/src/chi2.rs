//! Chi-square goodness of fit of observed counts against exact cell
//! probabilities.

use statrs::distribution::{ChiSquared, ContinuousCDF};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
}

/// `counts[i]` observed against `probs[i]`. Cells of probability zero must
/// be empty; any count there gives a p-value of 0.
pub fn goodness_of_fit(counts: &[u64], probs: &[f64]) -> ChiSquareTest {
    assert_eq!(counts.len(), probs.len());
    let total: u64 = counts.iter().sum();
    let mut statistic = 0.0;
    let mut cells = 0usize;
    for (&c, &p) in counts.iter().zip(probs) {
        if p == 0.0 {
            if c > 0 {
                return ChiSquareTest { statistic: f64::INFINITY, df: 0, p_value: 0.0 };
            }
            continue;
        }
        let expected = p * total as f64;
        statistic += (c as f64 - expected).powi(2) / expected;
        cells += 1;
    }
    let df = cells.saturating_sub(1);
    let p_value = if df == 0 {
        1.0
    } else {
        ChiSquared::new(df as f64).expect("positive degrees of freedom").sf(statistic)
    };
    ChiSquareTest { statistic, df, p_value }
}
