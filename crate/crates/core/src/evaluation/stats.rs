//! Goodness-of-fit and paired-comparison p-values.

use statrs::distribution::{Binomial, ChiSquared, ContinuousCDF, DiscreteCDF};

/// Pearson chi-square statistic and upper-tail p-value of `observed` counts
/// against cell probabilities `expected`.
///
/// Cells with zero expected probability must have zero observations (else the
/// p-value is 0) and do not count toward the degrees of freedom.
pub fn chi_square_test(observed: &[u64], expected: &[f64]) -> (f64, f64) {
    assert_eq!(observed.len(), expected.len(), "length mismatch");
    let n: u64 = observed.iter().sum();
    let mut stat = 0.0;
    let mut cells = 0usize;
    for (&o, &p) in observed.iter().zip(expected) {
        if p <= 0.0 {
            if o > 0 {
                return (f64::INFINITY, 0.0);
            }
            continue;
        }
        let e = p * n as f64;
        stat += (o as f64 - e).powi(2) / e;
        cells += 1;
    }
    if cells < 2 {
        return (stat, 1.0);
    }
    let dist = ChiSquared::new((cells - 1) as f64).expect("positive degrees of freedom");
    (stat, dist.sf(stat))
}

/// Two-sided exact sign test: p-value of seeing a split at least as uneven
/// as `wins` vs `losses` under a fair coin. Ties are dropped by the caller.
pub fn sign_test(wins: u64, losses: u64) -> f64 {
    let n = wins + losses;
    if n == 0 {
        return 1.0;
    }
    let k = wins.min(losses);
    let dist = Binomial::new(0.5, n).expect("valid binomial");
    (2.0 * dist.cdf(k)).min(1.0)
}
