//! Sampling 2×2 tables under a product-binomial design.

use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::table::TwoByTwoTable;

/// Exposure probability among cases implied by the control probability `q`
/// and an odds ratio `e^log_or`: p = q·OR / (1 + q·(OR − 1)).
pub fn case_exposure_probability(log_or: f64, q: f64) -> f64 {
    let or = log_or.exp();
    q * or / (1.0 + q * (or - 1.0))
}

/// Draws one table with fixed margins: `n_cases` cases, `round(ratio ·
/// n_cases)` controls, exposure counts binomial within each row.
///
/// `q` is the control exposure probability; the case probability follows
/// from the odds ratio. Both must land strictly inside (0,1).
pub fn sample_table<R: Rng + ?Sized>(
    log_or: f64,
    n_cases: u64,
    ratio: f64,
    q: f64,
    rng: &mut R,
) -> Result<TwoByTwoTable> {
    let p = case_exposure_probability(log_or, q);
    if !(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0) {
        return Err(Error::InvalidNuisance { p, q });
    }
    if n_cases < 2 || ratio <= 0.0 {
        return Err(Error::InvalidConfig {
            reason: format!("need n_cases >= 2 (got {n_cases}) and ratio > 0 (got {ratio})"),
        });
    }
    let n_controls = (ratio * n_cases as f64).round() as u64;
    let n11 = Binomial::new(n_cases, p).expect("p is interior").sample(rng);
    let n21 = Binomial::new(n_controls, q).expect("q is interior").sample(rng);
    TwoByTwoTable::from_counts(n11, n_cases - n11, n21, n_controls - n21)
}
