//! Year-over-year chaining: each table's posterior becomes the next prior.

use crate::bayes::{
    dress, posterior_update, to_gamma_prime_scale, undress_log_or, DiscretePosterior,
    DiscretePrior, LikelihoodDensity, ScaleTag,
};
use crate::effect::{sigma_hat, z_statistic};
use crate::error::{Error, Result};
use crate::table::TwoByTwoTable;

/// Redistributes point masses at `support` onto the fixed `grid` by
/// proportional split between the two flanking grid points. Total mass is
/// conserved exactly; interior points also conserve the mean exactly because
/// the split is linear in position.
pub(crate) fn rebin_onto(grid: &[f64], support: &[f64], prob: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; grid.len()];
    let last = grid.len() - 1;
    for (&s, &p) in support.iter().zip(prob) {
        if p == 0.0 {
            continue;
        }
        if s <= grid[0] {
            out[0] += p;
        } else if s >= grid[last] {
            out[last] += p;
        } else {
            // partition_point returns the first grid index with value > s,
            // so the flanking points are j-1 and j.
            let j = grid.partition_point(|&g| g <= s);
            let (lo, hi) = (grid[j - 1], grid[j]);
            let frac = (s - lo) / (hi - lo);
            out[j - 1] += p * (1.0 - frac);
            out[j] += p * frac;
        }
    }
    out
}

/// Runs the dress → update → undress chain over an ordered batch of tables,
/// starting from `initial` on the raw (log-odds-ratio) scale.
///
/// For each table the current prior is dressed with that table's (N, σ̂),
/// updated on its observed Z statistic, undressed back to the raw scale, and
/// re-binned onto the initial grid so it can serve as the next step's prior.
/// The final posterior is returned on the γ′ scale via the exact pointwise
/// normalization map.
///
/// Tables are used exactly as given: apply the half-count correction before
/// calling if zero cells are possible.
pub fn sequential_update(
    tables: &[TwoByTwoTable],
    initial: &DiscretePrior,
    density: LikelihoodDensity,
) -> Result<DiscretePosterior> {
    if tables.is_empty() {
        return Err(Error::InvalidSpec {
            reason: "sequential update needs at least one table".to_string(),
        });
    }
    let grid = initial.support().to_vec();
    let mut current = initial.clone();
    for (k, table) in tables.iter().enumerate() {
        let sigma = sigma_hat(table)?;
        let n = table.n();
        let z = z_statistic(table.log_or(), sigma, n);
        let dressed = dress(&current, n, sigma);
        let post = posterior_update(&dressed, z, density).map_err(|e| match e {
            Error::AllZeroLikelihood { .. } => Error::AllZeroLikelihood { index: Some(k) },
            other => other,
        })?;
        let raw = undress_log_or(&post, n, sigma)?;
        let weights = rebin_onto(&grid, raw.support(), raw.probabilities());
        current = DiscretePrior::new(grid.clone(), weights)?;
    }
    let raw = DiscretePosterior::new(
        current.support().to_vec(),
        current.probabilities().to_vec(),
        ScaleTag::LogOr,
    )?;
    to_gamma_prime_scale(&raw)
}
