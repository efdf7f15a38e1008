//! Selection experiment: run many tests, keep the one with the largest Z,
//! and compare the naive estimate against the posterior-mean estimate of the
//! winner's normalized effect.

use rand::Rng;
use rand_distr::{Distribution, Normal as NormalSampler};
use rayon::prelude::*;
use serde::Serialize;

use crate::bayes::{dress, posterior_update, summarize_posterior, to_gamma_prime_scale,
    undress_log_or, DiscretePrior, LikelihoodDensity};
use crate::effect::{gamma_prime, sigma_hat, z_statistic};
use crate::error::{Error, Result};
use crate::sim::frequentist::mc_se;
use crate::sim::rng::substream;
use crate::sim::sample::sample_table;
use crate::table::TwoByTwoTable;

/// Scenario description for the selection experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionSimConfig {
    /// Tests run per replicate; the largest Z wins.
    pub l_tests: u64,
    /// Total observations per table: n/2 cases, the rest controls.
    pub n: u64,
    /// True log odds ratios are drawn Normal(0, tau²) per test.
    pub tau: f64,
    pub n_reps: u64,
    /// Prior over the noncentrality-free effect scale (log OR units).
    pub prior: DiscretePrior,
    /// Credible level for the coverage check.
    pub level: f64,
    pub seed: u64,
}

impl SelectionSimConfig {
    fn validate(&self) -> Result<()> {
        let fail = |reason: String| Err(Error::InvalidConfig { reason });
        if self.l_tests < 1 {
            return fail("l_tests must be at least 1".to_string());
        }
        if self.n < 4 {
            return fail(format!("n must be at least 4 (two per group), got {}", self.n));
        }
        if self.tau < 0.0 {
            return fail(format!("tau must be nonnegative, got {}", self.tau));
        }
        if self.n_reps < 1 {
            return fail("n_reps must be at least 1".to_string());
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return fail(format!("level must lie in (0,1), got {}", self.level));
        }
        Ok(())
    }
}

/// Averages over replicates of the winning test's effect estimates.
///
/// All three expectation fields are on the normalized (gamma-prime) scale:
/// `e_true` is the mean true effect of the winner, `e_frequentist` the mean
/// corrected point estimate, and `e_posterior_mean` the mean posterior mean.
/// `selection_bias_*` are the differences from `e_true`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionReport {
    pub l_tests: u64,
    pub n: u64,
    pub tau: f64,
    pub n_reps: u64,
    pub level: f64,
    pub seed: u64,
    pub prior_bins: usize,
    pub e_true: f64,
    pub e_frequentist: f64,
    pub e_posterior_mean: f64,
    pub selection_bias_frequentist: f64,
    pub selection_bias_posterior: f64,
    /// Fraction of replicates whose HPD interval covered the winner's true
    /// normalized effect.
    pub coverage: f64,
    pub mc_se_true: f64,
    pub mc_se_frequentist: f64,
    pub mc_se_posterior: f64,
    pub mc_se_coverage: f64,
}

struct Replicate {
    true_gamma_prime: f64,
    frequentist_gamma_prime: f64,
    posterior_mean_gamma_prime: f64,
    covered: bool,
}

fn run_replicate(config: &SelectionSimConfig, rep: u64) -> Result<Replicate> {
    let mut rng = substream(config.seed, rep);
    let effect_dist = if config.tau > 0.0 {
        Some(NormalSampler::new(0.0, config.tau).expect("positive tau"))
    } else {
        None
    };

    // `n` is the total table size; split it into cases and controls.
    let cases = config.n / 2;
    let ratio = (config.n - cases) as f64 / cases as f64;

    let mut winner: Option<(f64, f64, TwoByTwoTable)> = None; // (z, x_true, corrected table)
    for _ in 0..config.l_tests {
        let x_true = effect_dist.as_ref().map_or(0.0, |d| d.sample(&mut rng));
        let q = rng.random_range(0.05..0.95);
        let table = sample_table(x_true, cases, ratio, q, &mut rng)?.haldane_correct();
        let sigma = sigma_hat(&table)?;
        let z = z_statistic(table.log_or(), sigma, table.n());
        if winner.as_ref().is_none_or(|(best, _, _)| z > *best) {
            winner = Some((z, x_true, table));
        }
    }
    let (z, x_true, table) = winner.expect("l_tests >= 1");

    let sigma = sigma_hat(&table)?;
    let dressed = dress(&config.prior, table.n(), sigma);
    let posterior = posterior_update(&dressed, z, LikelihoodDensity::NormalNoncentral)?;
    let on_log_or = undress_log_or(&posterior, table.n(), sigma)?;
    let on_gamma_prime = to_gamma_prime_scale(&on_log_or)?;
    let summary = summarize_posterior(&on_gamma_prime, config.level)?;
    let true_gamma_prime = gamma_prime(x_true);
    let (lo, hi) = summary.hpd;

    Ok(Replicate {
        true_gamma_prime,
        frequentist_gamma_prime: gamma_prime(table.log_or()),
        posterior_mean_gamma_prime: summary.mean,
        covered: lo <= true_gamma_prime && true_gamma_prime <= hi,
    })
}

/// Runs the selection experiment. Replicates are independent, each on its
/// own deterministic substream of `seed`; per-replicate results are summed
/// in index order so the report does not depend on thread scheduling.
pub fn simulate_selection(config: &SelectionSimConfig) -> Result<SelectionReport> {
    config.validate()?;
    let replicates: Vec<Replicate> = (0..config.n_reps)
        .into_par_iter()
        .map(|rep| run_replicate(config, rep))
        .collect::<Result<_>>()?;

    let n = config.n_reps as f64;
    let mean_of = |f: &dyn Fn(&Replicate) -> f64| replicates.iter().map(|r| f(r)).sum::<f64>() / n;
    let sd_of = |f: &dyn Fn(&Replicate) -> f64, mean: f64| {
        (replicates.iter().map(|r| (f(r) - mean).powi(2)).sum::<f64>() / n).sqrt()
    };
    let true_fn: &dyn Fn(&Replicate) -> f64 = &|r| r.true_gamma_prime;
    let freq_fn: &dyn Fn(&Replicate) -> f64 = &|r| r.frequentist_gamma_prime;
    let post_fn: &dyn Fn(&Replicate) -> f64 = &|r| r.posterior_mean_gamma_prime;
    let e_true = mean_of(true_fn);
    let e_frequentist = mean_of(freq_fn);
    let e_posterior_mean = mean_of(post_fn);
    let coverage = replicates.iter().filter(|r| r.covered).count() as f64 / n;

    Ok(SelectionReport {
        l_tests: config.l_tests,
        n: config.n,
        tau: config.tau,
        n_reps: config.n_reps,
        level: config.level,
        seed: config.seed,
        prior_bins: config.prior.len(),
        e_true,
        e_frequentist,
        e_posterior_mean,
        selection_bias_frequentist: e_frequentist - e_true,
        selection_bias_posterior: e_posterior_mean - e_true,
        coverage,
        mc_se_true: sd_of(true_fn, e_true) / n.sqrt(),
        mc_se_frequentist: sd_of(freq_fn, e_frequentist) / n.sqrt(),
        mc_se_posterior: sd_of(post_fn, e_posterior_mean) / n.sqrt(),
        mc_se_coverage: mc_se(coverage, config.n_reps),
    })
}
