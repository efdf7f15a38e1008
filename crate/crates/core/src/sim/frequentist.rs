//! Monte Carlo size and power of the Z and T tests.

use rand::Rng;
use rand_distr::{Distribution, Normal as NormalSampler};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::effect::{sigma_hat, t_statistic, z_statistic};
use crate::error::{Error, Result};
use crate::sim::rng::substream;
use crate::sim::sample::sample_table;

/// How the true log odds ratio is chosen each replicate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EffectMode {
    /// The same log odds ratio every replicate (zero for size runs).
    FixedLogOr(f64),
    /// log OR ~ Normal(0, tau²) fresh each replicate.
    RandomLogOr { tau: f64 },
}

/// How the control-group exposure probability is chosen each replicate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NuisanceMode {
    /// q ~ Uniform(lo, hi).
    UniformQ { lo: f64, hi: f64 },
}

impl Default for NuisanceMode {
    fn default() -> Self {
        NuisanceMode::UniformQ { lo: 0.05, hi: 0.95 }
    }
}

/// Scenario description for one size/power cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequentistSimConfig {
    /// Cases per table.
    pub n_cases: u64,
    /// Controls per case: controls = round(ratio · n_cases).
    pub case_control_ratio: f64,
    pub effect_mode: EffectMode,
    pub nuisance_mode: NuisanceMode,
    pub n_reps: u64,
    /// Two-sided test level.
    pub alpha: f64,
    pub seed: u64,
}

impl FrequentistSimConfig {
    /// A standard cell: 1:1 case-control ratio, q ~ Uniform(0.05, 0.95),
    /// α = 0.05.
    pub fn standard(n_cases: u64, effect_mode: EffectMode, n_reps: u64, seed: u64) -> Self {
        Self {
            n_cases,
            case_control_ratio: 1.0,
            effect_mode,
            nuisance_mode: NuisanceMode::default(),
            n_reps,
            alpha: 0.05,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        let fail = |reason: String| Err(Error::InvalidConfig { reason });
        if self.n_cases < 2 {
            return fail(format!("n_cases must be at least 2, got {}", self.n_cases));
        }
        if self.n_reps < 1 {
            return fail("n_reps must be at least 1".to_string());
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return fail(format!("alpha must lie in (0,1), got {}", self.alpha));
        }
        if self.case_control_ratio <= 0.0 {
            return fail(format!("ratio must be positive, got {}", self.case_control_ratio));
        }
        if let EffectMode::RandomLogOr { tau } = self.effect_mode {
            if tau < 0.0 {
                return fail(format!("tau must be nonnegative, got {tau}"));
            }
        }
        let NuisanceMode::UniformQ { lo, hi } = self.nuisance_mode;
        if !(lo > 0.0 && hi < 1.0 && lo < hi) {
            return fail(format!("q range ({lo}, {hi}) must satisfy 0 < lo < hi < 1"));
        }
        Ok(())
    }
}

/// Rejection rates for both tests over one scenario cell, with Monte Carlo
/// standard errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrequentistReport {
    pub config: FrequentistSimConfig,
    pub rejections_z: u64,
    pub rejections_t: u64,
    /// Replicates whose corrected |log OR| reached the edge of the monotone
    /// range; T is undefined there and counted as a rejection (the evidence
    /// is overwhelming, but the statistic saturates).
    pub saturated_t: u64,
    pub rate_z: f64,
    pub rate_t: f64,
    pub mc_se_z: f64,
    pub mc_se_t: f64,
}

pub(crate) fn mc_se(rate: f64, n_reps: u64) -> f64 {
    (rate * (1.0 - rate) / n_reps as f64).sqrt()
}

/// Runs one scenario cell. Replicates are independent, each on its own
/// deterministic substream of `seed`, and each analysis applies the
/// half-count correction before computing Z and T (small tables frequently
/// carry zero cells otherwise).
pub fn simulate_frequentist(config: &FrequentistSimConfig) -> Result<FrequentistReport> {
    config.validate()?;
    let critical = Normal::new(0.0, 1.0)
        .expect("standard normal parameters are valid")
        .inverse_cdf(1.0 - config.alpha / 2.0);
    let NuisanceMode::UniformQ { lo, hi } = config.nuisance_mode;
    let effect_sampler = match config.effect_mode {
        EffectMode::RandomLogOr { tau } if tau > 0.0 => {
            Some(NormalSampler::new(0.0, tau).expect("positive tau"))
        }
        _ => None,
    };

    let (rejections_z, rejections_t, saturated_t) = (0..config.n_reps)
        .into_par_iter()
        .map(|rep| -> Result<(u64, u64, u64)> {
            let mut rng = substream(config.seed, rep);
            let x_true = match (config.effect_mode, &effect_sampler) {
                (EffectMode::FixedLogOr(x), _) => x,
                (_, Some(dist)) => dist.sample(&mut rng),
                (EffectMode::RandomLogOr { .. }, None) => 0.0,
            };
            let q = rng.random_range(lo..hi);
            let table =
                sample_table(x_true, config.n_cases, config.case_control_ratio, q, &mut rng)?
                    .haldane_correct();
            let sigma = sigma_hat(&table)?;
            let x = table.log_or();
            let z = z_statistic(x, sigma, table.n());
            let reject_z = z.abs() > critical;
            let (reject_t, saturated) = match t_statistic(x, sigma, table.n()) {
                Ok(t) => (t.abs() > critical, false),
                Err(Error::OutOfMonotoneRange { .. }) => (true, true),
                Err(other) => return Err(other),
            };
            Ok((u64::from(reject_z), u64::from(reject_t), u64::from(saturated)))
        })
        .try_reduce(|| (0, 0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1, a.2 + b.2)))?;

    let rate_z = rejections_z as f64 / config.n_reps as f64;
    let rate_t = rejections_t as f64 / config.n_reps as f64;
    Ok(FrequentistReport {
        config: *config,
        rejections_z,
        rejections_t,
        saturated_t,
        rate_z,
        rate_t,
        mc_se_z: mc_se(rate_z, config.n_reps),
        mc_se_t: mc_se(rate_t, config.n_reps),
    })
}
