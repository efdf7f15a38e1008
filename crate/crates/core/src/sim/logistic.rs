//! Minimal logistic regression (IRLS) and the standardized-slope bound
//! experiment.
//!
//! The standardized slope of a logistic fit, β̂ / sqrt(Var(β̂)·N), is bounded
//! by the same constant that bounds the normalized odds-ratio effect size.
//! [`simulate_logistic_bound`] generates datasets from a two-group Gaussian
//! mixture (or its Bernoulli-exposure analogue), fits each one, and records
//! the range of standardized slopes observed.

use nalgebra::{Cholesky, DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, Normal as NormalSampler};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::rng::substream;

/// Slopes past this magnitude are treated as diverging (perfect separation).
const SEPARATION_SLOPE: f64 = 30.0;

/// Maximum-likelihood logistic fit.
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticFit {
    pub intercept: f64,
    /// Slope per predictor column, in column order.
    pub slopes: Vec<f64>,
    /// Observed information (X'WX at the optimum), intercept first.
    pub information: DMatrix<f64>,
    /// Standard errors from the inverse observed information, intercept first.
    pub standard_errors: Vec<f64>,
    pub iterations: usize,
}

impl LogisticFit {
    /// Variance of the coefficient at `index` (0 = intercept) from the
    /// inverse observed information.
    pub fn variance(&self, index: usize) -> f64 {
        self.standard_errors[index].powi(2)
    }
}

fn sigmoid(eta: f64) -> f64 {
    1.0 / (1.0 + (-eta).exp())
}

/// Fits an intercept + slopes logistic regression by iteratively reweighted
/// least squares (Newton's method on the log-likelihood).
///
/// `predictors` has one row per observation and one column per predictor
/// (the intercept column is added internally); `outcomes` holds 0/1 values.
/// Convergence means the gradient's max-norm is at most `tol`.
pub fn fit_logistic(
    predictors: &DMatrix<f64>,
    outcomes: &[f64],
    max_iter: usize,
    tol: f64,
) -> Result<LogisticFit> {
    let n = predictors.nrows();
    let k = predictors.ncols() + 1;
    if n != outcomes.len() {
        return Err(Error::InvalidConfig {
            reason: format!("{} predictor rows but {} outcomes", n, outcomes.len()),
        });
    }
    if n < k {
        return Err(Error::InvalidConfig {
            reason: format!("{n} observations cannot identify {k} coefficients"),
        });
    }
    if let Some(bad) = outcomes.iter().find(|y| **y != 0.0 && **y != 1.0) {
        return Err(Error::InvalidConfig { reason: format!("outcome {bad} is not 0 or 1") });
    }

    let mut design = DMatrix::zeros(n, k);
    for i in 0..n {
        design[(i, 0)] = 1.0;
        for j in 1..k {
            design[(i, j)] = predictors[(i, j - 1)];
        }
    }
    let y = DVector::from_column_slice(outcomes);

    let mut beta = DVector::zeros(k);
    for iteration in 1..=max_iter {
        let eta = &design * &beta;
        let mu = eta.map(sigmoid);
        let gradient = design.transpose() * (&y - &mu);
        // X'WX with W = diag(mu(1-mu)), built as X' * (row-scaled X).
        let mut weighted = design.clone();
        for i in 0..n {
            let w = mu[i] * (1.0 - mu[i]);
            weighted.row_mut(i).scale_mut(w);
        }
        let information = design.transpose() * weighted;

        if gradient.amax() <= tol {
            // A gradient this flat with every observation classified to
            // within 1e-8 means the optimum is at infinity, not here.
            let perfectly_classified =
                (0..n).all(|i| if y[i] == 1.0 { mu[i] > 1.0 - 1e-8 } else { mu[i] < 1e-8 });
            if perfectly_classified {
                return Err(Error::SeparationDetected);
            }
            let covariance = Cholesky::new(information.clone())
                .ok_or(Error::SeparationDetected)?
                .inverse();
            let standard_errors = (0..k).map(|j| covariance[(j, j)].sqrt()).collect();
            return Ok(LogisticFit {
                intercept: beta[0],
                slopes: beta.iter().skip(1).copied().collect(),
                information,
                standard_errors,
                iterations: iteration - 1,
            });
        }

        let step = Cholesky::new(information.clone())
            .ok_or(Error::SeparationDetected)?
            .solve(&gradient);
        beta += step;
        if beta.iter().any(|b| b.abs() > SEPARATION_SLOPE) {
            return Err(Error::SeparationDetected);
        }
    }
    Err(Error::NoConvergence { iterations: max_iter })
}

/// Which primary predictor the generator produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PredictorKind {
    /// Outcome drawn first (probability `w`), predictor Normal(μ_outcome, s²).
    ContinuousMixture,
    /// Exposure ~ Bernoulli(½), outcome from the implied logistic model.
    Bernoulli,
}

/// Generating model for one logistic dataset: a two-group Gaussian mixture
/// whose implied regression coefficients are α = −(log((1−w)/w) + β(μ0+μ1)/2)
/// and β = (μ1−μ0)/s².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticSimConfig {
    /// Predictor mean in the outcome-0 group.
    pub mu0: f64,
    /// Predictor mean in the outcome-1 group.
    pub mu1: f64,
    /// Common within-group standard deviation.
    pub s: f64,
    /// Marginal probability of outcome 1.
    pub w: f64,
    /// Observations per dataset.
    pub n: usize,
    /// Extra standard-normal covariates unrelated to the outcome.
    pub covariate_count: usize,
    pub predictor: PredictorKind,
    pub seed: u64,
}

impl LogisticSimConfig {
    pub fn implied_beta(&self) -> f64 {
        (self.mu1 - self.mu0) / (self.s * self.s)
    }

    pub fn implied_alpha(&self) -> f64 {
        -(((1.0 - self.w) / self.w).ln() + self.implied_beta() * (self.mu0 + self.mu1) / 2.0)
    }

    fn validate(&self) -> Result<()> {
        let fail = |reason: String| Err(Error::InvalidConfig { reason });
        if !(self.s > 0.0 && self.s.is_finite()) {
            return fail(format!("s must be positive and finite, got {}", self.s));
        }
        if !(self.w > 0.0 && self.w < 1.0) {
            return fail(format!("w must lie in (0,1), got {}", self.w));
        }
        if !(self.mu0.is_finite() && self.mu1.is_finite()) {
            return fail("group means must be finite".to_string());
        }
        if self.n < 20 {
            return fail(format!("n must be at least 20, got {}", self.n));
        }
        Ok(())
    }

    /// Draws one dataset: predictor matrix (primary predictor first, then
    /// covariates) and 0/1 outcomes.
    fn generate(&self, rng: &mut impl Rng) -> (DMatrix<f64>, Vec<f64>) {
        let k = 1 + self.covariate_count;
        let mut x = DMatrix::zeros(self.n, k);
        let mut y = vec![0.0; self.n];
        let standard = NormalSampler::new(0.0, 1.0).expect("unit normal");
        match self.predictor {
            PredictorKind::ContinuousMixture => {
                for i in 0..self.n {
                    let outcome = rng.random_bool(self.w);
                    let mean = if outcome { self.mu1 } else { self.mu0 };
                    y[i] = f64::from(u8::from(outcome));
                    x[(i, 0)] = mean + self.s * standard.sample(rng);
                }
            }
            PredictorKind::Bernoulli => {
                let alpha = self.implied_alpha();
                let beta = self.implied_beta();
                for i in 0..self.n {
                    let exposed = rng.random_bool(0.5);
                    let e = f64::from(u8::from(exposed));
                    y[i] = f64::from(u8::from(rng.random_bool(sigmoid(alpha + beta * e))));
                    x[(i, 0)] = e;
                }
            }
        }
        for j in 1..k {
            for i in 0..self.n {
                x[(i, j)] = standard.sample(rng);
            }
        }
        (x, y)
    }
}

/// Range of standardized slopes β̂ / sqrt(Var(β̂)·N) observed across datasets.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogisticBoundReport {
    pub n_datasets: u64,
    pub n_fitted: u64,
    /// Datasets skipped because the fit diverged (separation) or failed to
    /// converge.
    pub n_skipped: u64,
    pub min_standardized_slope: f64,
    pub max_standardized_slope: f64,
    pub max_abs_standardized_slope: f64,
    pub seed: u64,
}

impl LogisticBoundReport {
    fn empty(seed: u64) -> Self {
        Self {
            n_datasets: 0,
            n_fitted: 0,
            n_skipped: 0,
            min_standardized_slope: f64::INFINITY,
            max_standardized_slope: f64::NEG_INFINITY,
            max_abs_standardized_slope: 0.0,
            seed,
        }
    }

    fn record(&mut self, slope: f64) {
        self.n_fitted += 1;
        self.min_standardized_slope = self.min_standardized_slope.min(slope);
        self.max_standardized_slope = self.max_standardized_slope.max(slope);
        self.max_abs_standardized_slope = self.max_abs_standardized_slope.max(slope.abs());
    }

    fn merge(&mut self, other: &LogisticBoundReport) {
        self.n_datasets += other.n_datasets;
        self.n_fitted += other.n_fitted;
        self.n_skipped += other.n_skipped;
        self.min_standardized_slope = self.min_standardized_slope.min(other.min_standardized_slope);
        self.max_standardized_slope = self.max_standardized_slope.max(other.max_standardized_slope);
        self.max_abs_standardized_slope =
            self.max_abs_standardized_slope.max(other.max_abs_standardized_slope);
    }
}

/// Fits `n_datasets` datasets drawn from `config` (dataset `d` uses
/// substream `d` of `config.seed`) and reports the standardized-slope range
/// of the primary predictor. Datasets where the fit diverges are skipped and
/// counted, not fatal.
pub fn simulate_logistic_bound(
    config: &LogisticSimConfig,
    n_datasets: u64,
) -> Result<LogisticBoundReport> {
    config.validate()?;
    let mut report = LogisticBoundReport::empty(config.seed);
    report.n_datasets = n_datasets;
    for d in 0..n_datasets {
        let mut rng = substream(config.seed, d);
        let (x, y) = config.generate(&mut rng);
        match fit_logistic(&x, &y, 60, 1e-8) {
            Ok(fit) => {
                let slope = fit.slopes[0];
                let standardized = slope / (fit.variance(1) * config.n as f64).sqrt();
                report.record(standardized);
            }
            Err(Error::SeparationDetected) | Err(Error::NoConvergence { .. }) => {
                report.n_skipped += 1;
            }
            Err(other) => return Err(other),
        }
    }
    Ok(report)
}

/// Draws `count` mixed generating configs for the bound experiment, each
/// carrying its own dataset seed. Three families, cycled in proportion
/// 2:1:1 — broad continuous mixtures, Bernoulli exposures with moderate
/// effects, and near-extremal Bernoulli exposures (balanced outcome, log OR
/// pushed toward the edge of the monotone range) that probe the upper end
/// of the standardized-slope bound. Zero to two nuisance covariates.
pub fn random_logistic_configs(seed: u64, count: usize, n: usize) -> Vec<LogisticSimConfig> {
    let mut rng = substream(seed, u64::MAX);
    let wide = NormalSampler::new(0.0, 1.5).expect("unit normal");
    (0..count)
        .map(|idx| {
            let covariate_count = rng.random_range(0..3usize);
            let dataset_seed = rng.random::<u64>();
            match idx % 4 {
                0 | 1 => LogisticSimConfig {
                    mu0: wide.sample(&mut rng),
                    mu1: wide.sample(&mut rng),
                    s: rng.random_range(0.5..2.0),
                    w: rng.random_range(0.2..0.8),
                    n,
                    covariate_count,
                    predictor: PredictorKind::ContinuousMixture,
                    seed: dataset_seed,
                },
                2 => {
                    let beta = rng.random_range(-4.0..4.0);
                    let mu0 = wide.sample(&mut rng);
                    LogisticSimConfig {
                        mu0,
                        mu1: mu0 + beta,
                        s: 1.0,
                        w: rng.random_range(0.2..0.8),
                        n,
                        covariate_count,
                        predictor: PredictorKind::Bernoulli,
                        seed: dataset_seed,
                    }
                }
                _ => {
                    // Near-extremal: log OR just inside the monotone range,
                    // group means placed so the implied intercept is -beta/2,
                    // which makes Pr(outcome|exposed) = 1 - Pr(outcome|unexposed)
                    // and pushes the standardized slope toward its supremum.
                    let beta = rng.random_range(4.0..4.79);
                    LogisticSimConfig {
                        mu0: (1.0 - beta) / 2.0,
                        mu1: (1.0 + beta) / 2.0,
                        s: 1.0,
                        w: 0.5,
                        n,
                        covariate_count,
                        predictor: PredictorKind::Bernoulli,
                        seed: dataset_seed,
                    }
                }
            }
        })
        .collect()
}

/// Runs [`simulate_logistic_bound`] with one dataset per config and merges
/// the per-config reports.
pub fn bound_experiment_over_configs(
    configs: &[LogisticSimConfig],
    seed: u64,
) -> Result<LogisticBoundReport> {
    let mut total = LogisticBoundReport::empty(seed);
    for config in configs {
        let report = simulate_logistic_bound(config, 1)?;
        total.merge(&report);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::llc_constant;

    fn fit_from_config(config: &LogisticSimConfig) -> Result<LogisticFit> {
        let mut rng = substream(config.seed, 0);
        let (x, y) = config.generate(&mut rng);
        fit_logistic(&x, &y, 60, 1e-8)
    }

    #[test]
    fn null_slope_is_within_three_standard_errors_in_most_seeds() {
        let mut hits = 0;
        let total = 200;
        for seed in 0..total {
            let config = LogisticSimConfig {
                mu0: 0.0,
                mu1: 0.0,
                s: 1.0,
                w: 0.4,
                n: 10_000,
                covariate_count: 0,
                predictor: PredictorKind::ContinuousMixture,
                seed,
            };
            let fit = fit_from_config(&config).unwrap();
            if fit.slopes[0].abs() < 3.0 * fit.standard_errors[1] {
                hits += 1;
            }
        }
        // True in ~99.7% of seeds; demand at least 97% of 200.
        assert!(hits >= 194, "only {hits}/{total} null fits inside 3 SE");
    }

    #[test]
    fn recovers_unit_slope_from_the_generating_mixture() {
        let config = LogisticSimConfig {
            mu0: 0.0,
            mu1: 1.0,
            s: 1.0,
            w: 0.5,
            n: 100_000,
            covariate_count: 0,
            predictor: PredictorKind::ContinuousMixture,
            seed: 42,
        };
        assert_eq!(config.implied_beta(), 1.0);
        let fit = fit_from_config(&config).unwrap();
        assert!((fit.slopes[0] - 1.0).abs() < 0.05, "slope {}", fit.slopes[0]);
    }

    #[test]
    fn symmetric_means_give_zero_intercept() {
        let config = LogisticSimConfig {
            mu0: -0.8,
            mu1: 0.8,
            s: 1.1,
            w: 0.5,
            n: 60_000,
            covariate_count: 0,
            predictor: PredictorKind::ContinuousMixture,
            seed: 7,
        };
        assert_eq!(config.implied_alpha(), 0.0);
        let fit = fit_from_config(&config).unwrap();
        assert!(fit.intercept.abs() < 3.0 * fit.standard_errors[0], "intercept {}", fit.intercept);
    }

    #[test]
    fn detects_perfect_separation() {
        let x = DMatrix::from_column_slice(8, 1, &[-4.0, -3.0, -2.0, -1.0, 1.0, 2.0, 3.0, 4.0]);
        let y = vec![0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0];
        match fit_logistic(&x, &y, 100, 1e-10) {
            Err(Error::SeparationDetected) | Err(Error::NoConvergence { .. }) => {}
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn rejects_non_binary_outcomes_and_shape_mismatch() {
        let x = DMatrix::from_column_slice(3, 1, &[0.0, 1.0, 2.0]);
        assert!(fit_logistic(&x, &[0.0, 0.5, 1.0], 10, 1e-6).is_err());
        assert!(fit_logistic(&x, &[0.0, 1.0], 10, 1e-6).is_err());
    }

    #[test]
    fn null_standardized_slopes_concentrate_near_zero() {
        let config = LogisticSimConfig {
            mu0: 0.3,
            mu1: 0.3,
            s: 1.0,
            w: 0.5,
            n: 2_000,
            covariate_count: 1,
            predictor: PredictorKind::ContinuousMixture,
            seed: 11,
        };
        let report = simulate_logistic_bound(&config, 40).unwrap();
        assert_eq!(report.n_fitted, 40);
        assert!(report.max_abs_standardized_slope < 0.12, "{report:?}");
    }

    #[test]
    fn near_extremal_config_approaches_the_bound() {
        // beta = 4.7 with intercept -beta/2: the population standardized
        // slope is 0.6624, a hair under the bound.
        let config = LogisticSimConfig {
            mu0: (1.0 - 4.7) / 2.0,
            mu1: (1.0 + 4.7) / 2.0,
            s: 1.0,
            w: 0.5,
            n: 4_000,
            covariate_count: 0,
            predictor: PredictorKind::Bernoulli,
            seed: 3,
        };
        let report = simulate_logistic_bound(&config, 30).unwrap();
        let llc = llc_constant();
        assert!(report.max_abs_standardized_slope < llc + 0.02, "{report:?}");
        assert!(report.max_abs_standardized_slope > 0.55, "{report:?}");
    }

    #[test]
    fn random_configs_are_deterministic_and_mixed() {
        let a = random_logistic_configs(99, 40, 2_000);
        let b = random_logistic_configs(99, 40, 2_000);
        assert_eq!(a, b);
        assert!(a.iter().any(|c| c.predictor == PredictorKind::ContinuousMixture));
        assert!(a.iter().any(|c| c.predictor == PredictorKind::Bernoulli && c.w == 0.5));
    }
}
