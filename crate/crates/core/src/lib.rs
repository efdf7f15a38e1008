//! Normalized odds-ratio effect sizes for 2×2 contingency tables.
//!
//! The standardized log odds ratio of a 2×2 table is bounded by the Laplace
//! Limit Constant (≈ 0.6627); rescaling by that constant yields an effect
//! size `γ′` that always lies in [-1, 1]. This crate provides:
//!
//! - [`effect`]: closed-form statistics for a single table — `γ′`, its
//!   asymptotic variance, the Wald statistics Z and T, Yule's 𝒴/𝒬, and the
//!   parameters at which the bound is attained.
//! - [`bayes`]: discretized approximate-posterior machinery for the
//!   noncentrality ("dress"), likelihood update, and back-transformation
//!   ("undress") steps, including sequential updating over batches.
//! - [`sim`]: Monte Carlo experiments — test size/power, selection bias
//!   (winner's curse), and an empirical check that standardized logistic
//!   slopes respect the bound.
//! - [`pipeline`]: batch ingestion of per-pair, per-year tables with
//!   exclusion handling, sequential updating per pair, and matrix reports.

pub mod bayes;
pub mod effect;
pub mod error;
pub mod jsonfmt;
pub mod llc;
pub mod pipeline;
pub mod sim;
pub mod table;

pub use effect::{
    analyze_table, gamma_of_log_or, gamma_prime, in_monotone_range, rho_approx,
    sigma_bound_analysis, sigma_hat, t_statistic, two_sided_p_chisq1, two_sided_p_normal,
    var_gamma_prime, yule_coefficients, z_statistic, z_t_ratio, BoundAnalysis, EffectEstimate,
    YuleCoefficients,
};
pub use error::{Error, Result};
pub use llc::{llc_constant, llc_maximizer};
pub use table::TwoByTwoTable;
