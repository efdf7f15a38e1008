//! The dress → update → undress chain for a single observed statistic.

use crate::bayes::{DiscretePosterior, DiscretePrior, DressedPrior, ScaleTag};
use crate::effect;
use crate::error::{Error, Result};

/// Likelihood family used for the posterior update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LikelihoodDensity {
    /// The signed statistic T ~ Normal(ξ, 1). The default: a signed
    /// statistic keeps the direction of the effect.
    NormalNoncentral,
    /// The squared statistic T² ~ noncentral χ²₁ with noncentrality ξ².
    /// Direction-blind; provided for squared-statistic workflows.
    Chisq1Noncentral,
}

/// Maps a raw-scale prior onto the noncentrality scale of one table:
/// ξ_i = √n·μ_i/σ̂. Probabilities are untouched.
pub fn dress(prior: &DiscretePrior, n: f64, sigma_hat: f64) -> DressedPrior {
    assert!(n > 0.0 && sigma_hat > 0.0, "dress requires n > 0 and sigma_hat > 0");
    let factor = n.sqrt() / sigma_hat;
    let xi = prior.support().iter().map(|mu| factor * mu).collect();
    DressedPrior::from_parts(xi, prior.probabilities().to_vec(), n, sigma_hat)
}

/// Log-likelihood of the observed statistic under noncentrality ξ, up to an
/// additive constant that does not depend on ξ.
fn log_likelihood(t: f64, xi: f64, density: LikelihoodDensity) -> f64 {
    match density {
        LikelihoodDensity::NormalNoncentral => -0.5 * (t - xi) * (t - xi),
        LikelihoodDensity::Chisq1Noncentral => {
            // Density of T² at x = t² with noncentrality λ = ξ²:
            // [φ(√x − √λ) + φ(√x + √λ)] / (2√x); the 1/(2√x) factor and the
            // normal normalizing constant drop out of the posterior.
            let sx = t.abs();
            let sl = xi.abs();
            let a = -0.5 * (sx - sl) * (sx - sl);
            let b = -0.5 * (sx + sl) * (sx + sl);
            // a >= b always, so this log-sum-exp cannot overflow.
            a + (b - a).exp().ln_1p()
        }
    }
}

/// Bayes update on the noncentrality grid:
/// Pr(ξ_j | t) ∝ Pr(μ_j)·f(t | ξ_j), accumulated in log space so extreme
/// statistics cannot underflow every term at once.
pub fn posterior_update(
    dressed: &DressedPrior,
    t_observed: f64,
    density: LikelihoodDensity,
) -> Result<DiscretePosterior> {
    let log_weights: Vec<f64> = dressed
        .xi()
        .iter()
        .zip(dressed.probabilities())
        .map(|(&xi, &p)| {
            if p > 0.0 {
                p.ln() + log_likelihood(t_observed, xi, density)
            } else {
                f64::NEG_INFINITY
            }
        })
        .collect();
    let max = log_weights.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return Err(Error::AllZeroLikelihood { index: None });
    }
    let mut weights: Vec<f64> = log_weights.into_iter().map(|lw| (lw - max).exp()).collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    Ok(DiscretePosterior::from_normalized(
        dressed.xi().to_vec(),
        weights,
        ScaleTag::Noncentrality,
    ))
}

fn require_scale(post: &DiscretePosterior, expected: ScaleTag) -> Result<()> {
    if post.scale_tag() != expected {
        return Err(Error::ScaleMismatch {
            expected: expected.as_str(),
            found: post.scale_tag().as_str(),
        });
    }
    Ok(())
}

/// Undresses a noncentrality posterior onto the γ′ scale by the linear map
/// γ′_i = ξ_i·√Var(γ̂′)/√n, the plug-in delta-method scaling. Probabilities
/// are untouched; with zero variance the support collapses to a point mass
/// at zero.
pub fn undress_gamma_prime(
    post: &DiscretePosterior,
    n: f64,
    var_gamma_prime_hat: f64,
) -> Result<DiscretePosterior> {
    assert!(n > 0.0, "undress requires n > 0");
    assert!(var_gamma_prime_hat >= 0.0, "variance must be nonnegative");
    require_scale(post, ScaleTag::Noncentrality)?;
    let factor = var_gamma_prime_hat.sqrt() / n.sqrt();
    let support = post.support().iter().map(|xi| factor * xi).collect();
    Ok(DiscretePosterior::from_normalized(
        support,
        post.probabilities().to_vec(),
        ScaleTag::GammaPrime,
    ))
}

/// Undresses a noncentrality posterior back onto the log-odds-ratio scale by
/// μ_i = ξ_i·σ̂/√n — the exact inverse of [`dress`] with the same (n, σ̂).
pub fn undress_log_or(post: &DiscretePosterior, n: f64, sigma_hat: f64) -> Result<DiscretePosterior> {
    assert!(n > 0.0 && sigma_hat > 0.0, "undress requires n > 0 and sigma_hat > 0");
    require_scale(post, ScaleTag::Noncentrality)?;
    let factor = sigma_hat / n.sqrt();
    let support = post.support().iter().map(|xi| factor * xi).collect();
    Ok(DiscretePosterior::from_normalized(
        support,
        post.probabilities().to_vec(),
        ScaleTag::LogOr,
    ))
}

/// Maps a log-odds-ratio posterior onto the γ′ scale by applying the exact
/// normalization pointwise to each support point. Probabilities are
/// untouched, and the resulting support always lies in [-1, 1]. Requires the
/// support to stay inside the monotone range so ordering is preserved.
pub fn to_gamma_prime_scale(post: &DiscretePosterior) -> Result<DiscretePosterior> {
    require_scale(post, ScaleTag::LogOr)?;
    if let Some(bad) = post.support().iter().find(|x| !effect::in_monotone_range(**x)) {
        return Err(Error::OutOfMonotoneRange { log_or: *bad, limit: crate::llc_maximizer() });
    }
    let support = post.support().iter().map(|x| effect::gamma_prime(*x)).collect();
    Ok(DiscretePosterior::from_normalized(
        support,
        post.probabilities().to_vec(),
        ScaleTag::GammaPrime,
    ))
}
