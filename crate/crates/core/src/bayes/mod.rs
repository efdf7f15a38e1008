//! Discretized approximate-Bayes posteriors for effect sizes.
//!
//! A prior over the raw effect (log odds ratio) is represented as a finite
//! mixture on a grid of bin midpoints. Inference for one observed table is a
//! three-step chain:
//!
//! 1. **dress** — map each prior support point μ to the noncentrality
//!    ξ = √N·μ/σ̂ of the test statistic, plugging in the table's σ̂;
//! 2. **update** — multiply by the likelihood of the observed statistic under
//!    each ξ and renormalize (all in log space);
//! 3. **undress** — map the support back to an interpretable scale, either
//!    the raw log odds ratio or the normalized effect γ′.
//!
//! [`sequential_update`] chains this over an ordered batch of tables,
//! re-binning onto the original grid between steps so each year's posterior
//! serves as the next year's prior.

mod io;
mod prior;
mod sequential;
mod summary;
mod update;

pub use io::{read_distribution_csv, read_prior_csv, write_posterior_csv, write_prior_csv};
pub use prior::{build_mixture_prior, normal_prior, PriorMethod, TruncNormMixtureSpec};
pub use sequential::sequential_update;
pub use summary::{summarize_posterior, PosteriorSummary};
pub use update::{
    dress, posterior_update, to_gamma_prime_scale, undress_gamma_prime, undress_log_or,
    LikelihoodDensity,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which parameter scale a distribution's support lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaleTag {
    /// Noncentrality ξ = √N·μ/σ̂ of the test statistic.
    Noncentrality,
    /// Normalized effect γ′ ∈ [-1, 1].
    GammaPrime,
    /// Raw log odds ratio.
    LogOr,
}

impl ScaleTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            ScaleTag::Noncentrality => "noncentrality",
            ScaleTag::GammaPrime => "gamma_prime",
            ScaleTag::LogOr => "log_or",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "noncentrality" => Some(ScaleTag::Noncentrality),
            "gamma_prime" => Some(ScaleTag::GammaPrime),
            "log_or" => Some(ScaleTag::LogOr),
            _ => None,
        }
    }
}

fn validated_probabilities(prob: Vec<f64>, what: &str) -> Result<Vec<f64>> {
    if prob.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(Error::InvalidSpec {
            reason: format!("{what} probabilities must be finite and nonnegative"),
        });
    }
    let total: f64 = prob.iter().sum();
    if total <= 0.0 {
        return Err(Error::InvalidSpec { reason: format!("{what} probabilities sum to zero") });
    }
    Ok(prob.into_iter().map(|p| p / total).collect())
}

/// A prior over the raw effect scale: bin midpoints μ₁ < … < μ_B with
/// probabilities that sum to one (normalized on construction).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscretePrior {
    bin_mid: Vec<f64>,
    bin_prob: Vec<f64>,
}

impl DiscretePrior {
    /// Builds a prior from midpoints and weights; weights are normalized to
    /// sum to one. Requires at least two strictly increasing midpoints.
    pub fn new(bin_mid: Vec<f64>, bin_prob: Vec<f64>) -> Result<Self> {
        if bin_mid.len() < 2 {
            return Err(Error::InvalidSpec { reason: "prior needs at least two bins".to_string() });
        }
        if bin_mid.len() != bin_prob.len() {
            return Err(Error::InvalidSpec {
                reason: "prior support and probability lengths differ".to_string(),
            });
        }
        if bin_mid.iter().any(|m| !m.is_finite()) {
            return Err(Error::InvalidSpec { reason: "prior support must be finite".to_string() });
        }
        if bin_mid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSpec {
                reason: "prior support must be strictly increasing".to_string(),
            });
        }
        let bin_prob = validated_probabilities(bin_prob, "prior")?;
        Ok(Self { bin_mid, bin_prob })
    }

    /// Bin midpoints on the raw effect scale.
    pub fn support(&self) -> &[f64] {
        &self.bin_mid
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.bin_prob
    }

    pub fn len(&self) -> usize {
        self.bin_mid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bin_mid.is_empty()
    }

    /// Prior mean Σ μ_i·Pr(μ_i).
    pub fn mean(&self) -> f64 {
        self.bin_mid.iter().zip(&self.bin_prob).map(|(m, p)| m * p).sum()
    }
}

/// A prior mapped onto the noncentrality scale of a specific table:
/// ξ_i = √n·μ_i/σ̂ with the (n, σ̂) it was dressed with, kept so the
/// posterior can be undressed again.
#[derive(Debug, Clone, PartialEq)]
pub struct DressedPrior {
    xi: Vec<f64>,
    bin_prob: Vec<f64>,
    n: f64,
    sigma_hat: f64,
}

impl DressedPrior {
    pub(crate) fn from_parts(xi: Vec<f64>, bin_prob: Vec<f64>, n: f64, sigma_hat: f64) -> Self {
        Self { xi, bin_prob, n, sigma_hat }
    }

    /// Noncentrality support points.
    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.bin_prob
    }

    /// Sample size used for dressing.
    pub fn n(&self) -> f64 {
        self.n
    }

    /// Plug-in scale used for dressing.
    pub fn sigma_hat(&self) -> f64 {
        self.sigma_hat
    }
}

/// A posterior distribution: support points (on the scale named by
/// `scale_tag`) with normalized probabilities. Support ordering is inherited
/// from the prior; ties are allowed because an undressing map may collapse
/// support points (e.g. zero variance).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscretePosterior {
    support: Vec<f64>,
    prob: Vec<f64>,
    scale_tag: ScaleTag,
}

impl DiscretePosterior {
    /// Builds a posterior from already-ordered support (non-decreasing) and
    /// weights; weights are normalized to sum to one.
    pub fn new(support: Vec<f64>, prob: Vec<f64>, scale_tag: ScaleTag) -> Result<Self> {
        if support.is_empty() || support.len() != prob.len() {
            return Err(Error::InvalidSpec {
                reason: "posterior support and probability lengths differ or are empty".to_string(),
            });
        }
        if support.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidSpec {
                reason: "posterior support must be finite".to_string(),
            });
        }
        if support.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidSpec {
                reason: "posterior support must be non-decreasing".to_string(),
            });
        }
        let prob = validated_probabilities(prob, "posterior")?;
        Ok(Self { support, prob, scale_tag })
    }

    /// Internal constructor for support maps that must leave already
    /// normalized probabilities bit-identical (no renormalization pass).
    pub(crate) fn from_normalized(support: Vec<f64>, prob: Vec<f64>, scale_tag: ScaleTag) -> Self {
        debug_assert!(support.windows(2).all(|w| w[0] <= w[1]));
        debug_assert!((prob.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        Self { support, prob, scale_tag }
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.prob
    }

    pub fn scale_tag(&self) -> ScaleTag {
        self.scale_tag
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Posterior mean Σ support_i·prob_i.
    pub fn mean(&self) -> f64 {
        self.support.iter().zip(&self.prob).map(|(s, p)| s * p).sum()
    }
}
