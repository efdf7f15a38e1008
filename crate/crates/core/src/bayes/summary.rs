//! Point and interval summaries of a discrete posterior.

use serde::Serialize;

use crate::bayes::DiscretePosterior;
use crate::error::{Error, Result};

/// Posterior mean plus two credible intervals at the requested level.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PosteriorSummary {
    pub mean: f64,
    /// Central interval [F⁻¹((1-level)/2), F⁻¹((1+level)/2)] from the
    /// discrete CDF with linear interpolation between support points.
    pub equal_tail: (f64, f64),
    /// Enclosing interval of the smallest set of highest-probability bins
    /// whose total mass reaches the level.
    pub hpd: (f64, f64),
}

/// Quantile of a discrete distribution given as (support, cumulative mass)
/// over positive-mass points, linearly interpolated between consecutive
/// support points. Clamped to the support range, so a point mass returns its
/// location for every probability.
fn quantile(support: &[f64], prob: &[f64], cum: &[f64], u: f64) -> f64 {
    debug_assert!(!support.is_empty());
    if u <= cum[0] {
        return support[0];
    }
    for k in 1..support.len() {
        if u <= cum[k] {
            let width = support[k] - support[k - 1];
            if width == 0.0 || prob[k] == 0.0 {
                return support[k];
            }
            return support[k - 1] + (u - cum[k - 1]) / prob[k] * width;
        }
    }
    *support.last().expect("support is non-empty")
}

/// Computes the posterior mean, the equal-tail interval, and the
/// highest-posterior-density interval at `level`.
///
/// The HPD set is assembled by adding bins in decreasing probability order
/// (ties broken toward the bin nearer the mean) until its mass reaches the
/// level; the reported interval encloses the selected bins.
pub fn summarize_posterior(post: &DiscretePosterior, level: f64) -> Result<PosteriorSummary> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidLevel { level });
    }
    let mean = post.mean();

    // Work on the positive-mass points only so runs of empty bins do not
    // distort the interpolation.
    let mut support = Vec::with_capacity(post.len());
    let mut prob = Vec::with_capacity(post.len());
    for (&s, &p) in post.support().iter().zip(post.probabilities()) {
        if p > 0.0 {
            support.push(s);
            prob.push(p);
        }
    }
    let mut cum = Vec::with_capacity(prob.len());
    let mut acc = 0.0;
    for &p in &prob {
        acc += p;
        cum.push(acc);
    }
    let lo = quantile(&support, &prob, &cum, (1.0 - level) / 2.0);
    let hi = quantile(&support, &prob, &cum, (1.0 + level) / 2.0);

    // Highest-probability bins until the requested mass is reached.
    let mut order: Vec<usize> = (0..prob.len()).collect();
    order.sort_by(|&a, &b| {
        prob[b]
            .partial_cmp(&prob[a])
            .expect("probabilities are finite")
            .then_with(|| {
                let da = (support[a] - mean).abs();
                let db = (support[b] - mean).abs();
                da.partial_cmp(&db).expect("support is finite")
            })
            .then_with(|| a.cmp(&b))
    });
    let mut mass = 0.0;
    let (mut hpd_lo, mut hpd_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &idx in &order {
        mass += prob[idx];
        hpd_lo = hpd_lo.min(support[idx]);
        hpd_hi = hpd_hi.max(support[idx]);
        if mass >= level - 1e-12 {
            break;
        }
    }
    Ok(PosteriorSummary { mean, equal_tail: (lo, hi), hpd: (hpd_lo, hpd_hi) })
}
