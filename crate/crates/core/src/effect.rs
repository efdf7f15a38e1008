//! Closed-form effect sizes and test statistics for a single 2×2 table.
//!
//! The raw effect scale is the log odds ratio `x`. Standardizing by the
//! plug-in scale [`sigma_hat`] gives an effect `γ = x/σ` that is bounded by
//! the constant in [`crate::llc`]; dividing by that constant normalizes it to
//! `γ′ ∈ [-1, 1]`. The Wald statistic for `γ′ = 0` is [`t_statistic`]; the
//! classical Wald statistic for `x = 0` is [`z_statistic`]. The two differ by
//! the deterministic factor [`z_t_ratio`].

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::llc::{llc_constant, llc_maximizer};
use crate::table::TwoByTwoTable;

/// Yule's two classical transformations of the odds ratio and their
/// delta-method variances.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct YuleCoefficients {
    /// Colligation coefficient 𝒴 = (√OR − 1)/(√OR + 1) = tanh(log(OR)/4).
    pub y: f64,
    /// Association coefficient 𝒬 = (OR − 1)/(OR + 1) = tanh(log(OR)/2).
    pub q: f64,
    /// Var(𝒴̂) = (1 − 𝒴²)²/16 · σ̂²/N.
    pub var_y: f64,
    /// Var(𝒬̂) = (1 − 𝒬²)²/4 · σ̂²/N.
    pub var_q: f64,
}

/// Every per-table statistic produced by [`analyze_table`].
///
/// `t` and its p-value are `None` when |log OR| reaches the edge of the
/// monotone range (the Wald denominator hits zero there); the evidence
/// against the null is overwhelming in that regime, but the statistic itself
/// is undefined.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EffectEstimate {
    /// Sample log odds ratio x̂.
    pub log_or: f64,
    /// Plug-in standard deviation σ̂ of the exposure indicator contrast.
    pub sigma_hat: f64,
    /// Standardized effect δ̂ = x̂/σ̂.
    pub delta: f64,
    /// Classical Wald statistic Z = √N·x̂/σ̂.
    pub z: f64,
    /// Bounded standardized effect γ̂ = x̂/(4·cosh(x̂/4)).
    pub gamma: f64,
    /// Normalized effect γ̂′ = γ̂ / bound ∈ [-1, 1].
    pub gamma_prime: f64,
    /// Asymptotic variance of γ̂′ (before the 1/N factor).
    pub var_gamma_prime: f64,
    /// Wald statistic for γ′ = 0; `None` outside the monotone range.
    pub t: Option<f64>,
    /// Two-sided normal p-value for `z`.
    pub p_two_sided_z: f64,
    /// Two-sided normal p-value for `t`; `None` when `t` is.
    pub p_two_sided_t: Option<f64>,
    /// Yule's 𝒴.
    pub yule_y: f64,
    /// Yule's 𝒬.
    pub yule_q: f64,
    /// Var(𝒴̂).
    pub var_yule_y: f64,
    /// Var(𝒬̂).
    pub var_yule_q: f64,
}

/// The parameters at which the standardizing σ is smallest for a given odds
/// ratio, i.e. where the standardized effect is largest.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundAnalysis {
    /// The odds ratio analyzed.
    pub or: f64,
    /// Minimizing marginal exposure probability (always 1/2).
    pub v_m: f64,
    /// Minimizing case proportion (always 1/2).
    pub w_m: f64,
    /// Disease probability given exposure at the minimizer, √OR/(1 + √OR).
    pub pr_d_given_e: f64,
    /// Disease probability given no exposure, 1/(1 + √OR).
    pub pr_d_given_not_e: f64,
    /// Relative risk at the minimizer, √OR.
    pub rr: f64,
    /// Smallest attainable σ: 2·√(2 + (1 + OR)/√OR).
    pub sigma_min: f64,
    /// Standardized effect at the minimizer, log(OR)/σ_min.
    pub gamma_at_bound: f64,
}

/// Bounded standardized log odds ratio, γ(x) = x / (4·cosh(x/4)).
///
/// Odd in `x` and identical to log(OR)/σ_min of [`sigma_bound_analysis`].
pub fn gamma_of_log_or(x: f64) -> f64 {
    x / (4.0 * (x / 4.0).cosh())
}

/// Normalized effect size γ′(x) = γ(x) / bound, lying in [-1, 1].
///
/// Strictly increasing only for |x| < [`llc_maximizer`]; use
/// [`in_monotone_range`] to detect the non-monotone regime.
pub fn gamma_prime(x: f64) -> f64 {
    gamma_of_log_or(x) / llc_constant()
}

/// Whether |x| is inside the open interval on which γ′ is strictly
/// increasing in the log odds ratio.
pub fn in_monotone_range(x: f64) -> bool {
    x.abs() < llc_maximizer()
}

/// Plug-in standard deviation of Eq.-style form
/// σ̂² = (1/ŵ)/(p̂(1−p̂)) + (1/(1−ŵ))/(q̂(1−q̂)).
///
/// Algebraically, σ̂/√N = √(Σ 1/n_ij), the familiar standard error of the
/// sample log odds ratio.
pub fn sigma_hat(table: &TwoByTwoTable) -> Result<f64> {
    if table.is_degenerate() {
        return Err(table.degenerate_error());
    }
    let (p, q, w) = (table.p_hat(), table.q_hat(), table.w_hat());
    let var = (1.0 / w) / (p * (1.0 - p)) + (1.0 / (1.0 - w)) / (q * (1.0 - q));
    Ok(var.sqrt())
}

/// Classical Wald statistic Z = √n · x / σ̂ for the log odds ratio.
pub fn z_statistic(log_or: f64, sigma_hat: f64, n: f64) -> f64 {
    assert!(sigma_hat > 0.0 && n > 0.0, "z_statistic requires sigma_hat > 0 and n > 0");
    n.sqrt() * log_or / sigma_hat
}

/// Asymptotic variance of γ̂′ (delta method), before the 1/N factor:
/// σ̂² · ( sech(x/4)·(4 − x·tanh(x/4)) / (16·LLC) )².
///
/// Zero exactly where the bound is attained, |x| = [`llc_maximizer`].
pub fn var_gamma_prime(log_or: f64, sigma_hat: f64) -> f64 {
    assert!(sigma_hat > 0.0, "var_gamma_prime requires sigma_hat > 0");
    let x = log_or;
    let sech = 1.0 / (x / 4.0).cosh();
    let factor = sech * (4.0 - x * (x / 4.0).tanh()) / (16.0 * llc_constant());
    (sigma_hat * factor).powi(2)
}

/// Wald statistic for H₀: γ′ = 0,
/// T = √n · 4x / ( σ̂ · (4 − x·tanh(x/4)) ) = √n·γ̂′/√Var(γ̂′).
///
/// Fails with [`Error::OutOfMonotoneRange`] once the denominator is no
/// longer positive (|x| ≥ [`llc_maximizer`]).
pub fn t_statistic(log_or: f64, sigma_hat: f64, n: f64) -> Result<f64> {
    assert!(sigma_hat > 0.0 && n > 0.0, "t_statistic requires sigma_hat > 0 and n > 0");
    if !in_monotone_range(log_or) {
        return Err(Error::OutOfMonotoneRange { log_or, limit: llc_maximizer() });
    }
    let x = log_or;
    Ok(n.sqrt() * 4.0 * x / (sigma_hat * (4.0 - x * (x / 4.0).tanh())))
}

/// Deterministic ratio Z/T = (4 − x·tanh(x/4))/4.
///
/// Even in `x`, equal to 1 at the null, and in (0, 1] on the monotone range,
/// which is why T never rejects less often than Z.
pub fn z_t_ratio(log_or: f64) -> f64 {
    (4.0 - log_or * (log_or / 4.0).tanh()) / 4.0
}

/// Yule's 𝒴 and 𝒬 with their delta-method variances.
pub fn yule_coefficients(table: &TwoByTwoTable) -> Result<YuleCoefficients> {
    let sigma = sigma_hat(table)?;
    let x = table.log_or();
    let y = (x / 4.0).tanh();
    let q = (x / 2.0).tanh();
    let var_log_or = sigma * sigma / table.n();
    Ok(YuleCoefficients {
        y,
        q,
        var_y: (1.0 - y * y).powi(2) / 16.0 * var_log_or,
        var_q: (1.0 - q * q).powi(2) / 4.0 * var_log_or,
    })
}

/// Closed-form minimizer of the standardizing σ at a fixed odds ratio.
pub fn sigma_bound_analysis(or: f64) -> BoundAnalysis {
    assert!(or > 0.0 && or.is_finite(), "sigma_bound_analysis requires a finite odds ratio > 0");
    let root = or.sqrt();
    let sigma_min = 2.0 * (2.0 + (1.0 + or) / root).sqrt();
    BoundAnalysis {
        or,
        v_m: 0.5,
        w_m: 0.5,
        pr_d_given_e: root / (1.0 + root),
        pr_d_given_not_e: 1.0 / (1.0 + root),
        rr: root,
        sigma_min,
        gamma_at_bound: or.ln() / sigma_min,
    }
}

/// First-order approximation to the φ (point) correlation between the
/// exposure and disease indicators: ln(OR)·√(v(1−v))·√(w(1−w)).
pub fn rho_approx(log_or: f64, v: f64, w: f64) -> f64 {
    assert!(
        v > 0.0 && v < 1.0 && w > 0.0 && w < 1.0,
        "rho_approx requires v and w strictly inside (0,1)"
    );
    log_or * (v * (1.0 - v)).sqrt() * (w * (1.0 - w)).sqrt()
}

/// Two-sided p-value 2·(1 − Φ(|stat|)) from the standard normal, computed
/// as erfc(|stat|/√2) for full double-precision accuracy in the tails.
pub fn two_sided_p_normal(stat: f64) -> f64 {
    libm::erfc(stat.abs() / std::f64::consts::SQRT_2).min(1.0)
}

/// Two-sided p-value for a squared normal statistic via the χ²₁ tail,
/// Pr(χ²₁ > stat²). Agrees with [`two_sided_p_normal`] to machine accuracy.
pub fn two_sided_p_chisq1(stat: f64) -> f64 {
    let chi = ChiSquared::new(1.0).expect("one degree of freedom is valid");
    chi.sf(stat * stat)
}

/// Computes every statistic for one table. With `correct` set, the
/// half-count correction is applied first; otherwise a table with any zero
/// cell fails with [`Error::DegenerateTable`].
pub fn analyze_table(table: &TwoByTwoTable, correct: bool) -> Result<EffectEstimate> {
    let table = if correct { table.haldane_correct() } else { *table };
    let sigma = sigma_hat(&table)?;
    let x = table.log_or();
    let n = table.n();
    let z = z_statistic(x, sigma, n);
    let t = t_statistic(x, sigma, n).ok();
    let yule = yule_coefficients(&table)?;
    Ok(EffectEstimate {
        log_or: x,
        sigma_hat: sigma,
        delta: x / sigma,
        z,
        gamma: gamma_of_log_or(x),
        gamma_prime: gamma_prime(x),
        var_gamma_prime: var_gamma_prime(x, sigma),
        t,
        p_two_sided_z: two_sided_p_normal(z),
        p_two_sided_t: t.map(two_sided_p_normal),
        yule_y: yule.y,
        yule_q: yule.q,
        var_yule_y: yule.var_y,
        var_yule_q: yule.var_q,
    })
}
