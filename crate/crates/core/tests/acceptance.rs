//! Workspace acceptance suite: one test per acceptance target, each ending
//! in a `PASS <name>: ...` line with the measured quantities (visible under
//! `cargo test --test acceptance -- --nocapture`). The Monte Carlo targets
//! pin seed 20260823 so every printed number is reproducible bit-for-bit.

use std::collections::BTreeSet;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{Continuous, Normal};

use gammaprime::bayes::{
    dress, normal_prior, posterior_update, DiscretePrior, LikelihoodDensity, TruncNormMixtureSpec,
};
use gammaprime::pipeline::{
    emit_report, exclusion_set, load_pair_tables, run_pipeline, PairFlag, PipelineOptions,
    ReportFormat,
};
use gammaprime::sim::{
    bound_experiment_over_configs, random_logistic_configs, simulate_frequentist,
    simulate_selection, EffectMode, FrequentistSimConfig, SelectionSimConfig,
};
use gammaprime::{
    gamma_of_log_or, in_monotone_range, llc_constant, llc_maximizer, sigma_bound_analysis,
    sigma_hat, t_statistic, var_gamma_prime, yule_coefficients, z_statistic, z_t_ratio,
    TwoByTwoTable,
};

/// Seed for every stochastic acceptance target, fixed before the suite was
/// first run.
const SEED: u64 = 20260823;

fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0xacce_0000 + stream)
}

fn random_table(rng: &mut ChaCha8Rng) -> TwoByTwoTable {
    TwoByTwoTable::from_counts(
        rng.random_range(1..3000),
        rng.random_range(1..3000),
        rng.random_range(1..3000),
        rng.random_range(1..3000),
    )
    .unwrap()
}

#[test]
fn criterion_1_bound_constants() {
    let start = Instant::now();
    let llc = llc_constant();
    let maximizer = llc_maximizer();
    let elapsed = start.elapsed();

    assert!((llc - 0.662743).abs() < 1e-6, "bound constant {llc}");
    assert!((maximizer - 4.79868).abs() < 1e-4, "maximizer {maximizer}");
    assert!(elapsed < Duration::from_millis(1), "solve took {elapsed:?}");
    println!("PASS constants: bound={llc:.15}, maximizer={maximizer:.15}, solved in {elapsed:?}");
}

#[test]
fn criterion_2_closed_form_cross_checks() {
    let start = Instant::now();

    // Two algebraic routes to the standardized effect agree: the hyperbolic
    // form x/(4·cosh(x/4)) and x divided by the closed-form minimal sigma
    // 2·sqrt(2 + (OR + 1)/sqrt(OR)) at OR = e^x.
    let mut r = rng(1);
    for _ in 0..100_000 {
        let x: f64 = r.random_range(-12.0..12.0);
        let or = x.exp();
        let radical = x / (2.0 * (2.0 + (or + 1.0) / or.sqrt()).sqrt());
        let hyperbolic = gamma_of_log_or(x);
        assert!((hyperbolic - radical).abs() < 1e-12, "x={x}");
    }

    // T equals Z divided by the shrinkage ratio wherever T is defined.
    let mut r = rng(2);
    let mut checked = 0;
    for _ in 0..20_000 {
        let table = random_table(&mut r);
        let x = table.log_or();
        if !in_monotone_range(x) {
            continue;
        }
        let sigma = sigma_hat(&table).unwrap();
        let z = z_statistic(x, sigma, table.n());
        let t = t_statistic(x, sigma, table.n()).unwrap();
        assert!((t * z_t_ratio(x) - z).abs() <= 1e-10 * z.abs().max(1.0), "x={x}");
        assert!(t.abs() + 1e-12 >= z.abs());
        checked += 1;
    }
    assert!(checked > 19_000, "only {checked} tables were inside the monotone range");

    // Yule coefficient identities: the tanh closed forms equal the count
    // forms, and the two coefficients satisfy Q = 2Y/(1 + Y^2).
    let mut r = rng(3);
    for _ in 0..20_000 {
        let table = random_table(&mut r);
        let coeffs = yule_coefficients(&table).unwrap();
        let (a, b, c, d) = (table.n11(), table.n12(), table.n21(), table.n22());
        let root = (a * d).sqrt();
        let cross = (b * c).sqrt();
        assert!((coeffs.y - (root - cross) / (root + cross)).abs() < 1e-10);
        assert!((coeffs.q - (a * d - b * c) / (a * d + b * c)).abs() < 1e-10);
        assert!((coeffs.q - 2.0 * coeffs.y / (1.0 + coeffs.y * coeffs.y)).abs() < 1e-10);
    }

    // The delta-method variance factor matches a central finite difference
    // of the normalized-effect map.
    let mut r = rng(4);
    let mut checked_var = 0;
    for _ in 0..20_000 {
        let table = random_table(&mut r);
        let x = table.log_or();
        if x.abs() > 4.0 {
            continue;
        }
        let sigma = sigma_hat(&table).unwrap();
        let h = 1e-4;
        let slope = (gamma_of_log_or(x + h) - gamma_of_log_or(x - h)) / (2.0 * h) / llc_constant();
        let numeric = sigma * sigma * slope * slope;
        let analytic = var_gamma_prime(x, sigma);
        assert!(
            (analytic - numeric).abs() <= 1e-5 * numeric.abs(),
            "x={x}: {analytic} vs {numeric}"
        );
        checked_var += 1;
    }
    assert!(checked_var > 15_000);

    // Direct numeric minimization of the per-observation variance over the
    // nuisance parameters recovers the closed-form minimal sigma.
    for or in [2.0, 10.0, 121.0] {
        let closed = sigma_bound_analysis(or).sigma_min;
        let numeric = sigma_min_numeric(or);
        assert!((closed - numeric).abs() < 1e-6, "or={or}: {closed} vs {numeric}");
    }

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "property sweep took {elapsed:?}");
    println!("PASS closed forms: all identity sweeps agreed in {elapsed:?}");
}

fn sigma_sq_at(or: f64, q: f64, w: f64) -> f64 {
    let p = q * or / (1.0 + q * (or - 1.0));
    1.0 / (w * p * (1.0 - p)) + 1.0 / ((1.0 - w) * q * (1.0 - q))
}

/// Minimizes sigma over (q, w): w in closed form per q, q by iteratively
/// refined grid search.
fn sigma_min_numeric(or: f64) -> f64 {
    let best_over_w = |q: f64| {
        let p = q * or / (1.0 + q * (or - 1.0));
        let a = 1.0 / (p * (1.0 - p));
        let b = 1.0 / (q * (1.0 - q));
        let w = a.sqrt() / (a.sqrt() + b.sqrt());
        sigma_sq_at(or, q, w)
    };
    let (mut lo, mut hi) = (1e-4, 1.0 - 1e-4);
    let mut best_q = 0.5;
    for _ in 0..6 {
        let mut best = f64::INFINITY;
        let points = 2001;
        for k in 0..points {
            let q = lo + (hi - lo) * k as f64 / (points - 1) as f64;
            let value = best_over_w(q);
            if value < best {
                best = value;
                best_q = q;
            }
        }
        let step = (hi - lo) / (points - 1) as f64;
        lo = (best_q - 2.0 * step).max(1e-6);
        hi = (best_q + 2.0 * step).min(1.0 - 1e-6);
    }
    best_over_w(best_q).sqrt()
}

#[test]
fn criterion_3_null_size_calibration() {
    let start = Instant::now();
    // The tightest margin in this check is the T size at 25 cases: its
    // long-run value is 0.05462 (measured at 10^7 replicates, mc se
    // 0.00007) against a window edge of 0.055, a gap of ~0.0004. The
    // replicate count is set so the Monte Carlo error (~0.00016) stays
    // well under that gap; at 2e5 replicates the noise (~0.0005) exceeds
    // the gap and the verdict would reflect the draw rather than the size.
    let n_reps = 2_000_000;
    let mut reports = Vec::new();
    for n_cases in [25u64, 100, 1000] {
        let config =
            FrequentistSimConfig::standard(n_cases, EffectMode::FixedLogOr(0.0), n_reps, SEED);
        let report = simulate_frequentist(&config).unwrap();
        println!(
            "  null n={n_cases}: size_z={:.5} size_t={:.5} (mc se {:.5})",
            report.rate_z, report.rate_t, report.mc_se_t
        );
        reports.push((n_cases, report));
    }
    for (n_cases, report) in &reports {
        assert!(
            (report.rate_t - 0.05).abs() <= 0.005,
            "n_cases={n_cases}: T size {:.5} off 0.05 by more than 0.005 (mc se {:.5})",
            report.rate_t,
            report.mc_se_t
        );
    }
    let smallest = &reports[0].1;
    assert!(
        smallest.rate_z <= smallest.rate_t,
        "Z size {:.5} above T size {:.5} at the smallest n",
        smallest.rate_z,
        smallest.rate_t
    );
    assert!(smallest.rate_z < 0.04, "Z size {:.5} not conservative at n=25", smallest.rate_z);

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(120), "size sweep took {elapsed:?}");
    println!(
        "PASS null calibration: T within 0.045..=0.055 at all three n, \
         Z conservative at n=25, in {elapsed:?}"
    );
}

#[test]
fn criterion_4_power_comparison() {
    let start = Instant::now();

    // Reference cell: odds ratio 2 with 100 cases and 100 controls.
    let config = FrequentistSimConfig::standard(
        100,
        EffectMode::FixedLogOr(2.0_f64.ln()),
        100_000,
        SEED,
    );
    let report = simulate_frequentist(&config).unwrap();
    let power_z = report.rate_z;
    let power_t = report.rate_t;
    println!(
        "  or=2, n=100: power_z={power_z:.5} (mc se {:.5}), power_t={power_t:.5} (mc se {:.5})",
        report.mc_se_z, report.mc_se_t
    );

    // The T test never loses to the Z test anywhere on a scenario grid;
    // the per-table ordering |T| >= |Z| makes this deterministic, so the
    // grid run is a cross-check of the whole sampling/analysis path.
    let mut cells = 0;
    for or in [1.5_f64, 2.0, 3.0, 5.0] {
        for n_cases in [25u64, 50, 100, 250] {
            let config = FrequentistSimConfig::standard(
                n_cases,
                EffectMode::FixedLogOr(or.ln()),
                5_000,
                SEED,
            );
            let cell = simulate_frequentist(&config).unwrap();
            assert!(
                cell.rejections_t >= cell.rejections_z,
                "or={or} n={n_cases}: T rejected {} < Z {}",
                cell.rejections_t,
                cell.rejections_z
            );
            cells += 1;
        }
    }
    assert_eq!(cells, 16);
    println!("  T >= Z on all 16 grid cells");

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(300), "power sweep took {elapsed:?}");

    // Fixed reference windows for the or=2/n=100 cell. Under the sampler
    // pinned here the long-run rates are 0.51487 (Z) and 0.53600 (T),
    // measured at 10^7 replicates (mc se 0.00016): the Z window tops out at
    // 0.514 and is unattainable by ~0.0009, and the T long-run rate sits
    // exactly on its window edge. The windows are kept at their stated
    // width instead of being widened to force a pass; a Z miss here means
    // the sampler differs from the reference setup those windows assume,
    // not that the statistics are computed wrong (the calibration and
    // ordering checks above are the properties that hold
    // sampler-independently).
    assert!(
        (power_z - 0.499).abs() <= 0.015,
        "power(Z) = {power_z:.5} (mc se {:.5}) outside 0.499 +/- 0.015; \
         long-run rate under this sampler is ~0.5149",
        report.mc_se_z
    );
    assert!(
        (power_t - 0.521).abs() <= 0.015,
        "power(T) = {power_t:.5} (mc se {:.5}) outside 0.521 +/- 0.015; \
         long-run rate under this sampler is ~0.5360",
        report.mc_se_t
    );
    println!(
        "PASS power: or=2/n=100 gives power_z={power_z:.5}, power_t={power_t:.5}; \
         T >= Z on all 16 grid cells in {elapsed:?}"
    );
}

#[test]
fn criterion_5_selection_and_shrinkage() {
    let start = Instant::now();
    let tau = 0.42;
    let config = SelectionSimConfig {
        l_tests: 10_000,
        n: 500,
        tau,
        n_reps: 2_000,
        // The prior matches the generating distribution of the true log
        // odds ratios, discretized over +/- 5 tau.
        prior: normal_prior(tau, 5.0 * tau, 1001).unwrap(),
        level: 0.95,
        seed: SEED,
    };
    let report = simulate_selection(&config).unwrap();
    println!(
        "  winners: e_true={:.4}, e_frequentist={:.4}, e_posterior={:.4}",
        report.e_true, report.e_frequentist, report.e_posterior_mean
    );
    println!(
        "  curse={:+.4}, posterior bias={:+.4} (mc se {:.4}), coverage={:.4} (mc se {:.4})",
        report.selection_bias_frequentist,
        report.selection_bias_posterior,
        report.mc_se_posterior,
        report.coverage,
        report.mc_se_coverage
    );

    assert!(
        report.selection_bias_posterior.abs() < 0.03,
        "posterior-mean selection bias {:.4} not within 0.03 (mc se {:.4})",
        report.selection_bias_posterior,
        report.mc_se_posterior
    );
    assert!(
        report.selection_bias_frequentist > 0.05,
        "frequentist winner's curse {:.4} not above 0.05",
        report.selection_bias_frequentist
    );
    assert!(
        (report.coverage - 0.94).abs() <= 0.02,
        "coverage {:.4} outside 0.94 +/- 0.02 (mc se {:.4})",
        report.coverage,
        report.mc_se_coverage
    );

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(600), "selection sweep took {elapsed:?}");
    println!(
        "PASS selection: e_true={:.4}, e_frequentist={:.4}, e_posterior={:.4}, \
         curse={:+.4}, posterior bias={:+.4}, coverage={:.3} in {elapsed:?}",
        report.e_true,
        report.e_frequentist,
        report.e_posterior_mean,
        report.selection_bias_frequentist,
        report.selection_bias_posterior,
        report.coverage,
    );
}

/// Naive linear-space posterior used as the oracle for the log-space update.
fn naive_posterior(xi: &[f64], weights: &[f64], t: f64, density: LikelihoodDensity) -> Vec<f64> {
    let standard = Normal::new(0.0, 1.0).unwrap();
    let unnormalized: Vec<f64> = xi
        .iter()
        .zip(weights)
        .map(|(&xi_j, &w_j)| {
            let f = match density {
                LikelihoodDensity::NormalNoncentral => standard.pdf(t - xi_j),
                LikelihoodDensity::Chisq1Noncentral => {
                    let s = t.abs();
                    let l = xi_j.abs();
                    (standard.pdf(s - l) + standard.pdf(s + l)) / 2.0
                }
            };
            w_j * f
        })
        .collect();
    let total: f64 = unnormalized.iter().sum();
    unnormalized.iter().map(|u| u / total).collect()
}

fn narrow_random_prior(rng: &mut ChaCha8Rng, bins: usize) -> DiscretePrior {
    let start: f64 = rng.random_range(-1.5..-0.5);
    let step: f64 = rng.random_range(0.005..0.05);
    let mids: Vec<f64> = (0..bins).map(|k| start + step * k as f64).collect();
    let probs: Vec<f64> = (0..bins).map(|_| rng.random_range(0.01..1.0)).collect();
    DiscretePrior::new(mids, probs).unwrap()
}

#[test]
fn criterion_6_posterior_oracle() {
    let start = Instant::now();

    // Small-instance equivalence against the naive linear-space posterior.
    let mut r = rng(6);
    for bins in 2..=32 {
        for density in [LikelihoodDensity::NormalNoncentral, LikelihoodDensity::Chisq1Noncentral] {
            for _ in 0..20 {
                let prior = narrow_random_prior(&mut r, bins);
                let n = r.random_range(50.0..800.0_f64).round();
                let sigma = r.random_range(3.0..8.0);
                let t = r.random_range(-6.0..6.0);
                let dressed = dress(&prior, n, sigma);
                let posterior = posterior_update(&dressed, t, density).unwrap();
                let expected = naive_posterior(dressed.xi(), dressed.probabilities(), t, density);
                for (&got, want) in posterior.probabilities().iter().zip(&expected) {
                    assert!((got - want).abs() < 1e-10, "bins={bins} {density:?}");
                }
            }
        }
    }

    // Normalization across a wide random sweep.
    let mut r = rng(7);
    for _ in 0..10_000 {
        let bins = r.random_range(2..200);
        let prior = narrow_random_prior(&mut r, bins);
        let n = r.random_range(10.0..20_000.0_f64).round();
        let sigma = r.random_range(1.0..10.0);
        let t = r.random_range(-40.0..40.0);
        let density = if r.random_bool(0.5) {
            LikelihoodDensity::NormalNoncentral
        } else {
            LikelihoodDensity::Chisq1Noncentral
        };
        let posterior = posterior_update(&dress(&prior, n, sigma), t, density).unwrap();
        let total: f64 = posterior.probabilities().iter().sum();
        assert!((total - 1.0).abs() < 1e-12, "sum {total}");
    }

    let elapsed = start.elapsed();
    println!(
        "PASS posterior oracle: naive equivalence for 2..=32 bins and 10^4 \
         normalization checks in {elapsed:?}"
    );
}

#[test]
fn criterion_7_logistic_slope_bound() {
    let start = Instant::now();
    let configs = random_logistic_configs(SEED, 5_000, 2_000);
    let report = bound_experiment_over_configs(&configs, SEED).unwrap();

    assert!(report.n_fitted >= 4_000, "too many skipped fits: {}", report.n_skipped);
    assert!(
        report.max_abs_standardized_slope <= llc_constant() + 0.02,
        "standardized slope {:.6} exceeds the bound plus slack",
        report.max_abs_standardized_slope
    );
    assert!(
        report.max_abs_standardized_slope >= 0.55,
        "standardized slope {:.6} never approached the bound despite \
         near-extremal configs",
        report.max_abs_standardized_slope
    );

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(600), "bound sweep took {elapsed:?}");
    println!(
        "PASS logistic bound: {} fits ({} skipped), max |standardized slope| = {:.6} \
         vs bound {:.6} in {elapsed:?}",
        report.n_fitted,
        report.n_skipped,
        report.max_abs_standardized_slope,
        llc_constant(),
    );
}

#[test]
fn criterion_8_pipeline_determinism() {
    let start = Instant::now();
    let data = Path::new(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../data/synthetic_pairs.csv"
    ));
    let records = load_pair_tables(data).unwrap();

    let run = || {
        let summaries = run_pipeline(
            &records,
            &TruncNormMixtureSpec::default(),
            0.95,
            &PipelineOptions::default(),
        )
        .unwrap();
        let text = emit_report(&summaries, ReportFormat::MatrixText).unwrap();
        (summaries, text)
    };
    let (summaries, first) = run();
    let (_, second) = run();
    assert_eq!(first, second, "matrix report must be byte-identical across runs");

    let mut excluded = BTreeSet::new();
    let mut analyzed = 0;
    for s in &summaries {
        match &s.flag {
            PairFlag::Analyzed => {
                analyzed += 1;
                let mean = s.posterior_mean_gamma_prime.unwrap();
                assert!((-1.0..=1.0).contains(&mean), "mean {mean} escapes [-1, 1]");
            }
            PairFlag::Excluded => {
                excluded.insert((s.item_i, s.item_j));
            }
            other => panic!("unexpected flag {other:?} for pair ({}, {})", s.item_i, s.item_j),
        }
    }
    assert_eq!(analyzed, 128);
    assert_eq!(excluded, exclusion_set(true), "excluded cells must be the default set");
    assert_eq!(first.matches("NA").count(), 8, "excluded cells must render NA");

    let elapsed = start.elapsed();
    println!(
        "PASS pipeline: 128 analyzed + 8 NA pairs, byte-identical reports in {elapsed:?}"
    );
}
