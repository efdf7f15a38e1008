//! The `simulate` subcommand: run experiment cells described by a TOML file.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::time::Instant;

use serde::Deserialize;

use gammaprime::bayes::{
    build_mixture_prior, normal_prior, read_prior_csv, DiscretePrior, PriorMethod,
    TruncNormMixtureSpec,
};
use gammaprime::sim::{
    bound_experiment_over_configs, random_logistic_configs, simulate_frequentist,
    simulate_logistic_bound, simulate_selection, EffectMode, FrequentistSimConfig,
    LogisticSimConfig, NuisanceMode, SelectionSimConfig, SimulationReport,
};
use gammaprime::Result;

use crate::fmt::float17;

fn default_ratio() -> f64 {
    1.0
}

fn default_alpha() -> f64 {
    0.05
}

fn default_level() -> f64 {
    0.95
}

fn default_bins() -> usize {
    1001
}

/// One size/power cell, as written in the config file.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrequentistCell {
    pub n_cases: u64,
    #[serde(default = "default_ratio")]
    pub case_control_ratio: f64,
    pub effect_mode: EffectMode,
    pub nuisance_mode: Option<NuisanceMode>,
    pub n_reps: u64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    pub seed: Option<u64>,
}

/// Prior source for a selection cell. Defaults to a normal prior matched to
/// the cell's generating tau.
#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PriorChoice {
    Normal { sd: f64, half_width: f64 },
    Mixture(TruncNormMixtureSpec),
    File { path: String },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelectionCell {
    pub l_tests: u64,
    pub n: u64,
    pub tau: f64,
    pub n_reps: u64,
    #[serde(default = "default_level")]
    pub level: f64,
    #[serde(default = "default_bins")]
    pub n_bins: usize,
    pub prior: Option<PriorChoice>,
    pub seed: Option<u64>,
}

/// A logistic-bound cell: either one fixed generating config, or a batch of
/// randomly drawn mixed configs with one dataset each.
#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LogisticBoundCell {
    Random { n_configs: usize, n: usize, seed: Option<u64> },
    Fixed { config: LogisticSimConfig, n_datasets: u64 },
}

/// Top-level simulate config: any number of cells of each kind, run in
/// declaration order (frequentist, then selection, then logistic).
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateFile {
    pub seed: Option<u64>,
    #[serde(default)]
    pub frequentist: Vec<FrequentistCell>,
    #[serde(default)]
    pub selection: Vec<SelectionCell>,
    #[serde(default)]
    pub logistic_bound: Vec<LogisticBoundCell>,
}

/// Mixes a base seed with a cell index (splitmix64 finalizer) so cells
/// without explicit seeds get distinct, reproducible streams.
fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(1);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn selection_prior(cell: &SelectionCell) -> Result<DiscretePrior> {
    match &cell.prior {
        None => normal_prior(cell.tau, 5.0 * cell.tau, cell.n_bins),
        Some(PriorChoice::Normal { sd, half_width }) => {
            normal_prior(*sd, *half_width, cell.n_bins)
        }
        Some(PriorChoice::Mixture(spec)) => {
            build_mixture_prior(spec, cell.n_bins, PriorMethod::Quadrature)
        }
        Some(PriorChoice::File { path }) => read_prior_csv(path.as_ref()),
    }
}

/// Runs every cell in the file and returns the reports in cell order.
/// `base_seed` fills in any cell that does not carry its own seed.
pub fn run_simulate_file(file: &SimulateFile, base_seed: u64) -> Result<Vec<SimulationReport>> {
    let total =
        file.frequentist.len() + file.selection.len() + file.logistic_bound.len();
    let mut reports = Vec::with_capacity(total);
    let mut cell_index = 0u64;
    let progress = |label: &str, started: Instant, done: &mut u64| {
        *done += 1;
        eprintln!("[{done}/{total}] {label} finished in {:.1}s", started.elapsed().as_secs_f64());
    };
    let mut done = 0u64;

    for cell in &file.frequentist {
        let started = Instant::now();
        let config = FrequentistSimConfig {
            n_cases: cell.n_cases,
            case_control_ratio: cell.case_control_ratio,
            effect_mode: cell.effect_mode,
            nuisance_mode: cell.nuisance_mode.unwrap_or_default(),
            n_reps: cell.n_reps,
            alpha: cell.alpha,
            seed: cell.seed.unwrap_or_else(|| derive_seed(base_seed, cell_index)),
        };
        cell_index += 1;
        reports.push(simulate_frequentist(&config)?.into());
        progress("frequentist cell", started, &mut done);
    }
    for cell in &file.selection {
        let started = Instant::now();
        let config = SelectionSimConfig {
            l_tests: cell.l_tests,
            n: cell.n,
            tau: cell.tau,
            n_reps: cell.n_reps,
            prior: selection_prior(cell)?,
            level: cell.level,
            seed: cell.seed.unwrap_or_else(|| derive_seed(base_seed, cell_index)),
        };
        cell_index += 1;
        reports.push(simulate_selection(&config)?.into());
        progress("selection cell", started, &mut done);
    }
    for cell in &file.logistic_bound {
        let started = Instant::now();
        let report = match cell {
            LogisticBoundCell::Random { n_configs, n, seed } => {
                let seed = seed.unwrap_or_else(|| derive_seed(base_seed, cell_index));
                let configs = random_logistic_configs(seed, *n_configs, *n);
                bound_experiment_over_configs(&configs, seed)?
            }
            LogisticBoundCell::Fixed { config, n_datasets } => {
                simulate_logistic_bound(config, *n_datasets)?
            }
        };
        cell_index += 1;
        reports.push(report.into());
        progress("logistic bound cell", started, &mut done);
    }
    Ok(reports)
}

const CSV_COLUMNS: &[&str] = &[
    "kind", "seed", "n_reps", "n_cases", "case_control_ratio", "effect", "tau", "q_lo", "q_hi",
    "alpha", "rate_z", "rate_t", "mc_se_z", "mc_se_t", "rejections_z", "rejections_t",
    "saturated_t", "l_tests", "n", "level", "prior_bins", "e_true", "e_frequentist",
    "e_posterior_mean", "selection_bias_frequentist", "selection_bias_posterior", "coverage",
    "mc_se_true", "mc_se_frequentist", "mc_se_posterior", "mc_se_coverage", "n_datasets",
    "n_fitted", "n_skipped", "min_standardized_slope", "max_standardized_slope",
    "max_abs_standardized_slope",
];

fn csv_row(report: &SimulationReport) -> String {
    let mut cells: HashMap<&str, String> = HashMap::new();
    let mut set = |key: &'static str, value: String| {
        cells.insert(key, value);
    };
    match report {
        SimulationReport::Frequentist(r) => {
            set("kind", "frequentist".to_string());
            set("seed", r.config.seed.to_string());
            set("n_reps", r.config.n_reps.to_string());
            set("n_cases", r.config.n_cases.to_string());
            set("case_control_ratio", float17(r.config.case_control_ratio));
            match r.config.effect_mode {
                EffectMode::FixedLogOr(value) => {
                    set("effect", format!("fixed_log_or={}", float17(value)));
                }
                EffectMode::RandomLogOr { tau } => {
                    set("effect", "random_log_or".to_string());
                    set("tau", float17(tau));
                }
            }
            let NuisanceMode::UniformQ { lo, hi } = r.config.nuisance_mode;
            set("q_lo", float17(lo));
            set("q_hi", float17(hi));
            set("alpha", float17(r.config.alpha));
            set("rate_z", float17(r.rate_z));
            set("rate_t", float17(r.rate_t));
            set("mc_se_z", float17(r.mc_se_z));
            set("mc_se_t", float17(r.mc_se_t));
            set("rejections_z", r.rejections_z.to_string());
            set("rejections_t", r.rejections_t.to_string());
            set("saturated_t", r.saturated_t.to_string());
        }
        SimulationReport::Selection(r) => {
            set("kind", "selection".to_string());
            set("seed", r.seed.to_string());
            set("n_reps", r.n_reps.to_string());
            set("tau", float17(r.tau));
            set("l_tests", r.l_tests.to_string());
            set("n", r.n.to_string());
            set("level", float17(r.level));
            set("prior_bins", r.prior_bins.to_string());
            set("e_true", float17(r.e_true));
            set("e_frequentist", float17(r.e_frequentist));
            set("e_posterior_mean", float17(r.e_posterior_mean));
            set("selection_bias_frequentist", float17(r.selection_bias_frequentist));
            set("selection_bias_posterior", float17(r.selection_bias_posterior));
            set("coverage", float17(r.coverage));
            set("mc_se_true", float17(r.mc_se_true));
            set("mc_se_frequentist", float17(r.mc_se_frequentist));
            set("mc_se_posterior", float17(r.mc_se_posterior));
            set("mc_se_coverage", float17(r.mc_se_coverage));
        }
        SimulationReport::LogisticBound(r) => {
            set("kind", "logistic_bound".to_string());
            set("seed", r.seed.to_string());
            set("n_datasets", r.n_datasets.to_string());
            set("n_fitted", r.n_fitted.to_string());
            set("n_skipped", r.n_skipped.to_string());
            set("min_standardized_slope", float17(r.min_standardized_slope));
            set("max_standardized_slope", float17(r.max_standardized_slope));
            set("max_abs_standardized_slope", float17(r.max_abs_standardized_slope));
        }
    }
    let mut row = String::new();
    for (idx, column) in CSV_COLUMNS.iter().enumerate() {
        if idx > 0 {
            row.push(',');
        }
        row.push_str(cells.get(column).map_or("", String::as_str));
    }
    row
}

/// Renders reports as CSV: one row per cell, a `kind` column, and blank
/// fields where a column does not apply to that kind.
pub fn reports_csv(reports: &[SimulationReport]) -> String {
    let mut out = CSV_COLUMNS.join(",");
    out.push('\n');
    for report in reports {
        let _ = writeln!(out, "{}", csv_row(report));
    }
    out
}

/// Renders reports as a pretty-printed JSON array, floats at 17 significant
/// digits like every other output format.
pub fn reports_json(reports: &[SimulationReport]) -> Result<String> {
    gammaprime::jsonfmt::to_pretty_json17(&reports)
}
