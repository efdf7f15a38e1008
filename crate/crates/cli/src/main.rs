//! `gammaprime`: normalized odds-ratio effect sizes, tests, posteriors, and
//! batch pipelines for 2×2 tables.
//!
//! Exit codes: 0 success; 2 invalid input (bad flags, malformed files or
//! configs); 3 numeric failure during analysis (for `pipeline`, the report
//! is still written and failing pairs are flagged inside it).

mod fmt;
mod simulate;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gammaprime::bayes::{
    build_mixture_prior, dress, posterior_update, read_prior_csv, summarize_posterior,
    to_gamma_prime_scale, undress_log_or, write_posterior_csv, DiscretePrior, LikelihoodDensity,
    PriorMethod, TruncNormMixtureSpec,
};
use gammaprime::pipeline::{
    emit_report, exclusion_set, load_pair_tables, parse_exclusion_pairs, run_pipeline,
    synthesize_pair_tables, write_pair_tables, PairFlag, PipelineOptions, ReportFormat,
};
use gammaprime::{analyze_table, sigma_hat, z_statistic, Error, TwoByTwoTable};

use fmt::JsonObject;

const USAGE_EXIT: u8 = 2;
const NUMERIC_EXIT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "gammaprime",
    version,
    about = "Normalized odds-ratio effect sizes, tests, posteriors, and batch pipelines"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute every per-table statistic for one 2x2 table.
    Analyze {
        /// Cell counts as `n11,n12,n21,n22`.
        #[arg(long, value_name = "N11,N12,N21,N22")]
        table: String,
        /// Add 1/2 to every cell before analysis (required for zero cells).
        #[arg(long)]
        correct: bool,
    },
    /// Run Monte Carlo experiment cells from a TOML config.
    Simulate {
        #[arg(long, value_name = "FILE")]
        config: PathBuf,
        /// Base seed for cells without their own (overrides the file's).
        #[arg(long)]
        seed: Option<u64>,
        /// Report file; `.csv` extension selects CSV, anything else JSON.
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Posterior for one table: dress the prior, update, map back.
    Bayes {
        /// `builtin` for the default mixture prior, or a prior CSV path.
        #[arg(long, value_name = "FILE|builtin")]
        prior: String,
        /// Cell counts as `n11,n12,n21,n22`; the 1/2 correction is always
        /// applied before analysis.
        #[arg(long, value_name = "N11,N12,N21,N22")]
        table: String,
        /// Credible level for the reported intervals.
        #[arg(long, default_value_t = 0.95)]
        level: f64,
        /// Also write the full posterior (normalized scale) as CSV.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Sequential year-by-year analysis of a pair-table CSV.
    Pipeline {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        #[arg(long, default_value_t = 0.95)]
        level: f64,
        #[arg(long, value_enum, default_value_t = FormatArg::MatrixText)]
        format: FormatArg,
        /// `default` (the standard 8 pairs), `none`, or a file of `i,j` lines.
        #[arg(long, default_value = "default", value_name = "default|none|FILE")]
        exclusions: String,
        /// Prior grid resolution.
        #[arg(long, default_value_t = 1001)]
        bins: usize,
        /// Report file (stdout when omitted).
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Generate the deterministic synthetic pair-table dataset.
    Synth {
        #[arg(long, default_value_t = 20260823)]
        seed: u64,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    #[value(name = "matrix_text")]
    MatrixText,
    #[value(name = "csv")]
    Csv,
    #[value(name = "json")]
    Json,
}

impl From<FormatArg> for ReportFormat {
    fn from(arg: FormatArg) -> Self {
        match arg {
            FormatArg::MatrixText => ReportFormat::MatrixText,
            FormatArg::Csv => ReportFormat::Csv,
            FormatArg::Json => ReportFormat::Json,
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: USAGE_EXIT, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        let code = match error {
            Error::InvalidTable { .. }
            | Error::InvalidLevel { .. }
            | Error::InvalidSpec { .. }
            | Error::InvalidNuisance { .. }
            | Error::InvalidConfig { .. }
            | Error::ParseError { .. }
            | Error::DuplicateKey { .. }
            | Error::NegativeCount { .. }
            | Error::Io(_) => USAGE_EXIT,
            Error::DegenerateTable { .. }
            | Error::OutOfMonotoneRange { .. }
            | Error::AllZeroLikelihood { .. }
            | Error::ScaleMismatch { .. }
            | Error::SeparationDetected
            | Error::NoConvergence { .. } => NUMERIC_EXIT,
        };
        Self { code, message: error.to_string() }
    }
}

fn parse_table_arg(text: &str) -> Result<TwoByTwoTable, Failure> {
    let fields: Vec<&str> = text.split(',').collect();
    if fields.len() != 4 {
        return Err(Failure::usage(format!(
            "--table expects 4 comma-separated counts, got {}",
            fields.len()
        )));
    }
    let mut counts = [0u64; 4];
    for (slot, field) in counts.iter_mut().zip(&fields) {
        *slot = field.trim().parse().map_err(|_| {
            Failure::usage(format!("`{}` is not a nonnegative integer count", field.trim()))
        })?;
    }
    Ok(TwoByTwoTable::from_counts(counts[0], counts[1], counts[2], counts[3])?)
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure {
            code: USAGE_EXIT,
            message: format!("cannot write {}: {e}", path.display()),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_analyze(table: &str, correct: bool) -> Result<u8, Failure> {
    let table = parse_table_arg(table)?;
    let estimate = analyze_table(&table, correct)?;
    let json = JsonObject::new()
        .float("log_or", estimate.log_or)
        .float("sigma_hat", estimate.sigma_hat)
        .float("delta", estimate.delta)
        .float("gamma", estimate.gamma)
        .float("gamma_prime", estimate.gamma_prime)
        .float("var_gamma_prime", estimate.var_gamma_prime)
        .float("z", estimate.z)
        .optional_float("t", estimate.t)
        .float("p_two_sided_z", estimate.p_two_sided_z)
        .optional_float("p_two_sided_t", estimate.p_two_sided_t)
        .float("yule_y", estimate.yule_y)
        .float("yule_q", estimate.yule_q)
        .float("var_yule_y", estimate.var_yule_y)
        .float("var_yule_q", estimate.var_yule_q)
        .render();
    println!("{json}");
    Ok(0)
}

fn cmd_simulate(config: &Path, seed: Option<u64>, out: &Path) -> Result<u8, Failure> {
    let text = fs::read_to_string(config).map_err(|e| {
        Failure::usage(format!("cannot read {}: {e}", config.display()))
    })?;
    let file: simulate::SimulateFile = toml::from_str(&text)
        .map_err(|e| Failure::usage(format!("invalid config {}: {e}", config.display())))?;
    let base_seed = seed.or(file.seed).ok_or_else(|| {
        Failure::usage("no seed: pass --seed or set `seed` in the config file")
    })?;
    let reports = simulate::run_simulate_file(&file, base_seed)?;
    let rendered = if out.extension().is_some_and(|e| e == "csv") {
        simulate::reports_csv(&reports)
    } else {
        simulate::reports_json(&reports)?
    };
    write_or_print(Some(out), &rendered)?;
    println!("wrote {} report(s) to {}", reports.len(), out.display());
    Ok(0)
}

fn load_prior(spec: &str) -> Result<DiscretePrior, Failure> {
    if spec == "builtin" {
        Ok(build_mixture_prior(&TruncNormMixtureSpec::default(), 1001, PriorMethod::Quadrature)?)
    } else {
        Ok(read_prior_csv(spec.as_ref())?)
    }
}

fn cmd_bayes(
    prior: &str,
    table: &str,
    level: f64,
    out: Option<&Path>,
) -> Result<u8, Failure> {
    let prior = load_prior(prior)?;
    let table = parse_table_arg(table)?.haldane_correct();
    let sigma = sigma_hat(&table)?;
    let z = z_statistic(table.log_or(), sigma, table.n());
    let dressed = dress(&prior, table.n(), sigma);
    let posterior = posterior_update(&dressed, z, LikelihoodDensity::NormalNoncentral)?;
    let on_log_or = undress_log_or(&posterior, table.n(), sigma)?;
    let on_gamma_prime = to_gamma_prime_scale(&on_log_or)?;
    let summary = summarize_posterior(&on_gamma_prime, level)?;
    if let Some(path) = out {
        write_posterior_csv(path, &on_gamma_prime)?;
    }
    let json = JsonObject::new()
        .float("level", level)
        .float("n", table.n())
        .float("log_or", table.log_or())
        .float("sigma_hat", sigma)
        .float("z", z)
        .float("posterior_mean_gamma_prime", summary.mean)
        .float("credible_low", summary.hpd.0)
        .float("credible_high", summary.hpd.1)
        .float("equal_tail_low", summary.equal_tail.0)
        .float("equal_tail_high", summary.equal_tail.1)
        .render();
    println!("{json}");
    Ok(0)
}

fn cmd_pipeline(
    input: &Path,
    level: f64,
    format: FormatArg,
    exclusions: &str,
    bins: usize,
    out: Option<&Path>,
) -> Result<u8, Failure> {
    let records = load_pair_tables(input)?;
    let exclusions = match exclusions {
        "default" => exclusion_set(true),
        "none" => exclusion_set(false),
        path => {
            let text = fs::read_to_string(path).map_err(|e| {
                Failure::usage(format!("cannot read exclusion file {path}: {e}"))
            })?;
            parse_exclusion_pairs(&text)?
        }
    };
    let options = PipelineOptions {
        exclusions,
        n_bins: bins,
        density: LikelihoodDensity::NormalNoncentral,
    };
    let summaries = run_pipeline(&records, &TruncNormMixtureSpec::default(), level, &options)?;
    let rendered = emit_report(&summaries, format.into())?;
    write_or_print(out, &rendered)?;
    let failed: Vec<String> = summaries
        .iter()
        .filter(|s| matches!(s.flag, PairFlag::Error(_)))
        .map(|s| format!("({}, {})", s.item_i, s.item_j))
        .collect();
    if failed.is_empty() {
        Ok(0)
    } else {
        eprintln!("{} pair(s) failed numerically: {}", failed.len(), failed.join(" "));
        Ok(NUMERIC_EXIT)
    }
}

fn cmd_synth(seed: u64, out: &Path) -> Result<u8, Failure> {
    let records = synthesize_pair_tables(seed);
    write_pair_tables(out, &records)?;
    println!("wrote {} records to {}", records.len(), out.display());
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Analyze { table, correct } => cmd_analyze(&table, correct),
        Command::Simulate { config, seed, out } => cmd_simulate(&config, seed, &out),
        Command::Bayes { prior, table, level, out } => {
            cmd_bayes(&prior, &table, level, out.as_deref())
        }
        Command::Pipeline { input, level, format, exclusions, bins, out } => {
            cmd_pipeline(&input, level, format, &exclusions, bins, out.as_deref())
        }
        Command::Synth { seed, out } => cmd_synth(seed, &out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
