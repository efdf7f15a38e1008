//! Monte Carlo experiments: test size and power, selection (winner's curse)
//! with posterior correction, and the logistic standardized-slope bound.
//!
//! Every experiment is deterministic given its config: replicate `i` draws
//! from an independent substream of the config seed, so reports are
//! bit-identical across runs and across thread counts.

mod frequentist;
mod logistic;
pub(crate) mod rng;
mod sample;
mod selection;

pub use frequentist::{
    simulate_frequentist, EffectMode, FrequentistReport, FrequentistSimConfig, NuisanceMode,
};
pub use logistic::{
    bound_experiment_over_configs, fit_logistic, random_logistic_configs, simulate_logistic_bound,
    LogisticBoundReport, LogisticFit, LogisticSimConfig, PredictorKind,
};
pub use sample::{case_exposure_probability, sample_table};
pub use selection::{simulate_selection, SelectionReport, SelectionSimConfig};

use serde::Serialize;

/// Any experiment's summary, for uniform serialization of simulation output.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SimulationReport {
    Frequentist(FrequentistReport),
    Selection(SelectionReport),
    LogisticBound(LogisticBoundReport),
}

impl From<FrequentistReport> for SimulationReport {
    fn from(report: FrequentistReport) -> Self {
        SimulationReport::Frequentist(report)
    }
}

impl From<SelectionReport> for SimulationReport {
    fn from(report: SelectionReport) -> Self {
        SimulationReport::Selection(report)
    }
}

impl From<LogisticBoundReport> for SimulationReport {
    fn from(report: LogisticBoundReport) -> Self {
        SimulationReport::LogisticBound(report)
    }
}
