//! Experiment harness behind the `greedy-sensors` binary.

pub mod config;
pub mod experiment;
pub mod output;
pub mod synthetic;

pub use config::{ConfigError, ExperimentConfig, Mode, Observation};
pub use experiment::{
    run_cv, run_cv_on, run_random, run_submod_report, summarize, summary_value, ExperimentRecord,
    SubmodSummary, SummaryRow,
};
