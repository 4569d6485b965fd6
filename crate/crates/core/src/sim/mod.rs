//! Seeded Monte Carlo experiments, CSV output, gates and plots.

mod check;
mod config;
mod experiments;
pub mod plot;
mod runner;
pub mod stats;

pub use check::{evaluate_checks, Gate};
pub use config::{CheckSpec, ExperimentConfig, MRule, RateUnits, ThresholdTuning};
pub use experiments::{
    class_rates, rate_figures, summarize, table2, table2_config, wf_gain_sweep, write_rows, ClassRates, Figure,
    MethodSummary, Table2Row, WfGainRow, TABLE2_N, WF_B,
};
pub use runner::{
    method_feedback_bits, population_setup, run_experiment, run_trial, trial_seed, write_csv, PopulationSetup,
    TrialRecord, CSV_HEADER,
};
