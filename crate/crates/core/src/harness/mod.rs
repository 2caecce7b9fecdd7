//! Experiment configuration, repeated runs, error estimation and reports.

mod config;
mod report;
mod run;

pub use config::{default_alpha, AlgorithmConfig, BenchConfig, ExperimentConfig, InstanceSource};
pub use report::{
    emit_report, read_results_csv, render_summary, summarize, write_results_csv, write_timings_csv, ConfigSummary,
    ReportFiles, ResultRow,
};
pub use run::{
    error_against, estimate_error, run_experiment, run_repetition, RepetitionOutput, RepetitionSeeds, RunResult,
    RunStatus,
};
