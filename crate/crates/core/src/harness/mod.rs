//! Monte Carlo experiment engine and scaling benchmark.

mod bench;
mod estimator;
mod experiment;

pub use bench::{fit_slope, run_scaling_bench, Aggregator, BenchReport, BenchRow, BenchSpec, SlopeFit};
pub use estimator::{resolve_config, run_estimator, EstimateReport, Method, Overrides};
pub use experiment::{
    run_experiment, EstimatorSummary, ExperimentConfig, ExperimentOutput, ExperimentReport,
    TrialRecord,
};
