//! Batch driver: configuration, runs, output files and error metrics.

pub mod config;
pub mod metrics;
pub mod output;
pub mod run;

pub use config::{ConfigError, RunConfig, OUT_DIR_ENV};
pub use metrics::{
    contact_width, envelope_excess, l1_error, restrict_grid, restrict_line, runge_error_rate, ConvergenceReport,
    MetricError, Restriction,
};
pub use output::{GridData, OutputError, Profile1d, SolutionFile};
pub use run::{
    binding_cap_constant, converge, reference_difference, run, simulate, RunError, RunOutcome, RunStats, RunSummary,
    Snapshot, SolverFailure,
};
