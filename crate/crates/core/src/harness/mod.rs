//! Scenario grids, replications, performance summaries and the command-line front end.

mod cli;
mod config_file;
mod output;
mod scenario;
pub mod seed;
mod summary;

pub use cli::cli_run;
pub use config_file::{RunConfig, Ties, DEFAULT_FALSE_MATCH, DEFAULT_MISSING_GRID};
pub use output::{write_replications, write_summary, REPLICATION_COLUMNS, SUMMARY_COLUMNS};
pub use scenario::{
    replicate, run_scenario, summarize, Method, ReplicationData, ReplicationResult, ScenarioSpec,
    ScenarioSummary,
};
pub use summary::{exact_binomial_ci, summarize_cell, CellSummary, Z_975};
