//! Named, reproducible experiments over `oscillab-core`, with JSON and CSV
//! output and sieve-cache administration.

mod cache;
pub mod config;
mod error;
pub mod experiments;
pub mod manifest;
pub mod output;

pub use cache::{cache_admin, CacheAction};
pub use config::{ExperimentSpec, OutputFormat, OutputSpec, ParamValue, DEFAULT_SEED};
pub use error::{CliError, Result};
pub use experiments::{
    experiment_names, lookup, run_experiment, run_experiment_in, run_with_threads, RunContext,
};
pub use manifest::{NamedResult, ResultValue, RunManifest};

/// Exit status when `--check` finds a failed pass flag.
pub const EXIT_CHECK_FAILED: i32 = 4;
