//! Files, command line and the parallel Monte Carlo driver built on
//! `pcombine-core`.

pub mod cache;
pub mod cli;
pub mod config;
mod error;
pub mod input;
pub mod output;
pub mod parallel;
pub mod regions;
pub mod tables;

pub use cache::ThresholdCache;
pub use error::{CliError, ExitCode};
pub use input::{read_pvalues, InputOptions, PValueFile};
pub use parallel::{run_experiment_parallel, worker_count};
pub use regions::{analyze_regions, RegionReport};
