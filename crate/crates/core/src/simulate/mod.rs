//! Monte Carlo estimation of empirical size and power.
//!
//! Replicate `r` of a plan draws from its own ChaCha8 stream
//! `(seed, stream = r)`, so any partition of the replicate range over workers
//! reproduces the same counts.

mod experiment;
mod gauss;
mod signal;

pub use experiment::{
    power_curve, power_curve_with, run_experiment, wilson_interval, ExperimentPlan, MethodResult,
    MethodSpec, MonteCarloReport, PowerPoint, PreparedExperiment, ReplicateBuffers,
};
pub use gauss::{sample_zscores, zscores_to_pvalues, CovarianceModel, PValueSide};
pub use signal::{SignMode, SignalConfig, SignalPattern};
