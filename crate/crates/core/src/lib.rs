//! Global-null p-value combination: the Cauchy (CCT), positive Cauchy (PCCT),
//! harmonic-mean (HMP) and Bonferroni statistics, their critical thresholds
//! under weak and arbitrary dependence, and the per-replicate kernels of a
//! Monte Carlo size/power engine.
//!
//! The crate is `no_std` (it needs `alloc`). IO, threading, caching and the
//! command line live in the `pcombine` crate.

#![cfg_attr(not(feature = "std"), no_std)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod combine;
mod error;
pub mod numerics;
pub mod simulate;
pub mod thresholds;

pub use combine::{
    approx_pvalue, combine, combine_bonferroni, combine_cct, combine_hmp, combine_pcct,
    generalized_mean, CombinedStatistic, CombinerKind, PValueVector,
};
pub use error::{Error, Result};
pub use numerics::{
    cms_stable_sample, delta_shift, find_root, stable_cdf, stable_quantile, QuadratureSpec,
    RootBracket, StableLaw, TailLaw,
};
pub use simulate::{
    power_curve, run_experiment, sample_zscores, zscores_to_pvalues, CovarianceModel,
    ExperimentPlan, MethodSpec, MonteCarloReport, PValueSide, SignMode, SignalConfig,
    SignalPattern,
};
pub use thresholds::{
    cauchy_approx_threshold, decide, threshold, vad_threshold, vad_threshold_approx, vwd_threshold,
    TestReport, ThresholdKind, ThresholdResult, DEFAULT_VAD_TOL,
};
