use std::time::{Duration, Instant};

use rayon::prelude::*;

use pcombine_core::simulate::{MonteCarloReport, PreparedExperiment};
use pcombine_core::{Error, ExperimentPlan};

use crate::ThresholdCache;

/// Replicates per work item. Fixed, so the partition never depends on the
/// number of workers.
const CHUNK: u64 = 64;

pub const THREADS_ENV: &str = "PCOMBINE_THREADS";

/// `PCOMBINE_THREADS` if set to a positive integer, else all cores.
pub fn worker_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Runs `plan` on `threads` workers. Counts are summed per fixed-size chunk,
/// so the report is bit-identical for every thread count.
pub fn run_experiment_parallel(
    plan: &ExperimentPlan,
    cache: &ThresholdCache,
    threads: usize,
) -> Result<(MonteCarloReport, Duration), Error> {
    let start = Instant::now();
    let prepared = PreparedExperiment::with_thresholds(plan, |m| {
        cache.get(m.kind, m.family, plan.k, plan.alpha)
    })?;
    let chunks: Vec<_> = (0..plan.replicates.div_ceil(CHUNK))
        .map(|c| c * CHUNK..((c + 1) * CHUNK).min(plan.replicates))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|_| Error::NumericalFailure {
            what: "worker pool start-up",
            estimate: threads as f64,
        })?;
    let partial: Vec<Result<Vec<u64>, Error>> = pool.install(|| {
        chunks
            .par_iter()
            .map(|r| prepared.run_range(r.clone()))
            .collect()
    });
    let mut counts = vec![0u64; plan.methods.len()];
    for part in partial {
        for (total, c) in counts.iter_mut().zip(part?) {
            *total += c;
        }
    }
    Ok((prepared.report(&counts), start.elapsed()))
}
