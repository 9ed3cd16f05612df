use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::gauss::fill_zscores;
use super::{CovarianceModel, PValueSide, SignalConfig, SignalPattern};
use crate::combine::{combine, CombinedStatistic, CombinerKind, PValueVector};
use crate::numerics::QuadratureSpec;
use crate::thresholds::{decide, threshold, ThresholdKind, ThresholdResult};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MethodSpec {
    pub kind: CombinerKind,
    pub family: ThresholdKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPlan {
    pub k: usize,
    pub covariance: CovarianceModel,
    pub signal: SignalConfig,
    pub methods: Vec<MethodSpec>,
    pub alpha: f64,
    pub replicates: u64,
    pub seed: u64,
    pub side: PValueSide,
}

impl ExperimentPlan {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::domain("combination size K", 0.0));
        }
        if self.replicates == 0 {
            return Err(Error::domain("replicate count", 0.0));
        }
        if self.methods.is_empty() {
            return Err(Error::Empty);
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::domain("significance level α", self.alpha));
        }
        self.covariance.validate()?;
        self.signal.validate()
    }
}

/// A plan with its mean vector and thresholds resolved.
#[derive(Debug, Clone)]
pub struct PreparedExperiment {
    plan: ExperimentPlan,
    mu: Vec<f64>,
    thresholds: Vec<ThresholdResult>,
    /// Distinct combiners, so each statistic is computed once per replicate.
    kinds: Vec<CombinerKind>,
    method_kind: Vec<usize>,
}

/// Scratch space reused across replicates.
#[derive(Debug, Default)]
pub struct ReplicateBuffers {
    z: Vec<f64>,
    stats: Vec<CombinedStatistic>,
}

impl PreparedExperiment {
    /// Validates the plan and computes every threshold before any sampling.
    pub fn new(plan: &ExperimentPlan, spec: &QuadratureSpec) -> Result<Self> {
        Self::with_thresholds(plan, |m| {
            threshold(m.kind, m.family, plan.k, plan.alpha, spec)
        })
    }

    /// As [`new`](Self::new) with a caller-supplied threshold source, e.g. a
    /// memoising one.
    pub fn with_thresholds<F>(plan: &ExperimentPlan, mut source: F) -> Result<Self>
    where
        F: FnMut(&MethodSpec) -> Result<ThresholdResult>,
    {
        plan.validate()?;
        let mu = plan.signal.mean_vector(plan.k)?;
        let thresholds = plan
            .methods
            .iter()
            .map(&mut source)
            .collect::<Result<Vec<_>>>()?;
        let mut kinds = Vec::new();
        let method_kind = plan
            .methods
            .iter()
            .map(|m| match kinds.iter().position(|&k| k == m.kind) {
                Some(i) => i,
                None => {
                    kinds.push(m.kind);
                    kinds.len() - 1
                }
            })
            .collect();
        Ok(Self {
            plan: plan.clone(),
            mu,
            thresholds,
            kinds,
            method_kind,
        })
    }

    pub fn plan(&self) -> &ExperimentPlan {
        &self.plan
    }

    pub fn thresholds(&self) -> &[ThresholdResult] {
        &self.thresholds
    }

    /// The p-values of replicate `r`.
    pub fn replicate_pvalues(&self, r: u64, buf: &mut ReplicateBuffers) -> Result<PValueVector> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.plan.seed);
        rng.set_stream(r);
        fill_zscores(&self.plan.covariance, &self.mu, &mut rng, &mut buf.z);
        let side = self.plan.side;
        let p: Vec<f64> = buf.z.iter().map(|&x| side.pvalue(x)).collect();
        PValueVector::new(p).map_err(|e| Error::Replicate {
            replicate: r,
            source: alloc::boxed::Box::new(e),
        })
    }

    /// Adds replicate `r`'s rejections into `counts` (one slot per method).
    pub fn run_replicate(
        &self,
        r: u64,
        buf: &mut ReplicateBuffers,
        counts: &mut [u64],
    ) -> Result<()> {
        let p = self.replicate_pvalues(r, buf)?;
        buf.stats.clear();
        buf.stats.extend(self.kinds.iter().map(|&k| combine(&p, k)));
        for (i, thr) in self.thresholds.iter().enumerate() {
            let stat = &buf.stats[self.method_kind[i]];
            let report = decide(stat, thr).map_err(|e| Error::Replicate {
                replicate: r,
                source: alloc::boxed::Box::new(e),
            })?;
            if report.reject {
                counts[i] += 1;
            }
        }
        Ok(())
    }

    /// Rejection counts over a replicate range.
    pub fn run_range(&self, range: Range<u64>) -> Result<Vec<u64>> {
        let mut counts = vec![0; self.thresholds.len()];
        let mut buf = ReplicateBuffers::default();
        for r in range {
            self.run_replicate(r, &mut buf, &mut counts)?;
        }
        Ok(counts)
    }

    pub fn report(&self, counts: &[u64]) -> MonteCarloReport {
        let n = self.plan.replicates;
        let results = self
            .plan
            .methods
            .iter()
            .zip(counts)
            .map(|(&method, &rejections)| {
                let (lo, hi) = wilson_interval(rejections, n);
                MethodResult {
                    method,
                    rejections,
                    replicates: n,
                    frequency: rejections as f64 / n as f64,
                    wilson_lo: lo,
                    wilson_hi: hi,
                }
            })
            .collect();
        MonteCarloReport {
            plan: self.plan.clone(),
            thresholds: self.thresholds.clone(),
            results,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MethodResult {
    pub method: MethodSpec,
    pub rejections: u64,
    pub replicates: u64,
    pub frequency: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloReport {
    pub plan: ExperimentPlan,
    pub thresholds: Vec<ThresholdResult>,
    pub results: Vec<MethodResult>,
}

impl MonteCarloReport {
    pub fn frequency(&self, kind: CombinerKind, family: ThresholdKind) -> Option<f64> {
        self.results
            .iter()
            .find(|r| r.method.kind == kind && r.method.family == family)
            .map(|r| r.frequency)
    }
}

const Z_975: f64 = 1.959_963_984_540_054;

/// 95% Wilson score interval for `x` successes in `n` trials.
pub fn wilson_interval(x: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let p = x as f64 / n;
    let z2 = Z_975 * Z_975;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z_975 / denom * libm::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    ((centre - half).clamp(0.0, p), (centre + half).clamp(p, 1.0))
}

/// Sequential run over all replicates.
pub fn run_experiment(plan: &ExperimentPlan, spec: &QuadratureSpec) -> Result<MonteCarloReport> {
    let prepared = PreparedExperiment::new(plan, spec)?;
    let counts = prepared.run_range(0..plan.replicates)?;
    Ok(prepared.report(&counts))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerPoint {
    pub strength: f64,
    pub method: MethodSpec,
    pub power: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
}

/// One experiment per signal strength, flattened to long format. Every grid
/// point reuses the template's seed.
pub fn power_curve_with<F>(
    template: &ExperimentPlan,
    grid: &[f64],
    mut runner: F,
) -> Result<Vec<PowerPoint>>
where
    F: FnMut(&ExperimentPlan) -> Result<MonteCarloReport>,
{
    if template.signal.pattern == SignalPattern::Null {
        return Err(Error::domain(
            "signal pattern for a power curve (must not be null)",
            0.0,
        ));
    }
    if grid.is_empty() {
        return Err(Error::Empty);
    }
    let mut out = Vec::with_capacity(grid.len() * template.methods.len());
    for &c0 in grid {
        let mut plan = template.clone();
        plan.signal.strength = c0;
        let report = runner(&plan)?;
        out.extend(report.results.iter().map(|r| PowerPoint {
            strength: c0,
            method: r.method,
            power: r.frequency,
            wilson_lo: r.wilson_lo,
            wilson_hi: r.wilson_hi,
        }));
    }
    Ok(out)
}

pub fn power_curve(
    template: &ExperimentPlan,
    grid: &[f64],
    spec: &QuadratureSpec,
) -> Result<Vec<PowerPoint>> {
    power_curve_with(template, grid, |plan| run_experiment(plan, spec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulate::SignMode;

    fn plan(methods: Vec<MethodSpec>) -> ExperimentPlan {
        ExperimentPlan {
            k: 50,
            covariance: CovarianceModel::Ar1 { rho: 0.3 },
            signal: SignalConfig::NULL,
            methods,
            alpha: 0.05,
            replicates: 400,
            seed: 99,
            side: PValueSide::OneSided,
        }
    }

    fn all_methods() -> Vec<MethodSpec> {
        let mut m = Vec::new();
        for kind in [CombinerKind::Cct, CombinerKind::Pcct, CombinerKind::Hmp] {
            for family in [ThresholdKind::Vwd, ThresholdKind::Vad] {
                m.push(MethodSpec { kind, family });
            }
        }
        m.push(MethodSpec {
            kind: CombinerKind::Bonferroni,
            family: ThresholdKind::Vad,
        });
        m
    }

    #[test]
    fn ranges_compose() {
        let p = PreparedExperiment::new(&plan(all_methods()), &QuadratureSpec::default()).unwrap();
        let whole = p.run_range(0..400).unwrap();
        let a = p.run_range(0..123).unwrap();
        let b = p.run_range(123..400).unwrap();
        let sum: Vec<u64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        assert_eq!(whole, sum);
    }

    #[test]
    fn vad_never_exceeds_vwd() {
        let r = run_experiment(&plan(all_methods()), &QuadratureSpec::default()).unwrap();
        for kind in [CombinerKind::Cct, CombinerKind::Pcct, CombinerKind::Hmp] {
            assert!(r.frequency(kind, ThresholdKind::Vad) <= r.frequency(kind, ThresholdKind::Vwd));
        }
        for m in &r.results {
            assert!(m.wilson_lo <= m.frequency && m.frequency <= m.wilson_hi);
        }
    }

    #[test]
    fn single_replicate_is_zero_or_one() {
        let mut pl = plan(all_methods());
        pl.replicates = 1;
        let r = run_experiment(&pl, &QuadratureSpec::default()).unwrap();
        assert!(r
            .results
            .iter()
            .all(|m| m.frequency == 0.0 || m.frequency == 1.0));
    }

    #[test]
    fn threshold_failure_aborts_before_sampling() {
        let pl = plan(vec![MethodSpec {
            kind: CombinerKind::Hmp,
            family: ThresholdKind::CauchyApprox,
        }]);
        assert!(matches!(
            run_experiment(&pl, &QuadratureSpec::default()),
            Err(Error::UnsupportedThreshold { .. })
        ));
    }

    #[test]
    fn wilson_examples() {
        let (lo, hi) = wilson_interval(0, 10);
        assert_eq!(lo, 0.0);
        assert!((hi - 0.2775328).abs() < 1e-6);
        let (lo, hi) = wilson_interval(50, 1000);
        assert!((lo - 0.03813).abs() < 1e-4 && (hi - 0.06531).abs() < 1e-4);
    }

    #[test]
    fn power_curve_requires_signal() {
        let spec = QuadratureSpec::default();
        let pl = plan(all_methods());
        assert!(power_curve(&pl, &[0.5], &spec).is_err());
        let mut pl = pl;
        pl.signal = SignalConfig {
            pattern: SignalPattern::Dense,
            strength: 0.0,
            sign_mode: SignMode::AllPositive,
        };
        pl.replicates = 100;
        let curve = power_curve(&pl, &[0.0, 3.0], &spec).unwrap();
        assert_eq!(curve.len(), 2 * pl.methods.len());
        assert!(curve[pl.methods.len()..].iter().all(|pt| pt.power == 1.0));
        let mut null = pl.clone();
        null.signal = SignalConfig::NULL;
        let size = run_experiment(&null, &spec).unwrap();
        for (pt, r) in curve.iter().zip(&size.results) {
            assert_eq!(pt.power, r.frequency);
        }
    }
}
