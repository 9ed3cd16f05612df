//! Rejection thresholds for the combined statistics and the accept/reject
//! decision.
//!
//! Every threshold is reported twice: on the generalised-mean scale
//! (reject when `M_φ ≤ g(α)`) and on the statistic scale (reject when
//! `T ≥ ψ⁻¹(g(α))`). The two rules describe the same rejection region.

mod vad;
mod vwd;

use core::fmt;
use core::str::FromStr;

use crate::combine::{approx_pvalue, CombinedStatistic, CombinerKind, UnknownName};
use crate::numerics::{QuadratureSpec, PI};
use crate::{Error, Result};

pub use vad::{vad_threshold, vad_threshold_approx, DEFAULT_VAD_TOL};
pub use vwd::vwd_threshold;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ThresholdKind {
    /// Cauchy-tail approximation, valid as the significance level shrinks.
    CauchyApprox,
    /// Valid under weak (strong-mixing) dependence.
    Vwd,
    /// Valid under arbitrary dependence.
    Vad,
}

impl ThresholdKind {
    pub const ALL: [ThresholdKind; 3] = [
        ThresholdKind::CauchyApprox,
        ThresholdKind::Vwd,
        ThresholdKind::Vad,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ThresholdKind::CauchyApprox => "approx",
            ThresholdKind::Vwd => "vwd",
            ThresholdKind::Vad => "vad",
        }
    }
}

impl fmt::Display for ThresholdKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ThresholdKind {
    type Err = UnknownName;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "approx" | "cauchy-approx" | "cauchyapprox" | "cauchy" => {
                Ok(ThresholdKind::CauchyApprox)
            }
            "vwd" => Ok(ThresholdKind::Vwd),
            "vad" => Ok(ThresholdKind::Vad),
            _ => Err(UnknownName),
        }
    }
}

/// Solver by-products kept for auditing. Fields not produced by a family are
/// `None`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Diagnostics {
    /// Root `x_K` of the VAD fixed-point equation.
    pub x_k: Option<f64>,
    /// `|g(x_K)| / (K ∫_{x_K}^{α/K} H)`, the fixed-point residual relative
    /// to the two terms it balances.
    pub residual: Option<f64>,
    /// `|g|` at the lower end of the final bracket, on the same scale.
    pub bracket_residual: Option<f64>,
    /// Centring constant added to the stable quantile (VWD).
    pub delta: Option<f64>,
    /// Upper `α` quantile of the limiting stable law (VWD).
    pub stable_quantile: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdResult {
    pub kind: CombinerKind,
    pub family: ThresholdKind,
    pub alpha: f64,
    /// Combination size; `None` for thresholds that do not depend on it.
    pub k: Option<usize>,
    /// Reject when `M_φ ≤` this value.
    pub mean_scale_threshold: f64,
    /// Reject when `T ≥` this value (`K p_(1) <` it for Bonferroni).
    pub stat_scale_threshold: f64,
    pub diagnostics: Diagnostics,
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::domain("significance level α", alpha))
    }
}

/// Upper `α` quantile of the standard Cauchy law, `tan{π(1/2 - α)}`.
pub(crate) fn cauchy_upper(alpha: f64) -> f64 {
    if alpha <= 0.5 {
        1.0 / libm::tan(PI * alpha)
    } else {
        libm::tan(PI * (0.5 - alpha))
    }
}

/// PCCT: reject when `T > t_{α/2}`; CCT: `T > t_α`. The generalised-mean
/// threshold is `α` in both cases.
pub fn cauchy_approx_threshold(kind: CombinerKind, alpha: f64) -> Result<ThresholdResult> {
    check_alpha(alpha)?;
    let stat = match kind {
        CombinerKind::Pcct => cauchy_upper(0.5 * alpha),
        CombinerKind::Cct => cauchy_upper(alpha),
        _ => {
            return Err(Error::UnsupportedThreshold {
                kind,
                family: ThresholdKind::CauchyApprox,
                hint: "use the vwd or vad family",
            })
        }
    };
    Ok(ThresholdResult {
        kind,
        family: ThresholdKind::CauchyApprox,
        alpha,
        k: None,
        mean_scale_threshold: alpha,
        stat_scale_threshold: stat,
        diagnostics: Diagnostics::default(),
    })
}

/// Bonferroni's own rule `K p_(1) < α`, valid under any dependence.
fn bonferroni_threshold(k: usize, alpha: f64) -> Result<ThresholdResult> {
    check_alpha(alpha)?;
    if k == 0 {
        return Err(Error::domain("combination size K", 0.0));
    }
    Ok(ThresholdResult {
        kind: CombinerKind::Bonferroni,
        family: ThresholdKind::Vad,
        alpha,
        k: Some(k),
        mean_scale_threshold: alpha,
        stat_scale_threshold: alpha,
        diagnostics: Diagnostics::default(),
    })
}

/// Dispatches on `family`. Bonferroni is only available under `Vad`.
pub fn threshold(
    kind: CombinerKind,
    family: ThresholdKind,
    k: usize,
    alpha: f64,
    spec: &QuadratureSpec,
) -> Result<ThresholdResult> {
    match (kind, family) {
        (CombinerKind::Bonferroni, ThresholdKind::Vad) => bonferroni_threshold(k, alpha),
        (CombinerKind::Bonferroni, family) => Err(Error::UnsupportedThreshold {
            kind,
            family,
            hint: "Bonferroni uses its exact rule K p_min < alpha; request the vad family",
        }),
        (_, ThresholdKind::CauchyApprox) => cauchy_approx_threshold(kind, alpha),
        (_, ThresholdKind::Vwd) => vwd_threshold(kind, k, alpha, spec),
        (_, ThresholdKind::Vad) => vad_threshold(kind, k, alpha, DEFAULT_VAD_TOL),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestReport {
    pub kind: CombinerKind,
    pub family: ThresholdKind,
    pub alpha: f64,
    pub k: usize,
    pub statistic: f64,
    pub mean_scale: f64,
    pub mean_scale_threshold: f64,
    pub stat_scale_threshold: f64,
    /// Cauchy-approximation p-value, for CCT and PCCT only.
    pub approx_pvalue: Option<f64>,
    pub reject: bool,
    /// The decision taken on the statistic scale; always equal to `reject`
    /// up to rounding exactly at the boundary.
    pub stat_scale_reject: bool,
}

pub fn decide(stat: &CombinedStatistic, thr: &ThresholdResult) -> Result<TestReport> {
    let k_mismatch = thr.k.is_some_and(|k| k != stat.k);
    if stat.kind != thr.kind || k_mismatch {
        return Err(Error::Mismatch {
            stat_kind: stat.kind,
            stat_k: stat.k,
            thr_kind: thr.kind,
            thr_k: thr.k.unwrap_or(stat.k),
        });
    }
    let (reject, stat_scale_reject) = match stat.kind {
        CombinerKind::Bonferroni => (
            stat.mean_scale < thr.mean_scale_threshold,
            stat.statistic < thr.stat_scale_threshold,
        ),
        _ => (
            stat.mean_scale <= thr.mean_scale_threshold,
            stat.statistic >= thr.stat_scale_threshold,
        ),
    };
    Ok(TestReport {
        kind: stat.kind,
        family: thr.family,
        alpha: thr.alpha,
        k: stat.k,
        statistic: stat.statistic,
        mean_scale: stat.mean_scale,
        mean_scale_threshold: thr.mean_scale_threshold,
        stat_scale_threshold: thr.stat_scale_threshold,
        approx_pvalue: approx_pvalue(stat).ok(),
        reject,
        stat_scale_reject,
    })
}
