//! Thresholds valid under weak dependence, from the tail-index-one stable
//! limits of the combined statistics.

use super::{cauchy_upper, check_alpha, Diagnostics, ThresholdKind, ThresholdResult};
use crate::combine::CombinerKind;
use crate::numerics::{
    delta_shift, delta_shift_scaled, QuadratureSpec, StableLaw, TailLaw, FRAC_2_PI,
};
use crate::{Error, Result};

/// The VWD threshold `b_φ(α)`.
///
/// * PCCT: `T ≥ (c/K) q + c E sin(W/c)` with `q` the upper `α` quantile of
///   `S(1, 1, 1, 0)`, `W` half-Cauchy and `c = cot(1/K)`, the normaliser that
///   makes `K E sin(W/c)` exact for finite `K`.
/// * HMP: `T ≥ q + Δ_H(K)` with `q` from `S(1, 1, π/2, 0)`.
/// * CCT: the standard Cauchy quantile; `b_C(α) = α` for every `K`.
pub fn vwd_threshold(
    kind: CombinerKind,
    k: usize,
    alpha: f64,
    spec: &QuadratureSpec,
) -> Result<ThresholdResult> {
    check_alpha(alpha)?;
    let (stat, mean, delta, q) = match kind {
        CombinerKind::Cct => (cauchy_upper(alpha), alpha, None, None),
        CombinerKind::Pcct | CombinerKind::Hmp => {
            if k < 2 {
                return Err(Error::domain("combination size K (needs K ≥ 2)", k as f64));
            }
            let kf = k as f64;
            if kind == CombinerKind::Pcct {
                let q = StableLaw::pcct_limit().upper_quantile(alpha, spec)?;
                let c = 1.0 / libm::tan(1.0 / kf);
                let delta = delta_shift_scaled(TailLaw::HalfCauchy, c, spec)?;
                let stat = c / kf * q + delta;
                (
                    stat,
                    FRAC_2_PI * libm::atan(1.0 / stat),
                    Some(delta),
                    Some(q),
                )
            } else {
                let q = StableLaw::hmp_limit().upper_quantile(alpha, spec)?;
                let delta = delta_shift(TailLaw::ParetoUnit, k as u64, spec)?;
                let stat = q + delta;
                (stat, 1.0 / stat, Some(delta), Some(q))
            }
        }
        CombinerKind::Bonferroni => {
            return Err(Error::UnsupportedThreshold {
                kind,
                family: ThresholdKind::Vwd,
                hint: "Bonferroni uses its exact rule K p_min < alpha; request the vad family",
            })
        }
    };
    if !(mean > 0.0 && mean < 1.0) {
        return Err(Error::NumericalFailure {
            what: "VWD threshold",
            estimate: mean,
        });
    }
    Ok(ThresholdResult {
        kind,
        family: ThresholdKind::Vwd,
        alpha,
        k: Some(k),
        mean_scale_threshold: mean,
        stat_scale_threshold: stat,
        diagnostics: Diagnostics {
            delta,
            stable_quantile: q,
            ..Diagnostics::default()
        },
    })
}
