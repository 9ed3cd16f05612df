//! Thresholds valid under arbitrary dependence.
//!
//! With `Q(s) = F⁻¹(1 - s)` the upper quantile of a single transformed
//! p-value, let
//!
//! ```text
//! H(x) = (K - 1) Q(α - (K - 1)x) + Q(x),        0 < x < α/K,
//! g(x) = K ∫_x^{α/K} H(t) dt - (α - Kx) H(x).
//! ```
//!
//! `g` is negative near zero and positive below `α/K` (where it also
//! vanishes trivially). Its interior root `x_K` gives the sharp bound
//! `T ≥ H(x_K)/K` on the statistic scale.

use super::{check_alpha, Diagnostics, ThresholdKind, ThresholdResult};
use crate::combine::CombinerKind;
use crate::numerics::{find_root, RootBracket, FRAC_2_PI, FRAC_PI_2, PI};
use crate::{Error, Result};

/// Relative tolerance on `x_K` used by the threshold dispatcher.
pub const DEFAULT_VAD_TOL: f64 = 1e-15;

struct VadProblem {
    kind: CombinerKind,
    k: f64,
    alpha: f64,
}

impl VadProblem {
    fn q(&self, s: f64) -> f64 {
        match self.kind {
            CombinerKind::Pcct => 1.0 / libm::tan(FRAC_PI_2 * s),
            CombinerKind::Cct => 1.0 / libm::tan(PI * s),
            _ => 1.0 / s,
        }
    }

    fn h(&self, x: f64) -> f64 {
        let km1 = self.k - 1.0;
        km1 * self.q(self.alpha - km1 * x) + self.q(x)
    }

    /// `∫_x^{α/K} H(t) dt` in closed form.
    fn integral(&self, x: f64) -> f64 {
        let rest = self.alpha - (self.k - 1.0) * x;
        match self.kind {
            CombinerKind::Pcct => {
                FRAC_2_PI
                    * (libm::log(libm::sin(FRAC_PI_2 * rest)) - libm::log(libm::sin(FRAC_PI_2 * x)))
            }
            CombinerKind::Cct => {
                (libm::log(libm::sin(PI * rest)) - libm::log(libm::sin(PI * x))) / PI
            }
            _ => libm::log(rest) - libm::log(x),
        }
    }

    fn g(&self, x: f64) -> f64 {
        self.k * self.integral(x) - (self.alpha - self.k * x) * self.h(x)
    }

    /// `ψ(H/K)`: back on the generalised-mean scale.
    fn mean_scale(&self, stat: f64) -> f64 {
        match self.kind {
            CombinerKind::Pcct => FRAC_2_PI * libm::atan(1.0 / stat),
            CombinerKind::Cct => {
                if stat > 0.0 {
                    libm::atan(1.0 / stat) / PI
                } else {
                    0.5 - libm::atan(stat) / PI
                }
            }
            _ => 1.0 / stat,
        }
    }
}

/// Smallest dyadic fraction of `α/K` probed before giving up.
const MAX_HALVINGS: i32 = 1000;

/// The VAD threshold `a_φ(α)` for CCT, PCCT or HMP. `tol` is the relative
/// tolerance on the root `x_K`.
pub fn vad_threshold(
    kind: CombinerKind,
    k: usize,
    alpha: f64,
    tol: f64,
) -> Result<ThresholdResult> {
    check_alpha(alpha)?;
    match kind {
        CombinerKind::Pcct | CombinerKind::Hmp => {}
        CombinerKind::Cct if alpha <= 0.5 => {}
        CombinerKind::Cct => {
            return Err(Error::domain(
                "α for the CCT VAD threshold (needs α ≤ 1/2)",
                alpha,
            ))
        }
        CombinerKind::Bonferroni => {
            return Err(Error::UnsupportedThreshold {
                kind,
                family: ThresholdKind::Vad,
                hint: "Bonferroni uses its exact rule K p_min < alpha",
            })
        }
    }
    if k < 2 {
        return Err(Error::domain("combination size K (needs K ≥ 2)", k as f64));
    }
    if !(tol > 0.0 && tol < 1e-3) {
        return Err(Error::domain("VAD root tolerance", tol));
    }
    let problem = VadProblem {
        kind,
        k: k as f64,
        alpha,
    };
    let top = alpha / problem.k;

    // Walk down the dyadic grid α/K 2^{-j} until g turns negative.
    let mut lo = 0.5 * top;
    let mut g_lo = problem.g(lo);
    let mut j = 1;
    while !(g_lo < 0.0) {
        if g_lo.is_nan() || j >= MAX_HALVINGS || lo == 0.0 {
            return Err(Error::Bracket {
                lo,
                hi: top,
                f_lo: g_lo,
                f_hi: problem.g(top),
            });
        }
        lo *= 0.5;
        g_lo = problem.g(lo);
        j += 1;
    }
    // For j = 1 the upper end would be α/K itself, where g is zero; bisect
    // the upper half until g is positive there.
    let mut hi = 2.0 * lo;
    if j == 1 {
        let mut step = 0.5 * lo;
        hi = lo + step;
        while !(problem.g(hi) > 0.0) {
            step *= 0.5;
            hi = lo + step;
            if step < lo * f64::EPSILON {
                return Err(Error::Bracket {
                    lo,
                    hi: top,
                    f_lo: g_lo,
                    f_hi: problem.g(top),
                });
            }
        }
    }
    let x_k = find_root(|x| problem.g(x), RootBracket::new(lo, hi)?, tol * lo)?;
    if !(x_k > 0.0 && x_k < top) {
        return Err(Error::NumericalFailure {
            what: "VAD root outside (0, α/K)",
            estimate: x_k,
        });
    }
    // g balances two terms of size K ∫H; report |g| on that scale
    let scale = problem.k * problem.integral(x_k);
    let residual = libm::fabs(problem.g(x_k)) / scale;
    let stat = problem.h(x_k) / problem.k;
    let mean = problem.mean_scale(stat);
    if !(mean > 0.0 && mean <= alpha) || !stat.is_finite() {
        return Err(Error::NumericalFailure {
            what: "VAD threshold",
            estimate: mean,
        });
    }
    Ok(ThresholdResult {
        kind,
        family: ThresholdKind::Vad,
        alpha,
        k: Some(k),
        mean_scale_threshold: mean,
        stat_scale_threshold: stat,
        diagnostics: Diagnostics {
            x_k: Some(x_k),
            residual: Some(residual),
            bracket_residual: Some(libm::fabs(g_lo) / scale),
            ..Diagnostics::default()
        },
    })
}

/// The quick estimate `α / (1.62 ln K)` of the PCCT VAD threshold, usable for
/// `K ≥ 100`. Call [`vad_threshold`] for smaller `K` or exact values.
pub fn vad_threshold_approx(k: usize, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if k < 100 {
        return Err(Error::domain(
            "K for the quick VAD estimate (needs K ≥ 100; call vad_threshold)",
            k as f64,
        ));
    }
    Ok(alpha / (1.62 * libm::log(k as f64)))
}
