//! Centring constants `Δ = K E[sin(W/K)]` of the generalised central limit
//! theorem for totally skewed tail-index-one limits.

use alloc::vec::Vec;

use super::{integrate_breakpoints, QuadratureSpec, TailLaw, FRAC_2_PI, PI};
use crate::{Error, Result};

const MAX_PANELS: usize = 400;
const MIN_PANELS: usize = 8;

/// `Δ = K ∫ sin(x/K) dF(x)` for the half-Cauchy (PCCT) or unit-Pareto (HMP)
/// law of the transformed p-values.
pub fn delta_shift(tail: TailLaw, k: u64, spec: &QuadratureSpec) -> Result<f64> {
    if k == 0 {
        return Err(Error::domain("combination size K", 0.0));
    }
    delta_shift_scaled(tail, k as f64, spec)
}

/// `c ∫ sin(x/c) dF(x)` for a real normaliser `c > 0`.
///
/// After substituting `u = x/c` the integrand is `sin(u) c² f(cu)`, which
/// varies on the scale `1/c` near the origin and then oscillates with period
/// `2π` under a `1/u²` envelope. The head is split geometrically, the tail
/// into half-periods whose alternating partial sums are extrapolated with
/// Wynn's ε-algorithm.
pub fn delta_shift_scaled(tail: TailLaw, scale: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::domain("Δ normaliser", scale));
    }
    let c = scale;
    let (start, weight): (f64, fn(f64, f64) -> f64) = match tail {
        TailLaw::HalfCauchy => (0.0, |u, c| FRAC_2_PI / (u * u + 1.0 / (c * c))),
        TailLaw::ParetoUnit => (1.0 / c, |u, _| 1.0 / (u * u)),
        TailLaw::StandardCauchy => {
            return Err(Error::domain(
                "Δ for the symmetric Cauchy law (it is identically zero)",
                scale,
            ))
        }
    };
    let integrand = |u: f64| libm::sin(u) * weight(u, c);

    let mut total = 0.0;
    if start < PI {
        let mut points = Vec::with_capacity(64);
        points.push(start);
        let mut p = 1.0 / c;
        while p <= start {
            p *= 2.0;
        }
        while p < PI {
            points.push(p);
            p *= 2.0;
        }
        points.push(PI);
        total += integrate_breakpoints(integrand, &points, spec)?.value;
    }

    let first_panel = libm::floor(start / PI).max(1.0) as usize;
    let panel_spec = spec.with_abs_tol(spec.abs_tol() * 1e-3);
    let mut partial = Vec::with_capacity(MAX_PANELS);
    let mut prev_estimate = f64::NAN;
    let mut sum = 0.0;
    for j in first_panel..first_panel + MAX_PANELS {
        let a = (j as f64 * PI).max(start);
        let b = (j + 1) as f64 * PI;
        sum += integrate_breakpoints(integrand, &[a, b], &panel_spec)?.value;
        partial.push(sum);
        if partial.len() < MIN_PANELS {
            continue;
        }
        let estimate = wynn_epsilon(&partial);
        let change = (estimate - prev_estimate).abs();
        if change < 1e-13 * (1.0 + (total + estimate).abs()) {
            return Ok(total + estimate);
        }
        prev_estimate = estimate;
    }
    Err(Error::NumericalFailure {
        what: "Δ tail extrapolation",
        estimate: (wynn_epsilon(&partial) - prev_estimate).abs(),
    })
}

/// Limit estimate of a sequence of partial sums by Wynn's ε-algorithm.
fn wynn_epsilon(sums: &[f64]) -> f64 {
    let n = sums.len();
    // only the most recent terms matter; older ones just add rounding
    let s = &sums[n.saturating_sub(24)..];
    let mut prev: Vec<f64> = alloc::vec![0.0; s.len() + 1];
    let mut cur: Vec<f64> = s.to_vec();
    let mut best = *s.last().unwrap_or(&0.0);
    let mut k = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let diff = cur[i + 1] - cur[i];
            if diff == 0.0 {
                return if k % 2 == 0 { cur[i + 1] } else { best };
            }
            next.push(prev[i + 1] + 1.0 / diff);
        }
        k += 1;
        if k % 2 == 0 {
            if let Some(&v) = next.last() {
                if v.is_finite() {
                    best = v;
                }
            }
        }
        prev = cur;
        cur = next;
    }
    best
}
