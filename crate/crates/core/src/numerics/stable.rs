//! Stable laws with tail index one.
//!
//! Parameterisation: `S(1, β, γ, δ)` has characteristic function
//! `exp{iδt - γ|t|(1 + iβ sign(t) (2/π) ln|t|)}`. The limit of the centred
//! PCCT statistic is `S(1, 1, 1, 0)`; the HMP limit is `S(1, 1, π/2, 0)`.
//!
//! The CDF for `β ≠ 0` is evaluated from Zolotarev's integral form of the
//! inverted characteristic function (as organised by Nolan), which is a smooth
//! monotone integrand on a finite interval rather than an oscillatory one.
//! `β = 0` is the Cauchy law and has a closed form.

use core::cell::RefCell;

use super::{
    find_root, integrate_breakpoints, QuadratureSpec, RootBracket, FRAC_2_PI, FRAC_PI_2, PI,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableLaw {
    alpha: f64,
    beta: f64,
    gamma: f64,
    delta: f64,
}

impl StableLaw {
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        if alpha != 1.0 {
            return Err(Error::domain(
                "stable tail index (only 1 is supported)",
                alpha,
            ));
        }
        if !(-1.0..=1.0).contains(&beta) {
            return Err(Error::domain("stable skewness", beta));
        }
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::domain("stable scale", gamma));
        }
        if !delta.is_finite() {
            return Err(Error::domain("stable location", delta));
        }
        Ok(Self {
            alpha,
            beta,
            gamma,
            delta,
        })
    }

    /// `S(1, 1, 1, 0)`, the weak-dependence limit of `T_PCCT - Δ_P`.
    pub const fn pcct_limit() -> Self {
        Self {
            alpha: 1.0,
            beta: 1.0,
            gamma: 1.0,
            delta: 0.0,
        }
    }

    /// `S(1, 1, π/2, 0)`, the weak-dependence limit of `T_HMP - Δ_H`.
    pub const fn hmp_limit() -> Self {
        Self {
            alpha: 1.0,
            beta: 1.0,
            gamma: FRAC_PI_2,
            delta: 0.0,
        }
    }

    /// `S(1, 0, 1, 0)`, the standard Cauchy law.
    pub const fn cauchy() -> Self {
        Self {
            alpha: 1.0,
            beta: 0.0,
            gamma: 1.0,
            delta: 0.0,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Maps `x` to the `S(1, β, 1, 0)` scale. For tail index one a change of
    /// scale also moves the location by `(2/π) β γ ln γ`.
    pub(crate) fn standardize(&self, x: f64) -> f64 {
        (x - self.delta - FRAC_2_PI * self.beta * self.gamma * libm::log(self.gamma)) / self.gamma
    }

    pub(crate) fn unstandardize(&self, z: f64) -> f64 {
        self.gamma * z + self.delta + FRAC_2_PI * self.beta * self.gamma * libm::log(self.gamma)
    }

    pub fn cdf(&self, x: f64, spec: &QuadratureSpec) -> Result<f64> {
        if x.is_nan() {
            return Err(Error::domain("stable cdf argument", x));
        }
        let z = self.standardize(x);
        let (beta, z) = if self.beta < 0.0 {
            (-self.beta, -z)
        } else {
            (self.beta, z)
        };
        let lower = if beta == 0.0 {
            0.5 + libm::atan(z) / PI
        } else if z <= 0.0 {
            zolotarev(z, beta, Tail::Lower, spec)?
        } else {
            1.0 - zolotarev(z, beta, Tail::Upper, spec)?
        };
        // reflected laws swap the tails
        Ok(if self.beta < 0.0 { 1.0 - lower } else { lower }.clamp(0.0, 1.0))
    }

    /// `1 - cdf(x)`, computed directly so right-tail values keep their
    /// relative precision.
    pub fn sf(&self, x: f64, spec: &QuadratureSpec) -> Result<f64> {
        if x.is_nan() {
            return Err(Error::domain("stable sf argument", x));
        }
        if self.beta < 0.0 {
            // -X ~ S(1, -β, γ, -δ)
            let mirrored = Self {
                beta: -self.beta,
                delta: -self.delta,
                ..*self
            };
            return mirrored.cdf(-x, spec);
        }
        let z = self.standardize(x);
        let upper = if self.beta == 0.0 {
            if z > 0.0 {
                libm::atan(1.0 / z) / PI
            } else {
                0.5 - libm::atan(z) / PI
            }
        } else if z > 0.0 {
            zolotarev(z, self.beta, Tail::Upper, spec)?
        } else {
            1.0 - zolotarev(z, self.beta, Tail::Lower, spec)?
        };
        Ok(upper.clamp(0.0, 1.0))
    }

    pub fn quantile(&self, u: f64, spec: &QuadratureSpec) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::domain("stable quantile level", u));
        }
        if u > 0.5 {
            return self.upper_quantile(1.0 - u, spec);
        }
        if self.beta == 0.0 {
            return Ok(self.unstandardize(libm::tan(PI * (u - 0.5))));
        }
        let guess = self.unstandardize(libm::tan(PI * (u - 0.5)));
        solve_monotone(
            |x| self.cdf(x, spec).map(|p| p - u),
            guess,
            self.gamma,
            spec,
        )
    }

    /// The `1 - s` quantile, for upper-tail mass `s` in `(0, 1)`.
    pub fn upper_quantile(&self, s: f64, spec: &QuadratureSpec) -> Result<f64> {
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::domain("stable upper-tail mass", s));
        }
        if self.beta == 0.0 {
            let z = if s <= 0.5 {
                1.0 / libm::tan(PI * s)
            } else {
                libm::tan(PI * (0.5 - s))
            };
            return Ok(self.unstandardize(z));
        }
        let guess = if self.beta > 0.0 && s < 0.25 {
            self.unstandardize(tail_guess(s, self.beta))
        } else {
            self.unstandardize(libm::tan(PI * (0.5 - s)))
        };
        // sf is decreasing, so solve s - sf(x) = 0 which is increasing
        solve_monotone(|x| self.sf(x, spec).map(|p| s - p), guess, self.gamma, spec)
    }
}

/// Right-tail approximation `y + (2β/π) ln y` with `y = (1 + β)/(π s)`,
/// which for `β = 1` is the classical `y = 2/(π s)` expansion.
pub(crate) fn tail_guess(s: f64, beta: f64) -> f64 {
    let y = (1.0 + beta) / (PI * s);
    y + FRAC_2_PI * beta * libm::log(y)
}

/// Root of an increasing function given a starting guess: expand a bracket
/// geometrically around the guess, then refine with Brent.
fn solve_monotone<F>(mut f: F, guess: f64, scale: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let failure = RefCell::new(None);
    let mut eval = |x: f64| match f(x) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    let step0 = scale.max(1e-3 * guess.abs());
    let (mut lo, mut hi) = (guess - step0, guess + step0);
    let (mut f_lo, mut f_hi) = (eval(lo), eval(hi));
    let mut step = step0;
    let mut expansions = 0;
    while !(f_lo <= 0.0 && f_hi >= 0.0) {
        if f_lo.is_nan() || f_hi.is_nan() || expansions > 200 {
            if let Some(e) = failure.take() {
                return Err(e);
            }
            return Err(Error::Bracket { lo, hi, f_lo, f_hi });
        }
        step *= 2.0;
        if f_lo > 0.0 {
            hi = lo;
            f_hi = f_lo;
            lo -= step;
            f_lo = eval(lo);
        } else {
            lo = hi;
            f_lo = f_hi;
            hi += step;
            f_hi = eval(hi);
        }
        expansions += 1;
    }
    // A loose first pass locates the root; the second pass uses a tolerance
    // relative to it rather than to the (possibly distant) guess.
    let coarse_tol = spec.abs_tol().max(1e-6 * (hi - lo));
    let coarse = find_root(&mut eval, RootBracket::new(lo, hi)?, coarse_tol);
    let coarse = match (coarse, failure.take()) {
        (_, Some(e)) => return Err(e),
        (r, None) => r?,
    };
    let tol = spec.abs_tol().max(spec.rel_tol() * coarse.abs());
    if tol >= coarse_tol {
        return Ok(coarse);
    }
    let (a, b) = (
        (coarse - 2.0 * coarse_tol).max(lo),
        (coarse + 2.0 * coarse_tol).min(hi),
    );
    let root = find_root(&mut eval, RootBracket::new(a, b)?, tol);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    root
}

/// Geometric breakpoints placed on each side of the exponent's root.
const LAYER_POINTS: usize = 30;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Tail {
    Lower,
    Upper,
}

/// `ln V(φ)` for the shifted angle `φ = θ + π/2 ∈ (0, π)`, `β ∈ (0, 1]`.
fn log_v(phi: f64, beta: f64) -> f64 {
    let s = libm::sin(phi);
    let c = libm::cos(phi);
    let a = FRAC_PI_2 * (1.0 - beta) + beta * phi;
    libm::log(FRAC_2_PI * a / s) - a * c / (s * beta)
}

/// One tail probability of `S(1, β, 1, 0)` for `β ∈ (0, 1]` by Zolotarev's
/// integral:
///
/// `F(z) = (1/π) ∫_0^π exp(-exp(-πz/(2β)) V(φ)) dφ`.
fn zolotarev(z: f64, beta: f64, tail: Tail, spec: &QuadratureSpec) -> Result<f64> {
    let shift = -PI * z / (2.0 * beta);
    let exponent = move |phi: f64| {
        let e = shift + log_v(phi, beta);
        if e.is_nan() {
            // ±inf - ±inf only happens pinned against an endpoint
            if phi < FRAC_PI_2 {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        } else {
            e
        }
    };
    let integrand = move |phi: f64| {
        let m = libm::exp(exponent(phi));
        match tail {
            Tail::Lower => libm::exp(-m),
            Tail::Upper => -libm::expm1(-m),
        }
    };

    // The integrand switches from ~1 to ~0 (or back) where the exponent
    // crosses zero; seeding a breakpoint there keeps the quadrature cheap.
    // The transition can be far narrower than the interval, so breakpoints
    // also close in on it geometrically from both sides.
    let eps = 1e-12;
    let (e_lo, e_hi) = (exponent(eps), exponent(PI - eps));
    let mut points = [0.0; 2 * LAYER_POINTS + 3];
    let n = if e_lo < 0.0 && e_hi > 0.0 {
        let split = find_root(exponent, RootBracket::new(eps, PI - eps)?, 1e-15)?;
        let mut n = 0;
        let mut d = 1.0;
        for _ in 0..LAYER_POINTS {
            d *= 0.5;
            points[n] = split * (1.0 - d);
            n += 1;
        }
        points[n] = split;
        n += 1;
        for _ in 0..LAYER_POINTS {
            points[n] = split + (PI - split) * d;
            d *= 2.0;
            n += 1;
        }
        points.copy_within(0..n, 1);
        points[0] = 0.0;
        points[n + 1] = PI;
        n + 2
    } else {
        points[1] = PI;
        2
    };
    let spec = spec.with_abs_tol(spec.abs_tol() * 1e-3);
    let r = integrate_breakpoints(integrand, &points[..n], &spec)?;
    Ok(r.value / PI)
}

/// CDF of `S(1, β, γ, δ)` at `x`.
pub fn stable_cdf(law: &StableLaw, x: f64, spec: &QuadratureSpec) -> Result<f64> {
    law.cdf(x, spec)
}

/// Quantile of `S(1, β, γ, δ)` at level `u ∈ (0, 1)`.
pub fn stable_quantile(law: &StableLaw, u: f64, spec: &QuadratureSpec) -> Result<f64> {
    law.quantile(u, spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn constructor_rejects_bad_parameters() {
        assert!(StableLaw::new(1.5, 0.0, 1.0, 0.0).is_err());
        assert!(StableLaw::new(1.0, 1.5, 1.0, 0.0).is_err());
        assert!(StableLaw::new(1.0, 0.0, 0.0, 0.0).is_err());
        assert!(StableLaw::new(1.0, 0.0, 1.0, f64::NAN).is_err());
        assert!(StableLaw::new(1.0, -1.0, 2.0, 3.0).is_ok());
    }

    #[test]
    fn cauchy_reduction() {
        let law = StableLaw::cauchy();
        assert_eq!(law.cdf(0.0, &spec()).unwrap(), 0.5);
        assert!((law.cdf(1.0, &spec()).unwrap() - 0.75).abs() < 1e-15);
        assert!((law.quantile(0.75, &spec()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn near_cauchy_matches_closed_form() {
        // tiny skewness goes through the integral path
        let law = StableLaw::new(1.0, 1e-9, 1.0, 0.0).unwrap();
        for x in [-100.0, -3.0, -0.5, 0.0, 0.7, 4.0, 100.0] {
            let f = law.cdf(x, &spec()).unwrap();
            let c = 0.5 + libm::atan(x) / PI;
            assert!((f - c).abs() < 1e-8, "{x} {f} {c}");
        }
    }

    #[test]
    fn cdf_is_monotone_and_bounded() {
        let law = StableLaw::pcct_limit();
        let mut prev = 0.0;
        for i in 0..400 {
            let x = -8.0 + i as f64 * 0.25;
            let f = law.cdf(x, &spec()).unwrap();
            assert!((0.0..=1.0).contains(&f));
            assert!(f >= prev - 1e-13, "{x}: {f} < {prev}");
            prev = f;
        }
    }

    #[test]
    fn cdf_and_sf_complement() {
        for law in [
            StableLaw::pcct_limit(),
            StableLaw::hmp_limit(),
            StableLaw::new(1.0, -0.5, 2.0, 1.0).unwrap(),
        ] {
            for x in [-20.0, -2.0, 0.0, 1.0, 3.0, 50.0] {
                let total = law.cdf(x, &spec()).unwrap() + law.sf(x, &spec()).unwrap();
                assert!((total - 1.0).abs() < 1e-10, "{law:?} {x} {total}");
            }
        }
    }

    #[test]
    fn negative_skew_mirrors_positive() {
        let pos = StableLaw::new(1.0, 0.6, 1.3, 0.0).unwrap();
        let neg = StableLaw::new(1.0, -0.6, 1.3, 0.0).unwrap();
        // -X ~ S(1, -β, γ, -δ)
        for x in [-5.0, -1.0, 0.5, 2.0] {
            let a = neg.cdf(x, &spec()).unwrap();
            let b = pos.sf(-x, &spec()).unwrap();
            assert!((a - b).abs() < 1e-10, "{x} {a} {b}");
        }
    }

    #[test]
    fn tail_formula_point() {
        let y = 2.0 / (PI * 0.01);
        let x = y + FRAC_2_PI * libm::log(y);
        let f = StableLaw::pcct_limit().cdf(x, &spec()).unwrap();
        assert!((f - 0.99).abs() < 1e-3, "{f}");
    }

    #[test]
    fn quantile_round_trip() {
        let law = StableLaw::pcct_limit();
        let m = law.quantile(0.5, &spec()).unwrap();
        assert!((law.cdf(m, &spec()).unwrap() - 0.5).abs() < 1e-8);
        for u in [1e-4, 0.01, 0.3, 0.9, 0.999, 1.0 - 1e-6] {
            let q = law.quantile(u, &spec()).unwrap();
            let back = law.cdf(q, &spec()).unwrap();
            assert!(
                (back - u).abs() < 1e-9 * u.min(1.0 - u).max(1e-3),
                "{u} {q} {back}"
            );
        }
    }

    #[test]
    fn upper_quantile_near_tail_expansion() {
        let q = StableLaw::pcct_limit().quantile(0.999, &spec()).unwrap();
        let y = 2.0 / (0.001 * PI);
        let approx = y + FRAC_2_PI * libm::log(y);
        assert!((q / approx - 1.0).abs() < 0.01, "{q} {approx}");
    }

    #[test]
    fn quantile_domain() {
        let law = StableLaw::pcct_limit();
        assert!(law.quantile(0.0, &spec()).is_err());
        assert!(law.quantile(1.0, &spec()).is_err());
        assert!(law.quantile(f64::NAN, &spec()).is_err());
    }
}
