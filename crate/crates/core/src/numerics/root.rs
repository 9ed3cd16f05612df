use crate::{Error, Result};

/// A closed interval `[lo, hi]` expected to contain a sign change.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootBracket {
    lo: f64,
    hi: f64,
}

impl RootBracket {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::domain(
                "bracket endpoint",
                if lo.is_finite() { hi } else { lo },
            ));
        }
        if !(lo < hi) {
            return Err(Error::domain("bracket width", hi - lo));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }
}

const MAX_ITER: usize = 500;

/// Brent's method on a bracket with a sign change (or an exact zero at an
/// endpoint). Terminates once the bracket has shrunk below `tol`.
pub fn find_root<F: FnMut(f64) -> f64>(mut f: F, bracket: RootBracket, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::domain("root tolerance", tol));
    }
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.is_nan() || fb.is_nan() || (fa > 0.0) == (fb > 0.0) {
        return Err(Error::Bracket {
            lo: a,
            hi: b,
            f_lo: fa,
            f_hi: fb,
        });
    }

    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_ITER {
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
        if fb.is_nan() {
            return Err(Error::NumericalFailure {
                what: "root finding (NaN objective)",
                estimate: (c - b).abs(),
            });
        }
    }
    Err(Error::NumericalFailure {
        what: "root finding",
        estimate: (c - b).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::TailLaw;
    use core::f64::consts::PI;

    #[test]
    fn linear() {
        let x = find_root(|x| x - 2.0, RootBracket::new(0.0, 5.0).unwrap(), 1e-14).unwrap();
        assert!((x - 2.0).abs() < 1e-13);
    }

    #[test]
    fn cosine() {
        let x = find_root(libm::cos, RootBracket::new(1.0, 2.0).unwrap(), 1e-15).unwrap();
        assert!((x - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn half_cauchy_inverse() {
        let x = find_root(
            |x| TailLaw::HalfCauchy.cdf(x) - 0.9,
            RootBracket::new(0.0, 100.0).unwrap(),
            1e-13,
        )
        .unwrap();
        let expected = libm::tan(0.45 * PI);
        assert!((x - expected).abs() < 1e-11 * expected);
    }

    #[test]
    fn endpoint_zero() {
        let x = find_root(|x| x, RootBracket::new(0.0, 1.0).unwrap(), 1e-12).unwrap();
        assert_eq!(x, 0.0);
    }

    #[test]
    fn invalid_brackets() {
        assert!(RootBracket::new(1.0, 1.0).is_err());
        assert!(RootBracket::new(2.0, 1.0).is_err());
        let err = find_root(|x| x * x + 1.0, RootBracket::new(-1.0, 1.0).unwrap(), 1e-12);
        assert!(matches!(err, Err(Error::Bracket { .. })));
    }

    #[test]
    fn deterministic() {
        let run = || {
            find_root(
                |x| libm::exp(x) - 3.0,
                RootBracket::new(0.0, 2.0).unwrap(),
                1e-13,
            )
        };
        assert_eq!(run().unwrap().to_bits(), run().unwrap().to_bits());
    }
}
