//! Combination statistics and their generalised-mean forms.
//!
//! Each non-Bonferroni combiner is a generalised mean
//! `M_φ(p) = ψ((1/K) Σ φ(p_i))` with
//!
//! | kind | φ(p)               | ψ(u)                  |
//! |------|--------------------|-----------------------|
//! | CCT  | tan{(1/2 - p)π}    | 1/2 - arctan(u)/π     |
//! | PCCT | tan{(1/2 - p/2)π}  | 1 - (2/π) arctan(u)   |
//! | HMP  | 1/p                | 1/u                   |
//!
//! The statistic `T` is the mean on the transformed scale; `mean_scale` is
//! `M_φ`, which lives on the p-value scale.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::numerics::{FRAC_2_PI, PI};
use crate::{Error, Result};

/// Validated p-values, each in `(0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PValueVector {
    values: Vec<f64>,
}

impl PValueVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty);
        }
        if let Some((index, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, &p)| !(p > 0.0 && p <= 1.0))
        {
            return Err(Error::InvalidPValue { index, value });
        }
        Ok(Self { values })
    }

    /// Raises p-values below `floor` (including exact zeros) to `floor`.
    /// Values outside `[0, 1]` or NaN are still rejected.
    pub fn sanitized(mut values: Vec<f64>, floor: f64) -> Result<Self> {
        if !(floor > 0.0 && floor < 1.0) {
            return Err(Error::domain("sanitize floor", floor));
        }
        for p in values.iter_mut() {
            if *p >= 0.0 && *p < floor {
                *p = floor;
            }
        }
        Self::new(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The minimum order statistic `p_(1)`.
    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.values
    }
}

pub const DEFAULT_SANITIZE_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CombinerKind {
    Bonferroni,
    Cct,
    Pcct,
    Hmp,
}

impl CombinerKind {
    pub const ALL: [CombinerKind; 4] = [
        CombinerKind::Bonferroni,
        CombinerKind::Cct,
        CombinerKind::Pcct,
        CombinerKind::Hmp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CombinerKind::Bonferroni => "bonferroni",
            CombinerKind::Cct => "cct",
            CombinerKind::Pcct => "pcct",
            CombinerKind::Hmp => "hmp",
        }
    }

    /// `φ(p)`. Not defined for Bonferroni, which is an order-statistic rule.
    pub fn transform(self, p: f64) -> Result<f64> {
        match self {
            CombinerKind::Cct => Ok(cct_term(p)),
            CombinerKind::Pcct => Ok(pcct_term(p)),
            CombinerKind::Hmp => Ok(1.0 / p),
            CombinerKind::Bonferroni => Err(Error::UnsupportedKind {
                kind: self,
                operation: "a p-value transform",
            }),
        }
    }

    /// `ψ(u)`, the inverse of [`transform`](Self::transform).
    pub fn inverse(self, u: f64) -> Result<f64> {
        match self {
            CombinerKind::Cct => Ok(psi_tan(u)),
            CombinerKind::Pcct => Ok(psi_ptan(u)),
            CombinerKind::Hmp => Ok(1.0 / u),
            CombinerKind::Bonferroni => Err(Error::UnsupportedKind {
                kind: self,
                operation: "a p-value transform",
            }),
        }
    }
}

impl fmt::Display for CombinerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CombinerKind {
    type Err = UnknownName;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bonferroni" | "bm" => Ok(CombinerKind::Bonferroni),
            "cct" => Ok(CombinerKind::Cct),
            "pcct" => Ok(CombinerKind::Pcct),
            "hmp" => Ok(CombinerKind::Hmp),
            _ => Err(UnknownName),
        }
    }
}

/// Returned by the `FromStr` impls of the public enums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnknownName;

impl fmt::Display for UnknownName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("unrecognised name")
    }
}

/// Largest double below one; `p = 1` is moved here before the CCT transform,
/// whose pole sits at exactly one.
const ONE_MINUS_ULP: f64 = 1.0 - f64::EPSILON / 2.0;

/// `tan{(1/2 - p)π}`. Written as `±cot` of the distance to the nearer pole so
/// that tiny p (and p close to one) keep full relative precision.
fn cct_term(p: f64) -> f64 {
    if p <= 0.5 {
        1.0 / libm::tan(PI * p)
    } else {
        let q = 1.0 - p.min(ONE_MINUS_ULP);
        -1.0 / libm::tan(PI * q)
    }
}

/// `tan{(1/2 - p/2)π} = cot(πp/2)`.
fn pcct_term(p: f64) -> f64 {
    if p <= 0.5 {
        1.0 / libm::tan(0.5 * PI * p)
    } else {
        libm::tan(PI * (0.5 - 0.5 * p))
    }
}

fn psi_tan(u: f64) -> f64 {
    if u > 0.0 {
        libm::atan(1.0 / u) / PI
    } else {
        0.5 - libm::atan(u) / PI
    }
}

fn psi_ptan(u: f64) -> f64 {
    if u > 0.0 {
        FRAC_2_PI * libm::atan(1.0 / u)
    } else {
        1.0 - FRAC_2_PI * libm::atan(u)
    }
}

const PAIRWISE_BLOCK: usize = 128;

/// Pairwise summation with a fixed leaf size; the result depends only on the
/// input order, never on how callers partition work.
pub(crate) fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= PAIRWISE_BLOCK {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CombinedStatistic {
    pub kind: CombinerKind,
    /// `T`: the transformed-scale mean (`K p_(1)` for Bonferroni).
    pub statistic: f64,
    /// `M_φ` on the p-value scale (`min(K p_(1), 1)` for Bonferroni).
    pub mean_scale: f64,
    pub k: usize,
}

fn transformed_mean(p: &PValueVector, term: fn(f64) -> f64) -> f64 {
    let terms: Vec<f64> = p.values().iter().map(|&x| term(x)).collect();
    pairwise_sum(&terms) / p.len() as f64
}

pub fn combine_cct(p: &PValueVector) -> CombinedStatistic {
    let t = transformed_mean(p, cct_term);
    CombinedStatistic {
        kind: CombinerKind::Cct,
        statistic: t,
        mean_scale: psi_tan(t),
        k: p.len(),
    }
}

pub fn combine_pcct(p: &PValueVector) -> CombinedStatistic {
    let t = transformed_mean(p, pcct_term);
    CombinedStatistic {
        kind: CombinerKind::Pcct,
        statistic: t,
        mean_scale: psi_ptan(t),
        k: p.len(),
    }
}

pub fn combine_hmp(p: &PValueVector) -> CombinedStatistic {
    let t = transformed_mean(p, |x| 1.0 / x);
    CombinedStatistic {
        kind: CombinerKind::Hmp,
        statistic: t,
        mean_scale: 1.0 / t,
        k: p.len(),
    }
}

pub fn combine_bonferroni(p: &PValueVector) -> CombinedStatistic {
    let t = p.len() as f64 * p.min();
    CombinedStatistic {
        kind: CombinerKind::Bonferroni,
        statistic: t,
        mean_scale: t.min(1.0),
        k: p.len(),
    }
}

pub fn combine(p: &PValueVector, kind: CombinerKind) -> CombinedStatistic {
    match kind {
        CombinerKind::Bonferroni => combine_bonferroni(p),
        CombinerKind::Cct => combine_cct(p),
        CombinerKind::Pcct => combine_pcct(p),
        CombinerKind::Hmp => combine_hmp(p),
    }
}

/// Cauchy-tail approximate p-value, `1 - 2 arctan(T)/π` for the PCCT and
/// `1/2 - arctan(T)/π` for the CCT.
///
/// The raw harmonic mean is not a valid p-value, so HMP (and Bonferroni) are
/// refused.
pub fn approx_pvalue(stat: &CombinedStatistic) -> Result<f64> {
    match stat.kind {
        CombinerKind::Cct | CombinerKind::Pcct => Ok(stat.mean_scale.clamp(f64::MIN_POSITIVE, 1.0)),
        kind => Err(Error::UnsupportedKind {
            kind,
            operation: "a Cauchy-approximation p-value",
        }),
    }
}

/// `M_φ(p)` for CCT (`M_tan`), PCCT (`M_ptan`) or HMP (`M_{-1}`).
pub fn generalized_mean(p: &PValueVector, kind: CombinerKind) -> Result<f64> {
    match kind {
        CombinerKind::Bonferroni => Err(Error::UnsupportedKind {
            kind,
            operation: "a generalised mean",
        }),
        _ => Ok(combine(p, kind).mean_scale),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn pv(v: &[f64]) -> PValueVector {
        PValueVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn construction_rejects_bad_values() {
        assert_eq!(PValueVector::new(vec![]), Err(Error::Empty));
        assert_eq!(
            PValueVector::new(vec![0.2, 0.0]),
            Err(Error::InvalidPValue {
                index: 1,
                value: 0.0
            })
        );
        assert!(PValueVector::new(vec![1.5]).is_err());
        assert!(PValueVector::new(vec![f64::NAN]).is_err());
        assert!(PValueVector::new(vec![1.0]).is_ok());
    }

    #[test]
    fn sanitize_floors_zeros_only() {
        let p = PValueVector::sanitized(vec![0.0, 0.5, 1e-320], 1e-300).unwrap();
        assert_eq!(p.values(), &[1e-300, 0.5, 1e-300]);
        assert!(PValueVector::sanitized(vec![-0.1], 1e-300).is_err());
        assert!(PValueVector::sanitized(vec![0.1], 0.0).is_err());
    }

    #[test]
    fn cct_examples() {
        let t = combine_cct(&pv(&[0.001, 0.999])).statistic;
        assert!(t.abs() < 1e-9, "{t}");
        assert!(combine_cct(&pv(&[0.5, 0.5, 0.5])).statistic.abs() < 1e-15);
        assert!((combine_cct(&pv(&[0.25])).statistic - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cct_at_one_is_finite() {
        let s = combine_cct(&pv(&[1.0, 0.3]));
        assert!(s.statistic.is_finite());
        assert!(s.statistic < -1e14);
        assert!(s.mean_scale > 0.99);
    }

    #[test]
    fn pcct_examples() {
        assert!((combine_pcct(&pv(&[0.5, 0.5])).statistic - 1.0).abs() < 1e-15);
        let one = combine_pcct(&pv(&[1.0]));
        assert_eq!(one.statistic, 0.0);
        assert_eq!(one.mean_scale, 1.0);
    }

    #[test]
    fn hmp_examples() {
        let s = combine_hmp(&pv(&[0.1, 0.9]));
        assert!((s.statistic - 50.0 / 9.0).abs() < 1e-13);
        assert!((s.mean_scale - 0.18).abs() < 1e-15);
        assert_eq!(combine_hmp(&pv(&[1.0])).mean_scale, 1.0);
        assert!((combine_hmp(&pv(&[0.3, 0.3, 0.3])).mean_scale - 0.3).abs() < 1e-15);
    }

    #[test]
    fn bonferroni_examples() {
        let s = combine_bonferroni(&pv(&[0.001, 0.999]));
        assert_eq!(s.statistic, 0.002);
        assert!(s.statistic < 0.01);
        assert_eq!(combine_bonferroni(&pv(&[0.5])).statistic, 0.5);
        let s = combine_bonferroni(&pv(&[0.2, 0.4, 0.6, 0.8, 1.0]));
        assert_eq!(s.statistic, 1.0);
        assert_eq!(s.mean_scale, 1.0);
    }

    #[test]
    fn approx_pvalue_examples() {
        let pcct = |t: f64| CombinedStatistic {
            kind: CombinerKind::Pcct,
            statistic: t,
            mean_scale: psi_ptan(t),
            k: 1,
        };
        assert!((approx_pvalue(&pcct(1.0)).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(approx_pvalue(&pcct(0.0)).unwrap(), 1.0);
        let t = libm::tan(0.45 * PI);
        let cct = CombinedStatistic {
            kind: CombinerKind::Cct,
            statistic: t,
            mean_scale: psi_tan(t),
            k: 1,
        };
        assert!((approx_pvalue(&cct).unwrap() - 0.05).abs() < 1e-15);
        let hmp = combine_hmp(&pv(&[0.2]));
        assert!(matches!(
            approx_pvalue(&hmp),
            Err(Error::UnsupportedKind { .. })
        ));
    }

    #[test]
    fn generalized_means() {
        assert!(generalized_mean(&pv(&[0.3]), CombinerKind::Bonferroni).is_err());
        let m = generalized_mean(&pv(&[0.001, 0.999]), CombinerKind::Hmp).unwrap();
        assert!((m - 2.0 / (1000.0 + 1.0 / 0.999)).abs() < 1e-15);
    }

    #[test]
    fn transform_and_inverse_agree() {
        for kind in [CombinerKind::Cct, CombinerKind::Pcct, CombinerKind::Hmp] {
            for p in [1e-12, 0.01, 0.3, 0.5, 0.77, 0.999] {
                let back = kind.inverse(kind.transform(p).unwrap()).unwrap();
                assert!((back - p).abs() <= 1e-12 * p.max(1e-3), "{kind} {p} {back}");
            }
        }
        assert!(CombinerKind::Bonferroni.transform(0.1).is_err());
    }

    #[test]
    fn names_round_trip() {
        for kind in CombinerKind::ALL {
            assert_eq!(kind.name().parse::<CombinerKind>(), Ok(kind));
        }
        assert!("fisher".parse::<CombinerKind>().is_err());
    }

    #[test]
    fn pairwise_sum_matches_naive_for_small_inputs() {
        let xs: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 499_500.0);
    }
}
