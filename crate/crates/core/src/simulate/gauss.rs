use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::combine::{PValueVector, UnknownName, DEFAULT_SANITIZE_FLOOR};
use crate::{Error, Result};

/// Correlation structure of the z-scores. Only the `O(K)` factorisations are
/// used; no covariance matrix is ever built.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CovarianceModel {
    Independent,
    /// `Σ_ij = ρ^|i-j|`, `ρ ∈ (-1, 1)`.
    Ar1 {
        rho: f64,
    },
    /// `Σ = (1 - ρ) I + ρ J`, `ρ ∈ [0, 1]`.
    CompoundSymmetry {
        rho: f64,
    },
}

impl CovarianceModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            CovarianceModel::Independent => Ok(()),
            CovarianceModel::Ar1 { rho } if rho > -1.0 && rho < 1.0 => Ok(()),
            CovarianceModel::Ar1 { rho } => Err(Error::domain("AR(1) ρ (needs -1 < ρ < 1)", rho)),
            CovarianceModel::CompoundSymmetry { rho } if (0.0..=1.0).contains(&rho) => Ok(()),
            CovarianceModel::CompoundSymmetry { rho } => {
                Err(Error::domain("compound-symmetry ρ (needs 0 ≤ ρ ≤ 1)", rho))
            }
        }
    }

    pub fn rho(&self) -> f64 {
        match *self {
            CovarianceModel::Independent => 0.0,
            CovarianceModel::Ar1 { rho } | CovarianceModel::CompoundSymmetry { rho } => rho,
        }
    }
}

/// Overwrites `out` with one draw of `N(μ, Σ)`; `out.len()` is set to
/// `mu.len()`.
pub(crate) fn fill_zscores<R: Rng + ?Sized>(
    cov: &CovarianceModel,
    mu: &[f64],
    rng: &mut R,
    out: &mut Vec<f64>,
) {
    out.clear();
    match *cov {
        CovarianceModel::Independent => {
            out.extend(mu.iter().map(|m| m + rng.sample::<f64, _>(StandardNormal)));
        }
        CovarianceModel::Ar1 { rho } => {
            let innov = libm::sqrt(1.0 - rho * rho);
            let mut prev = 0.0;
            for (i, m) in mu.iter().enumerate() {
                let e: f64 = rng.sample(StandardNormal);
                let x = if i == 0 { e } else { rho * prev + innov * e };
                prev = x;
                out.push(m + x);
            }
        }
        CovarianceModel::CompoundSymmetry { rho } => {
            let shared = libm::sqrt(rho) * rng.sample::<f64, _>(StandardNormal);
            let own = libm::sqrt(1.0 - rho);
            out.extend(
                mu.iter()
                    .map(|m| m + shared + own * rng.sample::<f64, _>(StandardNormal)),
            );
        }
    }
}

/// One draw of `X ~ N(μ, Σ)` with `K = mu.len()`.
pub fn sample_zscores<R: Rng + ?Sized>(
    cov: &CovarianceModel,
    mu: &[f64],
    rng: &mut R,
) -> Result<Vec<f64>> {
    cov.validate()?;
    if mu.is_empty() {
        return Err(Error::Empty);
    }
    let mut out = Vec::with_capacity(mu.len());
    fill_zscores(cov, mu, rng, &mut out);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PValueSide {
    /// `p = 1 - Φ(x)`.
    OneSided,
    /// `p = 2{1 - Φ(|x|)}`.
    TwoSided,
}

impl PValueSide {
    pub fn name(self) -> &'static str {
        match self {
            PValueSide::OneSided => "one-sided",
            PValueSide::TwoSided => "two-sided",
        }
    }

    pub(crate) fn pvalue(self, x: f64) -> f64 {
        let p = match self {
            PValueSide::OneSided => 0.5 * libm::erfc(x * core::f64::consts::FRAC_1_SQRT_2),
            PValueSide::TwoSided => libm::erfc(libm::fabs(x) * core::f64::consts::FRAC_1_SQRT_2),
        };
        p.clamp(DEFAULT_SANITIZE_FLOOR, 1.0)
    }
}

impl fmt::Display for PValueSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PValueSide {
    type Err = UnknownName;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "one-sided" | "one" | "onesided" => Ok(PValueSide::OneSided),
            "two-sided" | "two" | "twosided" => Ok(PValueSide::TwoSided),
            _ => Err(UnknownName),
        }
    }
}

/// Normal-tail p-values, floored at `1e-300`.
pub fn zscores_to_pvalues(x: &[f64], side: PValueSide) -> Result<PValueVector> {
    if let Some((index, &value)) = x.iter().enumerate().find(|(_, v)| v.is_nan()) {
        return Err(Error::InvalidPValue { index, value });
    }
    PValueVector::new(x.iter().map(|&v| side.pvalue(v)).collect())
}
