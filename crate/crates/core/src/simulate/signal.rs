use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::combine::UnknownName;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignalPattern {
    Null,
    /// Two 5% blocks: `1..=⌊0.05K⌋` and `⌊0.5K⌋+1..=⌊0.55K⌋+1` (1-based).
    Sparse,
    Dense,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignMode {
    AllPositive,
    /// The first half of the signal coordinates (rounded up) positive, the
    /// rest negative.
    HalfNegative,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalConfig {
    pub pattern: SignalPattern,
    pub strength: f64,
    pub sign_mode: SignMode,
}

impl SignalConfig {
    pub const NULL: SignalConfig = SignalConfig {
        pattern: SignalPattern::Null,
        strength: 0.0,
        sign_mode: SignMode::AllPositive,
    };

    pub fn validate(&self) -> Result<()> {
        if !(self.strength >= 0.0 && self.strength.is_finite()) {
            return Err(Error::domain("signal strength c0", self.strength));
        }
        Ok(())
    }

    /// Zero-based indices of the non-zero means, ascending.
    pub fn signal_indices(&self, k: usize) -> Vec<usize> {
        match self.pattern {
            SignalPattern::Null => Vec::new(),
            SignalPattern::Dense => (0..k).collect(),
            SignalPattern::Sparse => {
                let kf = k as f64;
                let first = libm::floor(0.05 * kf) as usize;
                let lo = libm::floor(0.5 * kf) as usize + 1;
                let hi = (libm::floor(0.55 * kf) as usize + 1).min(k);
                let mut idx: Vec<usize> = (1..=first.min(k)).collect();
                idx.extend((lo.max(first + 1)..=hi).filter(|&i| i <= k));
                idx.into_iter().map(|i| i - 1).collect()
            }
        }
    }

    pub fn mean_vector(&self, k: usize) -> Result<Vec<f64>> {
        self.validate()?;
        let mut mu = vec![0.0; k];
        let idx = self.signal_indices(k);
        let positive = match self.sign_mode {
            SignMode::AllPositive => idx.len(),
            SignMode::HalfNegative => idx.len().div_ceil(2),
        };
        for (n, &i) in idx.iter().enumerate() {
            mu[i] = if n < positive {
                self.strength
            } else {
                -self.strength
            };
        }
        Ok(mu)
    }
}

impl SignalPattern {
    pub fn name(self) -> &'static str {
        match self {
            SignalPattern::Null => "null",
            SignalPattern::Sparse => "sparse",
            SignalPattern::Dense => "dense",
        }
    }
}

impl SignMode {
    pub fn name(self) -> &'static str {
        match self {
            SignMode::AllPositive => "all-positive",
            SignMode::HalfNegative => "half-negative",
        }
    }
}

impl fmt::Display for SignalPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for SignMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SignalPattern {
    type Err = UnknownName;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "null" => Ok(SignalPattern::Null),
            "sparse" => Ok(SignalPattern::Sparse),
            "dense" => Ok(SignalPattern::Dense),
            _ => Err(UnknownName),
        }
    }
}

impl FromStr for SignMode {
    type Err = UnknownName;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "all-positive" | "positive" => Ok(SignMode::AllPositive),
            "half-negative" => Ok(SignMode::HalfNegative),
            _ => Err(UnknownName),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(pattern: SignalPattern, sign_mode: SignMode) -> SignalConfig {
        SignalConfig {
            pattern,
            strength: 2.0,
            sign_mode,
        }
    }

    #[test]
    fn sparse_blocks_for_k_1000() {
        let idx = cfg(SignalPattern::Sparse, SignMode::AllPositive).signal_indices(1000);
        assert_eq!(idx.len(), 101);
        assert_eq!(idx[0], 0);
        assert_eq!(idx[49], 49);
        assert_eq!(idx[50], 500);
        assert_eq!(*idx.last().unwrap(), 550);
    }

    #[test]
    fn sparse_small_k_stays_in_range() {
        for k in 1..60 {
            let idx = cfg(SignalPattern::Sparse, SignMode::AllPositive).signal_indices(k);
            assert!(idx.iter().all(|&i| i < k));
            assert!(idx.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn half_negative_splits_signal_coordinates() {
        let mu = cfg(SignalPattern::Sparse, SignMode::HalfNegative)
            .mean_vector(1000)
            .unwrap();
        assert_eq!(mu.iter().filter(|&&m| m > 0.0).count(), 51);
        assert_eq!(mu.iter().filter(|&&m| m < 0.0).count(), 50);
        assert_eq!(mu[0], 2.0);
        assert_eq!(mu[550], -2.0);
        let dense = cfg(SignalPattern::Dense, SignMode::HalfNegative)
            .mean_vector(10)
            .unwrap();
        assert_eq!(dense[4], 2.0);
        assert_eq!(dense[5], -2.0);
    }

    #[test]
    fn null_is_zero() {
        let mu = SignalConfig::NULL.mean_vector(7).unwrap();
        assert!(mu.iter().all(|&m| m == 0.0));
        let bad = SignalConfig {
            strength: -1.0,
            ..SignalConfig::NULL
        };
        assert!(bad.mean_vector(3).is_err());
    }
}
