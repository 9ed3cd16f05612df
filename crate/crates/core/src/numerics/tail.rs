use super::{FRAC_2_PI, FRAC_PI_2, PI};

/// Laws of the transformed p-values `φ(U)` for uniform `U`.
///
/// * `StandardCauchy`: `tan{(1/2 - U)π}`, the CCT summand.
/// * `HalfCauchy`: `tan{(1/2 - U/2)π}`, the PCCT summand, with `F(x) = 2 arctan(x)/π`.
/// * `ParetoUnit`: `1/U`, the HMP summand, with `F(x) = 1 - 1/x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TailLaw {
    StandardCauchy,
    HalfCauchy,
    ParetoUnit,
}

impl TailLaw {
    pub fn cdf(self, x: f64) -> f64 {
        match self {
            TailLaw::StandardCauchy if x < 0.0 => libm::atan(-1.0 / x) / PI,
            TailLaw::StandardCauchy => 0.5 + libm::atan(x) / PI,
            TailLaw::HalfCauchy if x <= 0.0 => 0.0,
            TailLaw::HalfCauchy => FRAC_2_PI * libm::atan(x),
            TailLaw::ParetoUnit if x <= 1.0 => 0.0,
            TailLaw::ParetoUnit => 1.0 - 1.0 / x,
        }
    }

    /// `1 - cdf(x)`, evaluated without cancellation in the right tail.
    pub fn sf(self, x: f64) -> f64 {
        match self {
            TailLaw::StandardCauchy if x > 0.0 => libm::atan(1.0 / x) / PI,
            TailLaw::StandardCauchy => 0.5 - libm::atan(x) / PI,
            TailLaw::HalfCauchy if x <= 0.0 => 1.0,
            TailLaw::HalfCauchy => FRAC_2_PI * libm::atan(1.0 / x),
            TailLaw::ParetoUnit if x <= 1.0 => 1.0,
            TailLaw::ParetoUnit => 1.0 / x,
        }
    }

    pub fn quantile(self, u: f64) -> f64 {
        match self {
            TailLaw::StandardCauchy if u < 0.5 => -1.0 / libm::tan(PI * u),
            TailLaw::StandardCauchy => libm::tan(PI * (u - 0.5)),
            TailLaw::HalfCauchy => libm::tan(FRAC_PI_2 * u),
            TailLaw::ParetoUnit => 1.0 / (1.0 - u),
        }
    }

    /// `quantile(1 - s)`, accurate for small upper-tail mass `s`.
    pub fn upper_quantile(self, s: f64) -> f64 {
        match self {
            TailLaw::StandardCauchy if s <= 0.5 => 1.0 / libm::tan(PI * s),
            TailLaw::StandardCauchy => libm::tan(PI * (0.5 - s)),
            TailLaw::HalfCauchy => 1.0 / libm::tan(FRAC_PI_2 * s),
            TailLaw::ParetoUnit => 1.0 / s,
        }
    }

    pub fn density(self, x: f64) -> f64 {
        match self {
            TailLaw::StandardCauchy => 1.0 / (PI * (1.0 + x * x)),
            TailLaw::HalfCauchy if x < 0.0 => 0.0,
            TailLaw::HalfCauchy => FRAC_2_PI / (1.0 + x * x),
            TailLaw::ParetoUnit if x < 1.0 => 0.0,
            TailLaw::ParetoUnit => 1.0 / (x * x),
        }
    }

    /// `c` in `1 - F(x) ~ c / x`.
    pub fn tail_constant(self) -> f64 {
        match self {
            TailLaw::StandardCauchy => 1.0 / PI,
            TailLaw::HalfCauchy => FRAC_2_PI,
            TailLaw::ParetoUnit => 1.0,
        }
    }

    /// Left end of the support (`-inf` for the symmetric law).
    pub fn support_min(self) -> f64 {
        match self {
            TailLaw::StandardCauchy => f64::NEG_INFINITY,
            TailLaw::HalfCauchy => 0.0,
            TailLaw::ParetoUnit => 1.0,
        }
    }
}
