use crate::combine::CombinerKind;
use crate::thresholds::ThresholdKind;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("p-value #{index} is {value}; p-values must lie in (0, 1]")]
    InvalidPValue { index: usize, value: f64 },

    #[error("at least one p-value is required")]
    Empty,

    #[error("{what} out of domain: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("{kind} does not support {operation}")]
    UnsupportedKind {
        kind: CombinerKind,
        operation: &'static str,
    },

    #[error("{family} thresholds are not defined for {kind}: {hint}")]
    UnsupportedThreshold {
        kind: CombinerKind,
        family: ThresholdKind,
        hint: &'static str,
    },

    #[error("no sign change on [{lo}, {hi}] (f = {f_lo}, {f_hi})")]
    Bracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("{what} did not converge (error estimate {estimate:e})")]
    NumericalFailure { what: &'static str, estimate: f64 },

    #[error(
        "statistic ({stat_kind}, K = {stat_k}) does not match threshold ({thr_kind}, K = {thr_k})"
    )]
    Mismatch {
        stat_kind: CombinerKind,
        stat_k: usize,
        thr_kind: CombinerKind,
        thr_k: usize,
    },

    #[error("replicate {replicate}: {source}")]
    Replicate {
        replicate: u64,
        #[source]
        source: alloc::boxed::Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64) -> Self {
        Error::Domain { what, value }
    }

    /// True for failures of the numerical machinery rather than bad input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::NumericalFailure { .. } | Error::Bracket { .. } => true,
            Error::Replicate { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}
