//! Distribution evaluators and the quadrature/root-finding toolkit the rest of
//! the crate is built on.

mod cms;
mod delta;
mod quad;
mod root;
mod stable;
mod tail;

pub use cms::{cms_draw, cms_stable_sample};
pub use delta::{delta_shift, delta_shift_scaled};
pub use quad::{integrate, integrate_breakpoints, Integral, QuadratureSpec};
pub use root::{find_root, RootBracket};
pub use stable::{stable_cdf, stable_quantile, StableLaw};
pub use tail::TailLaw;

pub(crate) const FRAC_2_PI: f64 = core::f64::consts::FRAC_2_PI;
pub(crate) const PI: f64 = core::f64::consts::PI;
pub(crate) const FRAC_PI_2: f64 = core::f64::consts::FRAC_PI_2;
