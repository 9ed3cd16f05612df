use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Exp1, Open01};

use super::{StableLaw, FRAC_2_PI, FRAC_PI_2, PI};

/// One Chambers-Mallows-Stuck draw from `S(1, β, γ, δ)`.
pub fn cms_draw<R: Rng + ?Sized>(law: &StableLaw, rng: &mut R) -> f64 {
    let u: f64 = rng.sample(Open01);
    let w = PI * (u - 0.5);
    let e: f64 = rng.sample(Exp1);
    let beta = law.beta();
    let a = FRAC_PI_2 + beta * w;
    let z = FRAC_2_PI * (a * libm::tan(w) - beta * libm::log(FRAC_PI_2 * e * libm::cos(w) / a));
    law.unstandardize(z)
}

/// `n` independent draws; the sampler is only used as an oracle for the
/// numerical CDF.
pub fn cms_stable_sample<R: Rng + ?Sized>(law: &StableLaw, rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| cms_draw(law, rng)).collect()
}
