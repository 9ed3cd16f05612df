//! Numerical kernels against values computed independently (mpmath
//! quadrature of the closed forms, Gil-Pelaez inversion of the stable
//! characteristic function).

use std::f64::consts::PI;

use pcombine_core::{
    delta_shift, find_root, stable_cdf, stable_quantile, QuadratureSpec, RootBracket, StableLaw,
    TailLaw,
};

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn law(beta: f64, gamma: f64) -> StableLaw {
    StableLaw::new(1.0, beta, gamma, 0.0).unwrap()
}

fn close(got: f64, want: f64, rel: f64) {
    assert!(
        ((got - want) / want).abs() <= rel,
        "got {got}, want {want} (rel tol {rel})"
    );
}

// ∫₀^∞ sin(x) 2/(π(1+x²)) dx = (e⁻¹ Ei(1) - e Ei(-1)) / π
const DELTA_HALF_CAUCHY_1: f64 = 0.411_740_918_759_851;
// ∫₁^∞ sin(x)/x² dx = sin 1 - Ci(1)
const DELTA_PARETO_1: f64 = 0.504_067_061_906_928;

#[test]
fn delta_closed_forms() {
    close(
        delta_shift(TailLaw::HalfCauchy, 1, &spec()).unwrap(),
        DELTA_HALF_CAUCHY_1,
        1e-9,
    );
    close(
        delta_shift(TailLaw::ParetoUnit, 1, &spec()).unwrap(),
        DELTA_PARETO_1,
        1e-9,
    );
}

#[test]
fn delta_large_k_matches_expansion() {
    // K E[sin(W/K)] = (2/π)(ln K + 1 - γ_E) + O(ln K / K²) for the half-Cauchy law,
    // and ln K + 1 - γ_E for the unit Pareto law.
    let euler = 0.577_215_664_901_532_9;
    for k in [10_000u64, 1_000_000, 100_000_000] {
        let lk = (k as f64).ln();
        let p = delta_shift(TailLaw::HalfCauchy, k, &spec()).unwrap();
        close(p, 2.0 / PI * (lk + 1.0 - euler), 1e-6);
        let h = delta_shift(TailLaw::ParetoUnit, k, &spec()).unwrap();
        close(h, lk + 1.0 - euler, 1e-6);
    }
    close(
        delta_shift(TailLaw::HalfCauchy, 100_000_000, &spec()).unwrap(),
        11.996_122_449_241_85,
        1e-10,
    );
}

#[test]
fn delta_rejects_symmetric_law_and_zero() {
    assert!(delta_shift(TailLaw::StandardCauchy, 5, &spec()).is_err());
    assert!(delta_shift(TailLaw::HalfCauchy, 0, &spec()).is_err());
}

#[test]
fn symmetric_stable_is_cauchy() {
    let c = law(0.0, 1.0);
    assert!((stable_cdf(&c, 0.0, &spec()).unwrap() - 0.5).abs() < 1e-12);
    assert!((stable_cdf(&c, 1.0, &spec()).unwrap() - 0.75).abs() < 1e-10);
    for x in [-30.0f64, -2.5, 0.3, 7.0, 400.0] {
        let want = 0.5 + x.atan() / PI;
        assert!(
            (stable_cdf(&c, x, &spec()).unwrap() - want).abs() < 1e-10,
            "x = {x}"
        );
    }
    assert!((stable_quantile(&c, 0.75, &spec()).unwrap() - 1.0).abs() < 1e-9);
}

// Upper quantiles from Gil-Pelaez inversion at 30 digits.
const Q_S1: [(f64, f64); 4] = [
    (0.05, 14.004_804_44),
    (0.01, 66.020_512_87),
    (0.001, 640.459_065_57),
    (0.0001, 6_371.504_400_6),
];
const Q_SHALFPI: [(f64, f64); 4] = [
    (0.05, 22.450_278_08),
    (0.01, 104.156_361_81),
    (0.001, 1_006.482_330_37),
    (0.0001, 10_008.787_29),
];

#[test]
fn skewed_upper_quantiles() {
    for (l, table) in [(law(1.0, 1.0), Q_S1), (law(1.0, PI / 2.0), Q_SHALFPI)] {
        for (s, want) in table {
            close(l.upper_quantile(s, &spec()).unwrap(), want, 1e-8);
        }
    }
}

#[test]
fn tail_formula_check() {
    let l = law(1.0, 1.0);
    let y = 2.0 / (0.001 * PI);
    let approx = y + 2.0 / PI * y.ln();
    close(stable_quantile(&l, 0.999, &spec()).unwrap(), approx, 0.01);
    let y = 2.0 / (0.01 * PI);
    let x = y + 2.0 / PI * y.ln();
    assert!((stable_cdf(&l, x, &spec()).unwrap() - 0.99).abs() < 1e-3);
}

#[test]
fn median_round_trip() {
    let l = law(1.0, 1.0);
    let m = stable_quantile(&l, 0.5, &spec()).unwrap();
    assert!((stable_cdf(&l, m, &spec()).unwrap() - 0.5).abs() < 1e-8);
}

#[test]
fn skewed_cdf_is_monotone_with_tail_constant() {
    let l = law(1.0, 1.0);
    let mut prev = 0.0;
    for i in 0..200 {
        let x = -8.0 + 0.25 * i as f64;
        let f = stable_cdf(&l, x, &spec()).unwrap();
        assert!(f >= prev - 1e-13, "cdf decreased at {x}");
        prev = f;
    }
    // 1 - F(x) ~ (2/π) γ / x
    let x = 1e6;
    close(x * l.sf(x, &spec()).unwrap(), 2.0 / PI, 1e-4);
}

#[test]
fn tail_laws_tail_constants() {
    for t in [
        TailLaw::StandardCauchy,
        TailLaw::HalfCauchy,
        TailLaw::ParetoUnit,
    ] {
        let x = 1e6;
        close(x * t.sf(x), t.tail_constant(), 1e-4);
    }
}

#[test]
fn root_examples() {
    let r = find_root(|x| x - 2.0, RootBracket::new(0.0, 5.0).unwrap(), 1e-14).unwrap();
    assert!((r - 2.0).abs() < 1e-12);
    let r = find_root(f64::cos, RootBracket::new(1.0, 2.0).unwrap(), 1e-15).unwrap();
    assert!((r - PI / 2.0).abs() < 1e-12);
    let r = find_root(
        |x| TailLaw::HalfCauchy.cdf(x) - 0.9,
        RootBracket::new(0.0, 100.0).unwrap(),
        1e-13,
    )
    .unwrap();
    close(r, (0.45 * PI).tan(), 1e-12);
}
