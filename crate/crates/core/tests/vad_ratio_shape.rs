//! Shape of `α / (ln K a_φ(α))` over K = 10..1e8.

use pcombine_core::{vad_threshold, CombinerKind, DEFAULT_VAD_TOL};

const KS: [usize; 8] = [
    10,
    100,
    1_000,
    10_000,
    100_000,
    1_000_000,
    10_000_000,
    100_000_000,
];
const ALPHAS: [f64; 3] = [0.1, 0.05, 0.01];
const KINDS: [CombinerKind; 3] = [CombinerKind::Cct, CombinerKind::Hmp, CombinerKind::Pcct];

fn ratio(kind: CombinerKind, k: usize, alpha: f64) -> f64 {
    let a = vad_threshold(kind, k, alpha, DEFAULT_VAD_TOL)
        .unwrap()
        .mean_scale_threshold;
    alpha / ((k as f64).ln() * a)
}

#[test]
fn decreasing_in_k() {
    for kind in KINDS {
        for alpha in ALPHAS {
            let r: Vec<f64> = KS.iter().map(|&k| ratio(kind, k, alpha)).collect();
            assert!(r.windows(2).all(|w| w[1] < w[0]), "{kind} α={alpha}: {r:?}");
        }
    }
}

#[test]
fn kinds_agree_within_two_thousandths() {
    let mut spread = Vec::new();
    for k in KS {
        for alpha in ALPHAS {
            let r: Vec<f64> = KINDS.iter().map(|&kind| ratio(kind, k, alpha)).collect();
            let s = r.iter().cloned().fold(f64::MIN, f64::max)
                - r.iter().cloned().fold(f64::MAX, f64::min);
            if s > 0.002 {
                spread.push(format!("K={k} α={alpha}: spread {s:.5} {r:?}"));
            }
        }
    }
    assert!(spread.is_empty(), "{}", spread.join("\n"));
}
