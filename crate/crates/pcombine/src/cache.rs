use std::collections::HashMap;
use std::sync::Mutex;

use pcombine_core::{
    threshold, CombinerKind, Error, QuadratureSpec, ThresholdKind, ThresholdResult,
};

type Key = (CombinerKind, ThresholdKind, usize, u64);

/// Memoised thresholds for one quadrature configuration. Safe to share
/// between threads; a value is computed at most a few times under contention
/// and every computation is deterministic, so callers always see the same
/// result.
#[derive(Debug, Default)]
pub struct ThresholdCache {
    spec: QuadratureSpec,
    map: Mutex<HashMap<Key, Result<ThresholdResult, Error>>>,
}

impl ThresholdCache {
    pub fn new(spec: QuadratureSpec) -> Self {
        Self {
            spec,
            map: Mutex::new(HashMap::new()),
        }
    }

    pub fn spec(&self) -> &QuadratureSpec {
        &self.spec
    }

    pub fn get(
        &self,
        kind: CombinerKind,
        family: ThresholdKind,
        k: usize,
        alpha: f64,
    ) -> Result<ThresholdResult, Error> {
        // K does not enter the Cauchy approximation
        let k_key = if family == ThresholdKind::CauchyApprox {
            0
        } else {
            k
        };
        let key = (kind, family, k_key, alpha.to_bits());
        if let Some(hit) = self.map.lock().expect("threshold cache poisoned").get(&key) {
            return hit.clone();
        }
        let value = threshold(kind, family, k, alpha, &self.spec);
        self.map
            .lock()
            .expect("threshold cache poisoned")
            .entry(key)
            .or_insert(value)
            .clone()
    }

    pub fn len(&self) -> usize {
        self.map.lock().expect("threshold cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
