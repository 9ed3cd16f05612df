//! Versioned JSON schema for `simulate`.
//!
//! ```json
//! {
//!   "version": 1,
//!   "plans": [{
//!     "name": "cs-0.99",
//!     "k": 1000,
//!     "covariance": {"type": "compound-symmetry", "rho": 0.99},
//!     "signal": {"pattern": "null"},
//!     "methods": [{"kind": "cct", "family": "approx"}],
//!     "alpha": 0.05,
//!     "replicates": 100000,
//!     "seed": 7,
//!     "side": "two-sided"
//!   }]
//! }
//! ```
//!
//! An optional `strength_grid` turns a plan into a power curve: one run per
//! signal strength. Unknown fields are rejected.

use std::path::Path;

use serde::Deserialize;
use serde_path_to_error::{Path as ErrPath, Segment};

use pcombine_core::{
    CombinerKind, CovarianceModel, ExperimentPlan, MethodSpec, PValueSide, SignMode, SignalConfig,
    SignalPattern, ThresholdKind,
};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    version: u32,
    plans: Vec<PlanConfig>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanConfig {
    #[serde(default)]
    name: Option<String>,
    k: usize,
    covariance: CovarianceConfig,
    #[serde(default)]
    signal: SignalJson,
    methods: Vec<MethodJson>,
    alpha: f64,
    replicates: u64,
    seed: u64,
    side: SideJson,
    #[serde(default)]
    strength_grid: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
enum CovarianceConfig {
    Independent,
    Ar1 { rho: f64 },
    CompoundSymmetry { rho: f64 },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SignalJson {
    pattern: PatternJson,
    #[serde(default)]
    strength: f64,
    #[serde(default)]
    sign_mode: SignModeJson,
}

impl Default for SignalJson {
    fn default() -> Self {
        Self {
            pattern: PatternJson::Null,
            strength: 0.0,
            sign_mode: SignModeJson::AllPositive,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum PatternJson {
    Null,
    Sparse,
    Dense,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum SignModeJson {
    #[default]
    AllPositive,
    HalfNegative,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
struct MethodJson {
    kind: KindJson,
    family: FamilyJson,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
enum KindJson {
    Bonferroni,
    Cct,
    Pcct,
    Hmp,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
enum FamilyJson {
    Approx,
    Vwd,
    Vad,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum SideJson {
    OneSided,
    TwoSided,
}

/// A plan ready to run, plus its power-curve grid if any.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanEntry {
    pub name: String,
    pub plan: ExperimentPlan,
    pub strength_grid: Option<Vec<f64>>,
}

fn pointer(path: &ErrPath) -> String {
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => {
                out.push('/');
                out.push_str(&key.replace('~', "~0").replace('/', "~1"));
            }
            Segment::Enum { variant } => {
                out.push('/');
                out.push_str(variant);
            }
            Segment::Unknown => out.push_str("/?"),
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

pub fn parse_config(path: &Path, text: &str) -> Result<Vec<PlanEntry>, CliError> {
    let schema = |pointer: String, message: String| CliError::Schema {
        path: path.to_owned(),
        pointer,
        message,
    };
    let de = &mut serde_json::Deserializer::from_str(text);
    let cfg: ConfigFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let p = pointer(e.path());
        schema(p, e.into_inner().to_string())
    })?;
    if cfg.version != SCHEMA_VERSION {
        return Err(schema(
            "/version".into(),
            format!(
                "unsupported version {} (expected {SCHEMA_VERSION})",
                cfg.version
            ),
        ));
    }
    if cfg.plans.is_empty() {
        return Err(schema(
            "/plans".into(),
            "at least one plan is required".into(),
        ));
    }
    cfg.plans
        .into_iter()
        .enumerate()
        .map(|(i, p)| {
            let at = |field: &str| format!("/plans/{i}/{field}");
            let covariance = match p.covariance {
                CovarianceConfig::Independent => CovarianceModel::Independent,
                CovarianceConfig::Ar1 { rho } => CovarianceModel::Ar1 { rho },
                CovarianceConfig::CompoundSymmetry { rho } => {
                    CovarianceModel::CompoundSymmetry { rho }
                }
            };
            covariance
                .validate()
                .map_err(|e| schema(at("covariance/rho"), e.to_string()))?;
            let signal = SignalConfig {
                pattern: match p.signal.pattern {
                    PatternJson::Null => SignalPattern::Null,
                    PatternJson::Sparse => SignalPattern::Sparse,
                    PatternJson::Dense => SignalPattern::Dense,
                },
                strength: p.signal.strength,
                sign_mode: match p.signal.sign_mode {
                    SignModeJson::AllPositive => SignMode::AllPositive,
                    SignModeJson::HalfNegative => SignMode::HalfNegative,
                },
            };
            signal
                .validate()
                .map_err(|e| schema(at("signal/strength"), e.to_string()))?;
            if p.k == 0 {
                return Err(schema(at("k"), "K must be at least 1".into()));
            }
            if !(p.alpha > 0.0 && p.alpha < 1.0) {
                return Err(schema(
                    at("alpha"),
                    format!("α must lie in (0, 1), got {}", p.alpha),
                ));
            }
            if p.replicates == 0 {
                return Err(schema(
                    at("replicates"),
                    "at least one replicate is required".into(),
                ));
            }
            if p.methods.is_empty() {
                return Err(schema(
                    at("methods"),
                    "at least one method is required".into(),
                ));
            }
            if let Some(grid) = &p.strength_grid {
                if grid.is_empty() {
                    return Err(schema(at("strength_grid"), "grid must not be empty".into()));
                }
                if signal.pattern == SignalPattern::Null {
                    return Err(schema(
                        at("signal/pattern"),
                        "a strength grid needs a non-null signal".into(),
                    ));
                }
                if let Some(j) = grid.iter().position(|c| !(c.is_finite() && *c >= 0.0)) {
                    return Err(schema(
                        format!("/plans/{i}/strength_grid/{j}"),
                        "strengths must be finite and ≥ 0".into(),
                    ));
                }
            }
            let methods = p
                .methods
                .iter()
                .map(|m| MethodSpec {
                    kind: match m.kind {
                        KindJson::Bonferroni => CombinerKind::Bonferroni,
                        KindJson::Cct => CombinerKind::Cct,
                        KindJson::Pcct => CombinerKind::Pcct,
                        KindJson::Hmp => CombinerKind::Hmp,
                    },
                    family: match m.family {
                        FamilyJson::Approx => ThresholdKind::CauchyApprox,
                        FamilyJson::Vwd => ThresholdKind::Vwd,
                        FamilyJson::Vad => ThresholdKind::Vad,
                    },
                })
                .collect();
            Ok(PlanEntry {
                name: p.name.unwrap_or_else(|| format!("plan{i}")),
                plan: ExperimentPlan {
                    k: p.k,
                    covariance,
                    signal,
                    methods,
                    alpha: p.alpha,
                    replicates: p.replicates,
                    seed: p.seed,
                    side: match p.side {
                        SideJson::OneSided => PValueSide::OneSided,
                        SideJson::TwoSided => PValueSide::TwoSided,
                    },
                },
                strength_grid: p.strength_grid,
            })
        })
        .collect()
}
