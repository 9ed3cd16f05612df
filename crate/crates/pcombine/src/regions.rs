//! Region-wise testing: the p-values are cut, in file order, into
//! consecutive chunks of `K` and every method is applied to each chunk. A
//! final chunk shorter than `K` is kept, tested at its own length and
//! flagged.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use pcombine_core::{combine, decide, CombinerKind, MethodSpec, TestReport};

use crate::output::num;
use crate::{CliError, PValueFile, ThresholdCache};

#[derive(Debug, Clone)]
pub struct Region {
    pub index: usize,
    /// Zero-based offset of the first value.
    pub start: usize,
    pub len: usize,
    pub short: bool,
    pub first_id: String,
    pub last_id: String,
    /// One decision per method, in method order.
    pub decisions: Vec<TestReport>,
}

#[derive(Debug, Clone)]
pub struct RegionReport {
    pub k: usize,
    pub alpha: f64,
    pub methods: Vec<MethodSpec>,
    pub regions: Vec<Region>,
    /// Significant regions per method.
    pub counts: Vec<usize>,
}

pub fn analyze_regions(
    file: &PValueFile,
    k: usize,
    methods: &[MethodSpec],
    alpha: f64,
    cache: &ThresholdCache,
) -> Result<RegionReport, CliError> {
    if k == 0 {
        return Err(CliError::Usage("region size K must be at least 1".into()));
    }
    if methods.is_empty() {
        return Err(CliError::Usage("no methods selected".into()));
    }
    let n = file.len();
    let starts: Vec<usize> = (0..n).step_by(k).collect();
    // resolve every threshold first so a bad method fails before any work
    for len in [k.min(n), n % k].into_iter().filter(|&l| l > 0) {
        for m in methods {
            cache.get(m.kind, m.family, len, alpha)?;
        }
    }
    let regions = starts
        .par_iter()
        .enumerate()
        .map(|(index, &start)| -> Result<Region, CliError> {
            let len = k.min(n - start);
            let p = file.slice(start..start + len)?;
            let mut stats: Vec<(CombinerKind, _)> = Vec::new();
            let mut decisions = Vec::with_capacity(methods.len());
            for m in methods {
                let stat = match stats.iter().find(|(kind, _)| *kind == m.kind) {
                    Some((_, s)) => *s,
                    None => {
                        let s = combine(&p, m.kind);
                        stats.push((m.kind, s));
                        s
                    }
                };
                let thr = cache.get(m.kind, m.family, len, alpha)?;
                decisions.push(decide(&stat, &thr)?);
            }
            Ok(Region {
                index,
                start,
                len,
                short: len < k,
                first_id: file.id(start),
                last_id: file.id(start + len - 1),
                decisions,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let counts = (0..methods.len())
        .map(|i| regions.iter().filter(|r| r.decisions[i].reject).count())
        .collect();
    Ok(RegionReport {
        k,
        alpha,
        methods: methods.to_vec(),
        regions,
        counts,
    })
}

#[derive(Debug, Serialize)]
pub struct MethodCount {
    pub kind: String,
    pub family: String,
    pub significant: usize,
}

#[derive(Debug, Serialize)]
pub struct RegionSummary {
    pub k: usize,
    pub alpha: f64,
    pub values: usize,
    pub regions: usize,
    pub short_last_region: Option<usize>,
    pub counts: Vec<MethodCount>,
}

impl RegionReport {
    pub fn summary(&self) -> RegionSummary {
        RegionSummary {
            k: self.k,
            alpha: self.alpha,
            values: self.regions.iter().map(|r| r.len).sum(),
            regions: self.regions.len(),
            short_last_region: self.regions.last().filter(|r| r.short).map(|r| r.len),
            counts: self
                .methods
                .iter()
                .zip(&self.counts)
                .map(|(m, &significant)| MethodCount {
                    kind: m.kind.to_string(),
                    family: m.family.to_string(),
                    significant,
                })
                .collect(),
        }
    }

    pub fn count(&self, method: MethodSpec) -> Option<usize> {
        self.methods
            .iter()
            .position(|&m| m == method)
            .map(|i| self.counts[i])
    }

    /// One row per (region, method).
    pub fn write_csv(&self, out: &mut dyn Write) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "region",
            "start",
            "len",
            "short",
            "first_id",
            "last_id",
            "kind",
            "family",
            "statistic",
            "mean_scale",
            "mean_scale_threshold",
            "reject",
        ])?;
        for r in &self.regions {
            for d in &r.decisions {
                w.write_record([
                    r.index.to_string(),
                    r.start.to_string(),
                    r.len.to_string(),
                    r.short.to_string(),
                    r.first_id.clone(),
                    r.last_id.clone(),
                    d.kind.to_string(),
                    d.family.to_string(),
                    num(d.statistic),
                    num(d.mean_scale),
                    num(d.mean_scale_threshold),
                    d.reject.to_string(),
                ])?;
            }
        }
        w.flush().map_err(|e| CliError::Output(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use pcombine_core::ThresholdKind;
    use std::path::PathBuf;

    fn file(values: Vec<f64>) -> PValueFile {
        PValueFile {
            path: PathBuf::from("mem"),
            lines: (1..=values.len() as u64).collect(),
            values,
            ids: None,
        }
    }

    fn methods() -> Vec<MethodSpec> {
        vec![
            MethodSpec {
                kind: CombinerKind::Pcct,
                family: ThresholdKind::Vwd,
            },
            MethodSpec {
                kind: CombinerKind::Bonferroni,
                family: ThresholdKind::Vad,
            },
        ]
    }

    #[test]
    fn short_last_region_is_flagged() {
        let f = file(vec![0.5; 25]);
        let r = analyze_regions(&f, 10, &methods(), 0.05, &ThresholdCache::default()).unwrap();
        assert_eq!(r.regions.len(), 3);
        assert!(!r.regions[1].short);
        assert!(r.regions[2].short);
        assert_eq!(r.regions[2].len, 5);
        assert_eq!(r.regions[2].decisions[0].k, 5);
        assert_eq!(r.summary().short_last_region, Some(5));
        assert_eq!(r.regions[2].first_id, "21");
    }

    #[test]
    fn k_beyond_length_gives_one_region() {
        let f = file(vec![0.5, 0.2, 0.9]);
        let r = analyze_regions(&f, 100, &methods(), 0.05, &ThresholdCache::default()).unwrap();
        assert_eq!(r.regions.len(), 1);
        assert!(r.regions[0].short);
        assert_eq!(r.regions[0].len, 3);
    }

    #[test]
    fn bad_method_fails_up_front() {
        let f = file(vec![0.5; 4]);
        let m = [MethodSpec {
            kind: CombinerKind::Hmp,
            family: ThresholdKind::CauchyApprox,
        }];
        assert!(matches!(
            analyze_regions(&f, 2, &m, 0.05, &ThresholdCache::default()),
            Err(CliError::Core(_))
        ));
    }
}
