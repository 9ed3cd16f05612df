//! Ratio tables of the critical thresholds.
//!
//! * A1: `α / (ln K · a_φ(α))` for the VAD thresholds of CCT, HMP and PCCT.
//! * A2: `α / b_φ(α)` for the VWD thresholds of HMP and PCCT, plus the CCT
//!   column, which is identically one.

use std::io::Write;

use rayon::prelude::*;

use pcombine_core::{CombinerKind, Error, ThresholdKind};

use crate::output::num;
use crate::{CliError, ThresholdCache};

pub const DEFAULT_K_GRID: [usize; 8] = [
    10,
    100,
    1_000,
    10_000,
    100_000,
    1_000_000,
    10_000_000,
    100_000_000,
];
pub const A1_ALPHAS: [f64; 3] = [0.1, 0.05, 0.01];
pub const A2_ALPHAS: [f64; 3] = [0.05, 0.01, 0.001];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    A1,
    A2,
}

impl Which {
    pub fn kinds(self) -> &'static [CombinerKind] {
        match self {
            Which::A1 => &[CombinerKind::Cct, CombinerKind::Hmp, CombinerKind::Pcct],
            Which::A2 => &[CombinerKind::Hmp, CombinerKind::Pcct, CombinerKind::Cct],
        }
    }

    pub fn family(self) -> ThresholdKind {
        match self {
            Which::A1 => ThresholdKind::Vad,
            Which::A2 => ThresholdKind::Vwd,
        }
    }

    pub fn default_alphas(self) -> &'static [f64] {
        match self {
            Which::A1 => &A1_ALPHAS,
            Which::A2 => &A2_ALPHAS,
        }
    }
}

/// One ratio; the error is kept so a failing cell does not hide the rest.
pub type Cell = Result<f64, Error>;

#[derive(Debug)]
pub struct RatioTable {
    pub which: Which,
    pub k_grid: Vec<usize>,
    pub alphas: Vec<f64>,
    /// `cells[row][col]`, columns grouped by α then kind.
    pub cells: Vec<Vec<Cell>>,
}

impl RatioTable {
    pub fn columns(&self) -> Vec<(f64, CombinerKind)> {
        self.alphas
            .iter()
            .flat_map(|&a| self.which.kinds().iter().map(move |&k| (a, k)))
            .collect()
    }

    pub fn get(&self, k: usize, alpha: f64, kind: CombinerKind) -> Option<&Cell> {
        let row = self.k_grid.iter().position(|&x| x == k)?;
        let col = self
            .columns()
            .iter()
            .position(|&(a, c)| a == alpha && c == kind)?;
        Some(&self.cells[row][col])
    }

    pub fn first_error(&self) -> Option<&Error> {
        self.cells.iter().flatten().find_map(|c| c.as_ref().err())
    }

    pub fn write_csv(&self, out: &mut dyn Write) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["k".to_string()];
        header.extend(self.columns().iter().map(|(a, k)| format!("{k}@{a}")));
        w.write_record(&header)?;
        for (k, row) in self.k_grid.iter().zip(&self.cells) {
            let mut rec = vec![k.to_string()];
            rec.extend(row.iter().map(|c| match c {
                Ok(v) => num(*v),
                Err(e) => format!("error: {e}"),
            }));
            w.write_record(&rec)?;
        }
        w.flush().map_err(|e| CliError::Output(e.to_string()))
    }
}

pub fn ratio(
    which: Which,
    kind: CombinerKind,
    k: usize,
    alpha: f64,
    cache: &ThresholdCache,
) -> Cell {
    let t = cache.get(kind, which.family(), k, alpha)?;
    Ok(match which {
        Which::A1 => alpha / ((k as f64).ln() * t.mean_scale_threshold),
        Which::A2 => alpha / t.mean_scale_threshold,
    })
}

pub fn ratio_table(
    which: Which,
    k_grid: &[usize],
    alphas: &[f64],
    cache: &ThresholdCache,
) -> RatioTable {
    let columns: Vec<(f64, CombinerKind)> = alphas
        .iter()
        .flat_map(|&a| which.kinds().iter().map(move |&k| (a, k)))
        .collect();
    let cells = k_grid
        .par_iter()
        .map(|&k| {
            columns
                .iter()
                .map(|&(a, kind)| ratio(which, kind, k, a, cache))
                .collect()
        })
        .collect();
    RatioTable {
        which,
        k_grid: k_grid.to_vec(),
        alphas: alphas.to_vec(),
        cells,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_and_cct_column() {
        let cache = ThresholdCache::default();
        let t = ratio_table(Which::A2, &[10, 1000], &[0.05], &cache);
        assert_eq!(t.columns().len(), 3);
        assert_eq!(
            t.get(1000, 0.05, CombinerKind::Cct)
                .unwrap()
                .as_ref()
                .unwrap(),
            &1.0
        );
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("k,hmp@0.05,pcct@0.05,cct@0.05\n10,"));
    }

    #[test]
    fn failing_cells_are_annotated() {
        let cache = ThresholdCache::default();
        let t = ratio_table(Which::A1, &[2, 10], &[0.05], &cache);
        assert!(t.first_error().is_some());
        assert!(t.get(10, 0.05, CombinerKind::Hmp).unwrap().is_ok());
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().contains("error:"));
    }
}
