//! P-value files: one value per line (`#` starts a comment), or CSV with a
//! header naming the p-value column and, optionally, an identifier column.

use std::fs;
use std::path::{Path, PathBuf};

use pcombine_core::PValueVector;

use crate::CliError;

const P_COLUMNS: [&str; 5] = ["p", "pvalue", "p_value", "pval", "p-value"];
const ID_COLUMNS: [&str; 3] = ["id", "snp", "name"];

#[derive(Debug, Clone, Default)]
pub struct InputOptions {
    /// Forces CSV and names the p-value column.
    pub column: Option<String>,
    pub id_column: Option<String>,
    /// Raise p-values in `[0, floor)` to `floor` instead of rejecting zeros.
    pub floor: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PValueFile {
    pub path: PathBuf,
    pub values: Vec<f64>,
    /// Source line of each value.
    pub lines: Vec<u64>,
    pub ids: Option<Vec<String>>,
}

impl PValueFile {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Identifier of the `i`-th value, or its 1-based position.
    pub fn id(&self, i: usize) -> String {
        match &self.ids {
            Some(ids) => ids[i].clone(),
            None => (i + 1).to_string(),
        }
    }

    pub fn to_vector(&self) -> Result<PValueVector, CliError> {
        self.slice(0..self.values.len())
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Result<PValueVector, CliError> {
        Ok(PValueVector::new(self.values[range].to_vec())?)
    }
}

fn is_csv(path: &Path, opts: &InputOptions) -> bool {
    opts.column.is_some()
        || opts.id_column.is_some()
        || path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

pub fn read_pvalues(path: &Path, opts: &InputOptions) -> Result<PValueFile, CliError> {
    if let Some(f) = opts.floor {
        if !(f > 0.0 && f < 1.0) {
            return Err(CliError::Usage(format!(
                "--floor must lie in (0, 1), got {f}"
            )));
        }
    }
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    let file = if is_csv(path, opts) {
        parse_csv(path, &text, opts)?
    } else {
        parse_text(path, &text, opts)?
    };
    if file.values.is_empty() {
        return Err(CliError::Parse {
            path: path.to_owned(),
            line: 0,
            message: "no p-values found".into(),
        });
    }
    Ok(file)
}

fn check(path: &Path, line: u64, raw: &str, floor: Option<f64>) -> Result<f64, CliError> {
    let err = |message: String| CliError::Parse {
        path: path.to_owned(),
        line,
        message,
    };
    let p: f64 = raw
        .trim()
        .parse()
        .map_err(|_| err(format!("not a number: {raw:?}")))?;
    match floor {
        Some(f) if (0.0..f).contains(&p) => Ok(f),
        _ if p > 0.0 && p <= 1.0 => Ok(p),
        _ => Err(err(format!("p-value {p} outside (0, 1]"))),
    }
}

pub fn parse_text(path: &Path, text: &str, opts: &InputOptions) -> Result<PValueFile, CliError> {
    let mut values = Vec::new();
    let mut lines = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let n = i as u64 + 1;
        values.push(check(path, n, content, opts.floor)?);
        lines.push(n);
    }
    Ok(PValueFile {
        path: path.to_owned(),
        values,
        lines,
        ids: None,
    })
}

fn find_column(headers: &csv::StringRecord, wanted: &[&str]) -> Option<usize> {
    headers
        .iter()
        .position(|h| wanted.iter().any(|w| h.trim().eq_ignore_ascii_case(w)))
}

pub fn parse_csv(path: &Path, text: &str, opts: &InputOptions) -> Result<PValueFile, CliError> {
    let parse_err = |line: u64, message: String| CliError::Parse {
        path: path.to_owned(),
        line,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| parse_err(1, e.to_string()))?
        .clone();
    let p_col = match &opts.column {
        Some(name) => find_column(&headers, &[name.as_str()]),
        None => find_column(&headers, &P_COLUMNS),
    }
    .ok_or_else(|| {
        parse_err(
            1,
            format!(
                "no p-value column {} in header {:?}",
                opts.column
                    .as_deref()
                    .unwrap_or("(p, pvalue, p_value, pval)"),
                headers.iter().collect::<Vec<_>>()
            ),
        )
    })?;
    let id_col = match &opts.id_column {
        Some(name) => Some(
            find_column(&headers, &[name.as_str()])
                .ok_or_else(|| parse_err(1, format!("no identifier column {name}")))?,
        ),
        None => find_column(&headers, &ID_COLUMNS),
    };

    let mut values = Vec::new();
    let mut lines = Vec::new();
    let mut ids = id_col.map(|_| Vec::new());
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let raw = record
            .get(p_col)
            .ok_or_else(|| parse_err(line, "missing p-value field".into()))?;
        values.push(check(path, line, raw, opts.floor)?);
        lines.push(line);
        if let (Some(ids), Some(c)) = (ids.as_mut(), id_col) {
            ids.push(record.get(c).unwrap_or("").to_string());
        }
    }
    Ok(PValueFile {
        path: path.to_owned(),
        values,
        lines,
        ids,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn text(s: &str) -> Result<PValueFile, CliError> {
        parse_text(Path::new("t.txt"), s, &InputOptions::default())
    }

    fn csv(s: &str, opts: &InputOptions) -> Result<PValueFile, CliError> {
        parse_csv(Path::new("t.csv"), s, opts)
    }

    #[test]
    fn text_skips_comments_and_blanks() {
        let f = text("# header\n0.1\n\n  0.5  # trailing\n1\n").unwrap();
        assert_eq!(f.values, vec![0.1, 0.5, 1.0]);
        assert_eq!(f.lines, vec![2, 4, 5]);
        assert_eq!(f.id(1), "2");
    }

    #[test]
    fn text_reports_line_numbers() {
        match text("0.1\n0.2\nabc\n") {
            Err(CliError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        match text("0.1\n0\n") {
            Err(CliError::Parse { line, message, .. }) => {
                assert_eq!(line, 2);
                assert!(message.contains("outside"));
            }
            other => panic!("{other:?}"),
        }
        assert!(text("1.5").is_err());
        assert!(text("NaN").is_err());
    }

    #[test]
    fn floor_admits_zeros() {
        let opts = InputOptions {
            floor: Some(1e-300),
            ..Default::default()
        };
        let f = parse_text(Path::new("t"), "0\n0.3\n", &opts).unwrap();
        assert_eq!(f.values, vec![1e-300, 0.3]);
    }

    #[test]
    fn csv_finds_default_columns() {
        let f = csv(
            "snp,chr,pvalue\nrs1,1,0.01\nrs2,1,0.9\n",
            &InputOptions::default(),
        )
        .unwrap();
        assert_eq!(f.values, vec![0.01, 0.9]);
        assert_eq!(
            f.ids.as_deref(),
            Some(&["rs1".to_string(), "rs2".to_string()][..])
        );
        assert_eq!(f.lines, vec![2, 3]);
    }

    #[test]
    fn csv_named_column_and_errors() {
        let opts = InputOptions {
            column: Some("q".into()),
            ..Default::default()
        };
        let f = csv("id,q\na,0.2\n", &opts).unwrap();
        assert_eq!(f.values, vec![0.2]);
        assert!(matches!(
            csv("id,p\na,0.2\n", &opts),
            Err(CliError::Parse { line: 1, .. })
        ));
        match csv("id,p\na,0.2\nb,2\n", &InputOptions::default()) {
            Err(CliError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }
}
