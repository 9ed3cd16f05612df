//! `pcombine` subcommands.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pcombine_core::{combine, decide, CombinerKind, MethodSpec, ThresholdKind};

use crate::config::parse_config;
use crate::output::{self, ReportJson, TestReportJson, ThresholdJson, REPORT_CSV_HEADER};
use crate::tables::{ratio_table, Which, DEFAULT_K_GRID};
use crate::{
    analyze_regions, read_pvalues, run_experiment_parallel, worker_count, CliError, ExitCode,
    InputOptions, ThresholdCache,
};

#[derive(Debug, Parser)]
#[command(
    name = "pcombine",
    version,
    about = "Combine p-values under dependence"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TableName {
    A1,
    A2,
}

#[derive(Debug, clap::Args)]
struct InputArgs {
    /// Name of the p-value column (implies CSV input).
    #[arg(long)]
    column: Option<String>,
    /// Name of an identifier column (implies CSV input).
    #[arg(long)]
    id_column: Option<String>,
    /// Raise p-values below this floor (zeros included) to it.
    #[arg(long)]
    floor: Option<f64>,
}

impl InputArgs {
    fn options(&self) -> InputOptions {
        InputOptions {
            column: self.column.clone(),
            id_column: self.id_column.clone(),
            floor: self.floor,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Combine the p-values in FILE and report the decision as JSON.
    Combine {
        file: PathBuf,
        #[arg(long, value_parser = parse_kind)]
        kind: CombinerKind,
        #[arg(long, value_parser = parse_family, default_value = "vad")]
        family: ThresholdKind,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print one critical threshold as JSON.
    Threshold {
        #[arg(long, value_parser = parse_kind)]
        kind: CombinerKind,
        #[arg(long, value_parser = parse_family)]
        family: ThresholdKind,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate threshold ratios over a K grid as CSV.
    Tables {
        #[arg(value_enum)]
        table: TableName,
        /// Comma-separated K values.
        #[arg(long, value_delimiter = ',')]
        k: Vec<usize>,
        /// Comma-separated significance levels.
        #[arg(long, value_delimiter = ',')]
        alpha: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the Monte Carlo plans in a JSON config.
    Simulate {
        config: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override every plan's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override every plan's replicate count.
        #[arg(long)]
        reps: Option<u64>,
    },
    /// Test consecutive regions of K p-values.
    Regions {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        /// Comma-separated combiners.
        #[arg(long, value_delimiter = ',', value_parser = parse_kind, required = true)]
        kind: Vec<CombinerKind>,
        /// Comma-separated families, paired with `--kind`; a single value
        /// applies to every kind.
        #[arg(long, value_delimiter = ',', value_parser = parse_family, default_value = "vad")]
        family: Vec<ThresholdKind>,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a JSON summary here.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
}

fn parse_kind(s: &str) -> Result<CombinerKind, String> {
    s.parse()
        .map_err(|_| format!("unknown combiner `{s}` (bonferroni, cct, pcct, hmp)"))
}

fn parse_family(s: &str) -> Result<ThresholdKind, String> {
    s.parse()
        .map_err(|_| format!("unknown threshold family `{s}` (approx, vwd, vad)"))
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::Input as i32
            } else {
                0
            };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::Success as i32,
        Err(e) => {
            eprintln!("pcombine: {e}");
            e.exit_code() as i32
        }
    }
}

fn dispatch(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Combine {
            file,
            kind,
            family,
            alpha,
            input,
            out,
        } => {
            let data = read_pvalues(&file, &input.options())?;
            let p = data.to_vector()?;
            let stat = combine(&p, kind);
            let thr = ThresholdCache::default().get(kind, family, p.len(), alpha)?;
            let report = decide(&stat, &thr)?;
            output::write_json(
                &mut *output::sink(out.as_deref())?,
                &TestReportJson::new(&report, Some(file)),
            )
        }
        Command::Threshold {
            kind,
            family,
            k,
            alpha,
            out,
        } => {
            let thr = ThresholdCache::default().get(kind, family, k, alpha)?;
            output::write_json(
                &mut *output::sink(out.as_deref())?,
                &ThresholdJson::from(&thr),
            )
        }
        Command::Tables {
            table,
            k,
            alpha,
            out,
        } => {
            let which = match table {
                TableName::A1 => Which::A1,
                TableName::A2 => Which::A2,
            };
            let k_grid = if k.is_empty() {
                DEFAULT_K_GRID.to_vec()
            } else {
                k
            };
            let alphas = if alpha.is_empty() {
                which.default_alphas().to_vec()
            } else {
                alpha
            };
            let t = ratio_table(which, &k_grid, &alphas, &ThresholdCache::default());
            t.write_csv(&mut *output::sink(out.as_deref())?)?;
            match t.first_error() {
                Some(e) => Err(e.clone().into()),
                None => Ok(()),
            }
        }
        Command::Simulate {
            config,
            format,
            out,
            seed,
            reps,
        } => simulate(&config, format, out.as_deref(), seed, reps),
        Command::Regions {
            file,
            k,
            kind,
            family,
            alpha,
            input,
            format,
            out,
            summary,
        } => {
            let methods = pair_methods(&kind, &family)?;
            let data = read_pvalues(&file, &input.options())?;
            let report = analyze_regions(&data, k, &methods, alpha, &ThresholdCache::default())?;
            let mut sink = output::sink(out.as_deref())?;
            match format {
                Format::Csv => report.write_csv(&mut *sink)?,
                Format::Json => output::write_json(&mut *sink, &report.summary())?,
            }
            if let Some(path) = summary {
                output::write_json(&mut *output::sink(Some(&path))?, &report.summary())?;
            }
            Ok(())
        }
    }
}

fn pair_methods(
    kinds: &[CombinerKind],
    families: &[ThresholdKind],
) -> Result<Vec<MethodSpec>, CliError> {
    match families.len() {
        1 => Ok(kinds
            .iter()
            .map(|&kind| MethodSpec {
                kind,
                family: families[0],
            })
            .collect()),
        n if n == kinds.len() => Ok(kinds
            .iter()
            .zip(families)
            .map(|(&kind, &family)| MethodSpec { kind, family })
            .collect()),
        n => Err(CliError::Usage(format!(
            "--family takes one value or one per --kind ({} kinds, {n} families)",
            kinds.len()
        ))),
    }
}

#[derive(Serialize)]
struct PowerCurveJson {
    name: String,
    points: Vec<ReportJson>,
}

#[derive(Serialize)]
#[serde(untagged)]
enum PlanOutput {
    Single(ReportJson),
    Curve(PowerCurveJson),
}

fn simulate(
    config: &Path,
    format: Format,
    out: Option<&Path>,
    seed: Option<u64>,
    reps: Option<u64>,
) -> Result<(), CliError> {
    let text = std::fs::read_to_string(config).map_err(|source| CliError::Io {
        path: config.to_owned(),
        source,
    })?;
    let mut entries = parse_config(config, &text)?;
    for e in &mut entries {
        if let Some(s) = seed {
            e.plan.seed = s;
        }
        if let Some(r) = reps {
            e.plan.replicates = r;
            e.plan.validate()?;
        }
    }
    let cache = ThresholdCache::default();
    let threads = worker_count();
    // (plan name, report, wall seconds) per run, in config order
    let mut runs: Vec<(usize, _, f64)> = Vec::new();
    for (i, e) in entries.iter().enumerate() {
        match &e.strength_grid {
            None => {
                let (r, t) = run_experiment_parallel(&e.plan, &cache, threads)?;
                runs.push((i, r, t.as_secs_f64()));
            }
            Some(grid) => {
                pcombine_core::simulate::power_curve_with(&e.plan, grid, |plan| {
                    let (r, t) = run_experiment_parallel(plan, &cache, threads)?;
                    runs.push((i, r.clone(), t.as_secs_f64()));
                    Ok(r)
                })?;
            }
        }
    }
    let mut sink = output::sink(out)?;
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *sink);
            w.write_record(REPORT_CSV_HEADER)?;
            for (i, r, _) in &runs {
                for row in output::report_csv_rows(&entries[*i].name, r) {
                    w.write_record(&row)?;
                }
            }
            w.flush().map_err(|e| CliError::Output(e.to_string()))?;
            drop(w);
            sink.flush().map_err(|e| CliError::Output(e.to_string()))
        }
        Format::Json => {
            let mut plans = Vec::new();
            for (i, e) in entries.iter().enumerate() {
                let mut own: Vec<ReportJson> = runs
                    .iter()
                    .filter(|(j, _, _)| *j == i)
                    .map(|(_, r, t)| ReportJson::new(&e.name, r, *t))
                    .collect();
                plans.push(if e.strength_grid.is_some() {
                    PlanOutput::Curve(PowerCurveJson {
                        name: e.name.clone(),
                        points: own,
                    })
                } else {
                    PlanOutput::Single(own.remove(0))
                });
            }
            output::write_json(&mut *sink, &plans)
        }
    }
}
