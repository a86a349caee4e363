//! Repeated seeded experiments, reports and curve data.
//!
//! Repetition `r` of every function runs with seed `base_seed + r`. Runs may
//! execute in parallel; results are reduced in (function, repetition) order,
//! so reports do not depend on scheduling.
//!
//! Files written by [`write_report`]:
//!
//! * `report.csv`: one row per function, columns [`REPORT_COLUMNS`];
//! * `suites.csv`: suite-average XPL%/XPT%;
//! * `summary.jsonl`: a `config` record, one `function` record per function
//!   (statistics, curves, seed ledger) and one `suite` record per suite;
//! * `curves/<id>_convergence.csv` and `curves/<id>_balance.csv`;
//! * `traces/<id>_rep<r>.jsonl` when trace export is on.

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::benchmarks::{Benchmark, Registry, Suite};
use crate::diversity::{BalanceSeries, DiversityRecorder};
use crate::domain::Objective;
use crate::error::{Error, Result};
use crate::trace::{Trace, TraceHeader, TraceRecorder};
use crate::woa::{self, CoefficientMode, IterationHook, IterationView, RunResult, WoaConfig};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "WOA_BALANCE_OUT";

pub const DEFAULT_REPETITIONS: usize = 30;
pub const DEFAULT_AGENTS: usize = 30;
pub const DEFAULT_ITERATIONS: usize = 500;

pub const REPORT_COLUMNS: [&str; 10] = [
    "function_id",
    "reps",
    "agents",
    "iterations",
    "mean_best",
    "std_best",
    "mean_xpl_pct",
    "std_xpl_pct",
    "mean_xpt_pct",
    "std_xpt_pct",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub functions: Vec<String>,
    pub repetitions: usize,
    pub agents: usize,
    pub iterations: usize,
    pub base_seed: u64,
    #[serde(default)]
    pub mode: CoefficientMode,
    /// Not serialized, so a summary does not depend on where it was written.
    #[serde(skip)]
    pub output_dir: Option<PathBuf>,
    pub export_traces: bool,
}

impl ExperimentConfig {
    pub fn new(functions: Vec<String>) -> Self {
        Self {
            functions,
            repetitions: DEFAULT_REPETITIONS,
            agents: DEFAULT_AGENTS,
            iterations: DEFAULT_ITERATIONS,
            base_seed: 0,
            mode: CoefficientMode::Scalar,
            output_dir: None,
            export_traces: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.functions.is_empty() {
            return Err(Error::invalid("no functions selected"));
        }
        if self.repetitions < 1 {
            return Err(Error::invalid("repetitions must be at least 1"));
        }
        if self.agents < 2 {
            return Err(Error::invalid("agents must be at least 2"));
        }
        if self.iterations < 1 {
            return Err(Error::invalid("iterations must be at least 1"));
        }
        Ok(())
    }

    pub fn seed_for(&self, repetition: usize) -> u64 {
        self.base_seed.wrapping_add(repetition as u64)
    }

    fn woa_config(&self) -> WoaConfig {
        WoaConfig {
            agents: self.agents,
            iterations: self.iterations,
            mode: self.mode,
        }
    }
}

/// One run with its diversity analysis and, optionally, its trace.
#[derive(Debug, Clone)]
pub struct InstrumentedRun {
    pub result: RunResult,
    pub balance: BalanceSeries,
    pub trace: Option<Trace>,
}

/// Runs WOA on `f` with diversity measured through the iteration hook.
pub fn run_instrumented(
    f: &dyn Objective,
    config: &WoaConfig,
    seed: u64,
    record_trace: bool,
) -> Result<InstrumentedRun> {
    let mut diversity = DiversityRecorder::new();
    let mut tracer = record_trace.then(|| {
        TraceRecorder::new(TraceHeader::new(
            f.name(),
            seed,
            config.agents,
            f.bounds().dims(),
            config.iterations,
        ))
    });
    let mut hook = |view: &IterationView<'_>| {
        diversity.on_iteration(view);
        if let Some(t) = tracer.as_mut() {
            t.on_iteration(view);
        }
    };
    let result = woa::run(f, config, seed, Some(&mut hook))?;
    Ok(InstrumentedRun {
        result,
        balance: diversity.finish()?,
        trace: tracer.map(TraceRecorder::into_trace),
    })
}

/// Outcome of one repetition, as kept in the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepetitionRecord {
    pub repetition: usize,
    pub seed: u64,
    pub final_best: f64,
    pub div_max: f64,
    pub xpl_pct: f64,
    pub xpt_pct: f64,
    #[serde(skip)]
    pub xpl_series: Vec<f64>,
    #[serde(skip)]
    pub xpt_series: Vec<f64>,
    #[serde(skip)]
    pub convergence: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionReport {
    pub function_id: String,
    pub suite: Suite,
    pub reps: usize,
    pub agents: usize,
    pub iterations: usize,
    pub known_optimum: Option<f64>,
    pub mean_best: f64,
    pub std_best: f64,
    pub mean_xpl_pct: f64,
    pub std_xpl_pct: f64,
    pub mean_xpt_pct: f64,
    pub std_xpt_pct: f64,
    /// Repetition-averaged per-iteration curves, each of length `iterations`.
    pub xpl_curve: Vec<f64>,
    pub xpt_curve: Vec<f64>,
    pub convergence_curve: Vec<f64>,
    /// Seed ledger and per-run aggregates, in repetition order.
    pub runs: Vec<RepetitionRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteAverage {
    pub suite: String,
    pub functions: usize,
    pub mean_xpl_pct: f64,
    pub mean_xpt_pct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub functions: Vec<FunctionReport>,
    pub suites: Vec<SuiteAverage>,
}

impl ExperimentReport {
    pub fn function(&self, id: &str) -> Result<&FunctionReport> {
        let canonical = crate::benchmarks::canonical_id(id).unwrap_or_else(|| id.to_string());
        self.functions
            .iter()
            .find(|f| f.function_id == canonical)
            .ok_or_else(|| Error::UnknownFunction(id.to_string()))
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteAverage> {
        self.suites.iter().find(|s| s.suite == name)
    }
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample standard deviation; zero for a single value.
fn std_dev(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    let ss: f64 = values.iter().map(|v| (v - m).powi(2)).sum();
    (ss / (values.len() - 1) as f64).sqrt()
}

fn mean_curve(curves: impl Iterator<Item = Vec<f64>> + Clone, len: usize) -> Vec<f64> {
    let count = curves.clone().count() as f64;
    let mut acc = vec![0.0; len];
    for c in curves {
        for (a, v) in acc.iter_mut().zip(c) {
            *a += v;
        }
    }
    acc.iter().map(|a| a / count).collect()
}

/// Runs repetition `repetition` of `bench`.
pub fn run_repetition(
    bench: &Benchmark,
    config: &ExperimentConfig,
    repetition: usize,
) -> Result<(RepetitionRecord, Option<Trace>)> {
    let seed = config.seed_for(repetition);
    let run = run_instrumented(bench, &config.woa_config(), seed, config.export_traces)?;
    let record = RepetitionRecord {
        repetition,
        seed,
        final_best: run.result.best.fitness,
        div_max: run.balance.div_max,
        xpl_pct: run.balance.xpl_aggregate,
        xpt_pct: run.balance.xpt_aggregate,
        xpl_series: run.balance.xpl_series,
        xpt_series: run.balance.xpt_series,
        convergence: run.result.convergence,
    };
    Ok((record, run.trace))
}

/// Reduces the repetitions of one function. `records` may arrive in any
/// order; they are sorted by repetition index first.
pub fn aggregate_function(
    bench: &Benchmark,
    config: &ExperimentConfig,
    mut records: Vec<RepetitionRecord>,
) -> FunctionReport {
    records.sort_by_key(|r| r.repetition);
    let best: Vec<f64> = records.iter().map(|r| r.final_best).collect();
    let xpl: Vec<f64> = records.iter().map(|r| r.xpl_pct).collect();
    let xpt: Vec<f64> = records.iter().map(|r| r.xpt_pct).collect();
    let len = config.iterations;
    FunctionReport {
        function_id: bench.id().to_string(),
        suite: bench.spec().suite,
        reps: records.len(),
        agents: config.agents,
        iterations: config.iterations,
        known_optimum: bench.spec().known_optimum,
        mean_best: mean(&best),
        std_best: std_dev(&best),
        mean_xpl_pct: mean(&xpl),
        std_xpl_pct: std_dev(&xpl),
        mean_xpt_pct: mean(&xpt),
        std_xpt_pct: std_dev(&xpt),
        xpl_curve: mean_curve(records.iter().map(|r| r.xpl_series.clone()), len),
        xpt_curve: mean_curve(records.iter().map(|r| r.xpt_series.clone()), len),
        convergence_curve: mean_curve(records.iter().map(|r| r.convergence.clone()), len),
        runs: records,
    }
}

/// Suite averages are plain means of the per-function means.
pub fn suite_averages(functions: &[FunctionReport]) -> Vec<SuiteAverage> {
    let make = |name: &str, members: Vec<&FunctionReport>| SuiteAverage {
        suite: name.to_string(),
        functions: members.len(),
        mean_xpl_pct: members.iter().map(|f| f.mean_xpl_pct).sum::<f64>() / members.len() as f64,
        mean_xpt_pct: members.iter().map(|f| f.mean_xpt_pct).sum::<f64>() / members.len() as f64,
    };
    let mut out = Vec::new();
    for (name, suite) in [("classical", Suite::Classical), ("cec2019", Suite::Cec2019)] {
        let members: Vec<_> = functions.iter().filter(|f| f.suite == suite).collect();
        if !members.is_empty() {
            out.push(make(name, members));
        }
    }
    out.push(make("all", functions.iter().collect()));
    out
}

fn trace_file_name(id: &str, repetition: usize) -> String {
    format!("{id}_rep{repetition}.jsonl")
}

/// Runs the experiment and, when `config.output_dir` is set, persists it.
pub fn run_experiment(registry: &Registry, config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let benches = config
        .functions
        .iter()
        .map(|id| registry.get(id))
        .collect::<Result<Vec<_>>>()?;
    if let Some(dir) = &config.output_dir {
        prepare_dir(dir)?;
        if config.export_traces {
            prepare_dir(&dir.join("traces"))?;
        }
    }

    let jobs: Vec<(usize, usize)> = (0..benches.len())
        .flat_map(|b| (0..config.repetitions).map(move |r| (b, r)))
        .collect();
    let records = jobs
        .par_iter()
        .map(|&(b, r)| {
            let (record, trace) = run_repetition(benches[b], config, r)?;
            if let (Some(trace), Some(dir)) = (trace, &config.output_dir) {
                trace.save(&dir.join("traces").join(trace_file_name(benches[b].id(), r)))?;
            }
            Ok((b, record))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut grouped: Vec<Vec<RepetitionRecord>> = vec![Vec::new(); benches.len()];
    for (b, record) in records {
        grouped[b].push(record);
    }
    let functions: Vec<FunctionReport> = benches
        .iter()
        .zip(grouped)
        .map(|(bench, recs)| aggregate_function(bench, config, recs))
        .collect();
    let report = ExperimentReport {
        config: config.clone(),
        suites: suite_averages(&functions),
        functions,
    };
    if let Some(dir) = &config.output_dir {
        write_report(&report, dir)?;
    }
    Ok(report)
}

fn prepare_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let meta = fs::metadata(dir).map_err(|e| Error::io(dir, e))?;
    if meta.permissions().readonly() {
        return Err(Error::io(
            dir,
            std::io::Error::new(
                std::io::ErrorKind::PermissionDenied,
                "directory is read-only",
            ),
        ));
    }
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

pub fn report_csv(report: &ExperimentReport) -> String {
    let mut out = REPORT_COLUMNS.join(",");
    out.push('\n');
    for f in &report.functions {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            f.function_id,
            f.reps,
            f.agents,
            f.iterations,
            fmt_f64(f.mean_best),
            fmt_f64(f.std_best),
            fmt_f64(f.mean_xpl_pct),
            fmt_f64(f.std_xpl_pct),
            fmt_f64(f.mean_xpt_pct),
            fmt_f64(f.std_xpt_pct),
        );
    }
    out
}

pub fn suites_csv(report: &ExperimentReport) -> String {
    let mut out = String::from("suite,functions,mean_xpl_pct,mean_xpt_pct\n");
    for s in &report.suites {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            s.suite,
            s.functions,
            fmt_f64(s.mean_xpl_pct),
            fmt_f64(s.mean_xpt_pct)
        );
    }
    out
}

pub fn convergence_csv(f: &FunctionReport) -> String {
    let mut out = String::from("iteration,mean_best_fitness\n");
    for (t, v) in f.convergence_curve.iter().enumerate() {
        let _ = writeln!(out, "{},{}", t + 1, fmt_f64(*v));
    }
    out
}

pub fn balance_csv(f: &FunctionReport) -> String {
    let mut out = String::from("iteration,mean_xpl_pct,mean_xpt_pct\n");
    for (t, (l, p)) in f.xpl_curve.iter().zip(&f.xpt_curve).enumerate() {
        let _ = writeln!(out, "{},{},{}", t + 1, fmt_f64(*l), fmt_f64(*p));
    }
    out
}

/// Writes the convergence and balance curves of `function_id` into `dir`.
pub fn emit_curves(
    report: &ExperimentReport,
    function_id: &str,
    dir: &Path,
) -> Result<(PathBuf, PathBuf)> {
    let f = report.function(function_id)?;
    prepare_dir(dir)?;
    let conv = dir.join(format!("{}_convergence.csv", f.function_id));
    let bal = dir.join(format!("{}_balance.csv", f.function_id));
    write_file(&conv, &convergence_csv(f))?;
    write_file(&bal, &balance_csv(f))?;
    Ok((conv, bal))
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case")]
enum SummaryLine {
    Config(ExperimentConfig),
    Function(FunctionReport),
    Suite(SuiteAverage),
}

pub fn write_summary<W: Write>(report: &ExperimentReport, mut w: W) -> Result<()> {
    let io = |e| Error::io("<summary>", e);
    let lines = std::iter::once(SummaryLine::Config(report.config.clone()))
        .chain(report.functions.iter().cloned().map(SummaryLine::Function))
        .chain(report.suites.iter().cloned().map(SummaryLine::Suite));
    for line in lines {
        serde_json::to_writer(&mut w, &line)?;
        w.write_all(b"\n").map_err(io)?;
    }
    w.flush().map_err(io)
}

pub fn read_summary<R: BufRead>(r: R) -> Result<ExperimentReport> {
    let mut config = None;
    let mut functions = Vec::new();
    let mut suites = Vec::new();
    for line in r.lines() {
        let line = line.map_err(|e| Error::io("<summary>", e))?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str(&line)? {
            SummaryLine::Config(c) => config = Some(c),
            SummaryLine::Function(f) => functions.push(f),
            SummaryLine::Suite(s) => suites.push(s),
        }
    }
    let config = config.ok_or_else(|| Error::invalid("summary has no config record"))?;
    Ok(ExperimentReport {
        config,
        functions,
        suites,
    })
}

pub fn load_summary(path: &Path) -> Result<ExperimentReport> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_summary(BufReader::new(file))
}

/// Writes every report file except traces into `dir`.
pub fn write_report(report: &ExperimentReport, dir: &Path) -> Result<()> {
    prepare_dir(dir)?;
    write_file(&dir.join("report.csv"), &report_csv(report))?;
    write_file(&dir.join("suites.csv"), &suites_csv(report))?;
    let summary_path = dir.join("summary.jsonl");
    let file = File::create(&summary_path).map_err(|e| Error::io(&summary_path, e))?;
    write_summary(report, BufWriter::new(file))?;
    let curves = dir.join("curves");
    for f in &report.functions {
        emit_curves(report, &f.function_id, &curves)?;
    }
    Ok(())
}

/// Mean of `series[range]`, clipped to the series length.
pub fn window_mean(series: &[f64], range: std::ops::Range<usize>) -> f64 {
    let end = range.end.min(series.len());
    let start = range.start.min(end);
    mean(&series[start..end])
}
