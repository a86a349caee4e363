use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use woa_balance::benchmarks::{self, Registry, Suite};
use woa_balance::diversity::{analyze_trace, BalanceSeries};
use woa_balance::domain::Objective;
use woa_balance::harness::{
    self, fmt_f64, run_experiment, ExperimentConfig, DEFAULT_AGENTS, DEFAULT_ITERATIONS,
    DEFAULT_REPETITIONS, OUT_DIR_ENV,
};
use woa_balance::trace::Trace;
use woa_balance::woa::{CoefficientMode, WoaConfig};

#[derive(Parser)]
#[command(
    name = "woa-balance",
    version,
    about = "Whale Optimization Algorithm with exploration/exploitation measurement"
)]
struct Cli {
    #[command(flatten)]
    common: Common,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Base seed; repetition r uses seed + r.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output directory.
    #[arg(long, global = true, env = OUT_DIR_ENV)]
    out: Option<PathBuf>,

    /// Directory with the CEC2019 shift and rotation files.
    #[arg(long, global = true, env = benchmarks::CEC_DATA_ENV)]
    data_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Benchmark registry.
    Bench {
        #[command(subcommand)]
        action: BenchAction,
    },
    /// Single run, optionally exporting its trace.
    Run(RunArgs),
    /// Full protocol: repeated runs per function.
    Experiment(ExperimentArgs),
    /// Offline balance analysis of a trace file.
    Analyze(AnalyzeArgs),
    /// Re-emit tables and curves from a stored summary.
    Report(ReportArgs),
}

#[derive(Subcommand)]
enum BenchAction {
    /// One line per function: id, family, dims, bounds.
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Scalar,
    PerCoordinate,
}

impl From<Mode> for CoefficientMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Scalar => CoefficientMode::Scalar,
            Mode::PerCoordinate => CoefficientMode::PerCoordinate,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, short)]
    function: String,
    #[arg(long, default_value_t = DEFAULT_AGENTS)]
    agents: usize,
    #[arg(long, default_value_t = DEFAULT_ITERATIONS)]
    iterations: usize,
    #[arg(long, value_enum, default_value = "scalar")]
    mode: Mode,
    /// Write the full position trace.
    #[arg(long)]
    trace: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Classical,
    Cec2019,
    All,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Comma-separated function ids, e.g. F1,F9,CEC03.
    #[arg(long, value_delimiter = ',', conflicts_with = "suite")]
    functions: Vec<String>,
    #[arg(long, value_enum)]
    suite: Option<SuiteArg>,
    #[arg(long, default_value_t = DEFAULT_REPETITIONS)]
    reps: usize,
    #[arg(long, default_value_t = DEFAULT_AGENTS)]
    agents: usize,
    #[arg(long, default_value_t = DEFAULT_ITERATIONS)]
    iterations: usize,
    #[arg(long, value_enum, default_value = "scalar")]
    mode: Mode,
    /// Write one trace file per repetition.
    #[arg(long)]
    trace: bool,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Trace file written by `run --trace` or `experiment --trace`.
    trace: PathBuf,
}

#[derive(Args)]
struct ReportArgs {
    /// summary.jsonl written by `experiment`.
    summary: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let chain: Vec<String> = e.chain().map(|c| c.to_string()).collect();
            eprintln!("error: {}", chain.join(": "));
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    let common = cli.common;
    match cli.command {
        Command::Bench {
            action: BenchAction::List,
        } => bench_list(&common),
        Command::Run(args) => run_single(&common, args),
        Command::Experiment(args) => experiment(&common, args),
        Command::Analyze(args) => analyze(&common, args),
        Command::Report(args) => report(&common, args),
    }
}

fn load_registry(common: &Common) -> Result<Registry> {
    let dir = common
        .data_dir
        .clone()
        .unwrap_or_else(benchmarks::default_cec_data_dir);
    Registry::load(&dir).context("loading benchmark registry")
}

fn out_dir(common: &Common, fallback: &str) -> PathBuf {
    common
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(fallback))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn bench_list(common: &Common) -> Result<()> {
    let registry = load_registry(common)?;
    let mut text = String::new();
    for spec in registry.specs() {
        text.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            spec.id,
            spec.family,
            spec.default_dims,
            spec.bounds.describe()
        ));
    }
    print!("{text}");
    if let Some(dir) = &common.out {
        write(&dir.join("bench_list.tsv"), &text)?;
    }
    Ok(())
}

fn balance_csv(balance: &BalanceSeries, convergence: Option<&[f64]>) -> String {
    let mut out = String::from("iteration,div,xpl_pct,xpt_pct");
    if convergence.is_some() {
        out.push_str(",best_fitness");
    }
    out.push('\n');
    for (t, snap) in balance.div_series.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{}",
            snap.iteration,
            fmt_f64(snap.div),
            fmt_f64(balance.xpl_series[t]),
            fmt_f64(balance.xpt_series[t])
        ));
        if let Some(c) = convergence {
            out.push_str(&format!(",{}", fmt_f64(c[t])));
        }
        out.push('\n');
    }
    out
}

fn run_single(common: &Common, args: RunArgs) -> Result<()> {
    let registry = load_registry(common)?;
    let bench = registry.get(&args.function)?;
    let config = WoaConfig {
        agents: args.agents,
        iterations: args.iterations,
        mode: args.mode.into(),
    };
    let run = harness::run_instrumented(bench, &config, common.seed, args.trace)?;
    let dir = out_dir(common, "out").join(format!("run_{}_seed{}", bench.id(), common.seed));
    write(
        &dir.join("balance.csv"),
        &balance_csv(&run.balance, Some(&run.result.convergence)),
    )?;
    let summary = serde_json::json!({
        "function": bench.id(),
        "seed": common.seed,
        "agents": config.agents,
        "iterations": config.iterations,
        "best_fitness": run.result.best.fitness,
        "best_position": run.result.best.position,
        "known_optimum": bench.known_optimum(),
        "div_max": run.balance.div_max,
        "xpl_pct": run.balance.xpl_aggregate,
        "xpt_pct": run.balance.xpt_aggregate,
    });
    write(
        &dir.join("run.json"),
        &(serde_json::to_string_pretty(&summary)? + "\n"),
    )?;
    if let Some(trace) = &run.trace {
        trace.save(&dir.join("trace.jsonl"))?;
    }
    println!(
        "{} seed={} best={} xpl_pct={} xpt_pct={} out={}",
        bench.id(),
        common.seed,
        fmt_f64(run.result.best.fitness),
        fmt_f64(run.balance.xpl_aggregate),
        fmt_f64(run.balance.xpt_aggregate),
        dir.display()
    );
    Ok(())
}

fn experiment(common: &Common, args: ExperimentArgs) -> Result<()> {
    let registry = load_registry(common)?;
    let functions: Vec<String> = match (args.suite, args.functions.is_empty()) {
        (Some(SuiteArg::Classical), _) => ids(&registry, Some(Suite::Classical)),
        (Some(SuiteArg::Cec2019), _) => ids(&registry, Some(Suite::Cec2019)),
        (Some(SuiteArg::All), _) | (None, true) => ids(&registry, None),
        (None, false) => args.functions,
    };
    let config = ExperimentConfig {
        functions,
        repetitions: args.reps,
        agents: args.agents,
        iterations: args.iterations,
        base_seed: common.seed,
        mode: args.mode.into(),
        output_dir: Some(out_dir(common, "out")),
        export_traces: args.trace,
    };
    let report = if args.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(args.threads)
            .build()?
            .install(|| run_experiment(&registry, &config))?
    } else {
        run_experiment(&registry, &config)?
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    lock.write_all(harness::report_csv(&report).as_bytes())?;
    for s in &report.suites {
        writeln!(
            lock,
            "# suite {}: functions={} mean_xpl_pct={} mean_xpt_pct={}",
            s.suite,
            s.functions,
            fmt_f64(s.mean_xpl_pct),
            fmt_f64(s.mean_xpt_pct)
        )?;
    }
    Ok(())
}

fn ids(registry: &Registry, suite: Option<Suite>) -> Vec<String> {
    registry
        .benchmarks()
        .iter()
        .filter(|b| suite.is_none_or(|s| b.spec().suite == s))
        .map(|b| b.id().to_string())
        .collect()
}

fn analyze(common: &Common, args: AnalyzeArgs) -> Result<()> {
    let trace = Trace::load(&args.trace)?;
    let balance = analyze_trace(&trace)?;
    if let Some(dir) = &common.out {
        let name = format!(
            "analysis_{}_seed{}.csv",
            trace.header.function, trace.header.seed
        );
        write(&dir.join(name), &balance_csv(&balance, None))?;
    }
    println!(
        "{} seed={} iterations={} div_max={} xpl_pct={} xpt_pct={}",
        trace.header.function,
        trace.header.seed,
        balance.div_series.len(),
        fmt_f64(balance.div_max),
        fmt_f64(balance.xpl_aggregate),
        fmt_f64(balance.xpt_aggregate)
    );
    Ok(())
}

fn report(common: &Common, args: ReportArgs) -> Result<()> {
    let report = harness::load_summary(&args.summary)
        .with_context(|| format!("reading {}", args.summary.display()))?;
    if report.functions.is_empty() {
        bail!("summary {} lists no functions", args.summary.display());
    }
    if let Some(dir) = &common.out {
        harness::write_report(&report, dir)?;
    }
    print!("{}", harness::report_csv(&report));
    Ok(())
}
