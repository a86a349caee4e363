//! Acceptance criteria. Each test prints one `[PASS]` or `[FAIL]` line.
//!
//! Run with `cargo test --release --test acceptance -- --nocapture` to see
//! every line.

mod common;

use std::fs;
use std::path::Path;
use std::sync::OnceLock;

use tempfile::TempDir;

use woa_balance::benchmarks::{self, load_cec_data, Registry, Suite};
use woa_balance::diversity::{dimension_diversity, median, swarm_diversity};
use woa_balance::domain::{Bounds, Objective};
use woa_balance::harness::{run_experiment, window_mean, ExperimentConfig, ExperimentReport};
use woa_balance::rng::RngStream;
use woa_balance::trace::{TraceHeader, TraceRecorder};
use woa_balance::woa::{self, coefficient_a, sample_coefficients, BranchCounts, WoaConfig};

use common::*;

fn verdict(criterion: &str, pass: bool, detail: String) {
    println!(
        "[{}] {criterion}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{criterion}: {detail}");
}

fn registry() -> &'static Registry {
    benchmarks::registry().expect("benchmark registry")
}

fn all_ids() -> Vec<String> {
    registry()
        .benchmarks()
        .iter()
        .map(|b| b.id().to_string())
        .collect()
}

fn protocol_config(out: &Path) -> ExperimentConfig {
    let mut config = ExperimentConfig::new(all_ids());
    config.output_dir = Some(out.to_path_buf());
    config
}

/// Default protocol over all 33 functions, run once and shared.
fn protocol() -> &'static (TempDir, ExperimentReport) {
    static SHARED: OnceLock<(TempDir, ExperimentReport)> = OnceLock::new();
    SHARED.get_or_init(|| {
        let dir = TempDir::new().unwrap();
        let report = run_experiment(registry(), &protocol_config(dir.path())).unwrap();
        (dir, report)
    })
}

#[test]
fn complementarity() {
    let (_, report) = protocol();
    let mut worst_iter = 0.0f64;
    let mut worst_agg = 0.0f64;
    for f in &report.functions {
        for run in &f.runs {
            for (l, t) in run.xpl_series.iter().zip(&run.xpt_series) {
                worst_iter = worst_iter.max((l + t - 100.0).abs());
            }
            worst_agg = worst_agg.max((run.xpl_pct + run.xpt_pct - 100.0).abs());
        }
        worst_agg = worst_agg.max((f.mean_xpl_pct + f.mean_xpt_pct - 100.0).abs());
    }
    for s in &report.suites {
        worst_agg = worst_agg.max((s.mean_xpl_pct + s.mean_xpt_pct - 100.0).abs());
    }
    verdict(
        "complementarity XPL% + XPT% = 100",
        worst_iter <= 1e-9 && worst_agg <= 1e-6,
        format!("max per-iteration error {worst_iter:e} (tol 1e-9), max aggregate error {worst_agg:e} (tol 1e-6)"),
    );
}

#[test]
fn diversity_matches_naive_oracle() {
    let mut rng = RngStream::new(2024);
    let mut worst = 0.0f64;
    let cases = 1000;
    for _ in 0..cases {
        let n = 2 + rng.index(9);
        let d = 1 + rng.index(6);
        let scale = 10f64.powf(rng.uniform_in(-3.0, 3.0));
        let pop: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| rng.uniform_in(-scale, scale)).collect())
            .collect();
        let (div_j, div) = naive_diversity(&pop);
        let snap = swarm_diversity(1, &pop).unwrap();
        for j in 0..d {
            let col: Vec<f64> = pop.iter().map(|p| p[j]).collect();
            worst = worst.max((median(&col).unwrap() - naive_median(&col)).abs() / scale);
            worst = worst.max((dimension_diversity(&pop, j).unwrap() - div_j[j]).abs() / scale);
            worst = worst.max((snap.div_j[j] - div_j[j]).abs() / scale);
        }
        worst = worst.max((snap.div - div).abs() / scale);
    }
    verdict(
        "diversity equals naive double-loop oracle",
        worst <= 1e-12,
        format!("{cases} random populations, max relative error {worst:e} (tol 1e-12)"),
    );
}

struct Sphere1 {
    bounds: Bounds,
}

impl Objective for Sphere1 {
    fn name(&self) -> &str {
        "sphere1"
    }
    fn bounds(&self) -> &Bounds {
        &self.bounds
    }
    fn evaluate(&self, x: &[f64], _: &mut RngStream) -> f64 {
        x[0] * x[0]
    }
}

fn sq(x: f64) -> f64 {
    x * x
}

#[test]
fn woa_matches_hand_replay() {
    let f = Sphere1 {
        bounds: Bounds::uniform(-10.0, 10.0, 1).unwrap(),
    };
    let config = WoaConfig {
        agents: 2,
        iterations: 3,
        ..WoaConfig::default()
    };
    let mut worst = 0.0f64;
    let mut branches = BranchCounts::default();
    let seeds = 40;
    for seed in 0..seeds {
        let mut recorder = TraceRecorder::new(TraceHeader::new("sphere1", seed, 2, 1, 3));
        let result = woa::run(&f, &config, seed, Some(&mut recorder)).unwrap();
        for b in &result.branches {
            branches.add(b);
        }
        let trace = recorder.into_trace();
        let expected = replay_woa_1d(seed, 2, 3, -10.0, 10.0, sq);
        for (it, exp) in trace.iterations.iter().zip(&expected) {
            for (got, want) in it.positions.iter().zip(exp) {
                worst = worst.max((got[0] - want).abs());
            }
        }
    }
    let covered = branches.spiral > 0 && branches.encircle > 0 && branches.explore > 0;
    verdict(
        "WOA trace equals straight-line replay (2 agents, 1-D, 3 iterations)",
        worst <= 1e-12 && covered,
        format!(
            "{seeds} seeds, max error {worst:e} (tol 1e-12), branches spiral={} encircle={} explore={}",
            branches.spiral, branches.encircle, branches.explore
        ),
    );
}

#[test]
fn schedule_endpoints() {
    let t = 500;
    let a0 = coefficient_a(0, t).unwrap();
    let at = coefficient_a(t, t).unwrap();
    let monotone = (0..t).all(|i| coefficient_a(i + 1, t).unwrap() < coefficient_a(i, t).unwrap());
    verdict(
        "a decreases linearly from 2 to 0",
        a0 == 2.0 && at == 0.0 && monotone,
        format!("a(0)={a0}, a(T)={at}, strictly decreasing={monotone}"),
    );
}

#[test]
fn coefficient_a_bounded() {
    let mut rng = RngStream::new(7);
    let draws = 100_000;
    let mut violations = 0;
    for _ in 0..draws {
        let a = rng.uniform_in(0.0, 2.0);
        let k = sample_coefficients(a, &mut rng);
        if k.big_a.abs() > a {
            violations += 1;
        }
    }
    verdict(
        "|A| <= a",
        violations == 0,
        format!("{draws} draws, {violations} violations"),
    );
}

fn branch_runs() -> Vec<Vec<BranchCounts>> {
    let config = WoaConfig::default();
    let mut out = Vec::new();
    for id in ["F1", "F9", "F10", "F21", "CEC01", "CEC05"] {
        let bench = registry().get(id).unwrap();
        for seed in 0..3 {
            out.push(woa::run(bench, &config, seed, None).unwrap().branches);
        }
    }
    out
}

#[test]
fn no_exploration_in_second_half() {
    let runs = branch_runs();
    let half = WoaConfig::default().iterations / 2;
    let mut late_explore = 0;
    let mut early_explore = 0;
    for branches in &runs {
        for (t, b) in branches.iter().enumerate() {
            if t > half {
                late_explore += b.explore;
            } else {
                early_explore += b.explore;
            }
        }
    }
    verdict(
        "no exploration updates for t > T/2",
        late_explore == 0,
        format!(
            "{} runs, explore updates with t > T/2: {late_explore}, before: {early_explore}",
            runs.len()
        ),
    );
}

#[test]
fn spiral_frequency() {
    let mut total = BranchCounts::default();
    for branches in branch_runs() {
        for b in &branches {
            total.add(b);
        }
    }
    let frac = total.spiral as f64 / total.total() as f64;
    verdict(
        "spiral branch taken in 50% +- 3% of updates",
        total.total() >= 10_000 && (frac - 0.5).abs() <= 0.03,
        format!("{} updates, spiral fraction {:.4}", total.total(), frac),
    );
}

#[test]
fn woa_sphere_converges() {
    let (_, report) = protocol();
    let f1 = report.function("F1").unwrap();
    let mut best: Vec<f64> = f1.runs.iter().map(|r| r.final_best).collect();
    best.sort_by(f64::total_cmp);
    let med = (best[14] + best[15]) / 2.0;
    verdict(
        "F1 median final best below 1e-7",
        best.len() == 30 && med < 1e-7,
        format!("{} runs, median {med:e}", best.len()),
    );
}

fn xpl_of(report: &ExperimentReport, id: &str) -> f64 {
    report.function(id).unwrap().mean_xpl_pct
}

#[test]
fn classical_suite_average() {
    let (_, report) = protocol();
    let avg = report.suite("classical").unwrap().mean_xpl_pct;
    let table_mean = TABLE1_XPL.iter().sum::<f64>() / TABLE1_XPL.len() as f64;
    verdict(
        "classical suite-average XPL% within 51.07 +- 5",
        (avg - 51.07).abs() <= 5.0,
        format!("measured {avg:.4}, stated {STATED_CLASSICAL_XPL}, table mean {table_mean:.4}"),
    );
}

fn per_function(table: &[f64], prefix: &str, report: &ExperimentReport) -> (usize, String) {
    let mut misses = 0;
    let mut parts = Vec::new();
    for (i, want) in table.iter().enumerate() {
        let id = format!(
            "{prefix}{}",
            if prefix == "CEC" {
                format!("{:02}", i + 1)
            } else {
                (i + 1).to_string()
            }
        );
        let got = xpl_of(report, &id);
        if (got - want).abs() > 15.0 {
            misses += 1;
        }
        parts.push(format!("{id}={got:.2}/{want}"));
    }
    (misses, parts.join(" "))
}

#[test]
fn classical_per_function() {
    let (_, report) = protocol();
    let (misses, detail) = per_function(&TABLE1_XPL, "F", report);
    verdict(
        "classical per-function XPL% within +-15 of table",
        misses == 0,
        format!("{misses}/23 outside; measured/table: {detail}"),
    );
}

#[test]
fn cec_per_function() {
    let (_, report) = protocol();
    let (misses, detail) = per_function(&TABLE2_XPL, "CEC", report);
    verdict(
        "CEC2019 per-function XPL% within +-15 of table",
        misses == 0,
        format!("{misses}/10 outside; measured/table: {detail}"),
    );
}

#[test]
fn cec_suite_average() {
    let (_, report) = protocol();
    let avg = report.suite("cec2019").unwrap().mean_xpl_pct;
    let table_mean = TABLE2_XPL.iter().sum::<f64>() / TABLE2_XPL.len() as f64;
    verdict(
        "CEC2019 suite-average XPL% within table mean +- 5",
        (avg - table_mean).abs() <= 5.0,
        format!(
            "measured {avg:.4}, table mean {table_mean:.4}; the text states {STATED_CEC_XPL}, which equals the CEC01 row"
        ),
    );
}

fn classical_curves(report: &ExperimentReport) -> Vec<(&str, &[f64], &[f64])> {
    report
        .functions
        .iter()
        .filter(|f| f.suite == Suite::Classical)
        .map(|f| (f.function_id.as_str(), &f.xpl_curve[..], &f.xpt_curve[..]))
        .collect()
}

#[test]
fn curve_early_exploration() {
    let (_, report) = protocol();
    let curves = classical_curves(report);
    let hits: Vec<String> = curves
        .iter()
        .filter_map(|(id, xpl, _)| {
            let m = window_mean(xpl, 0..25);
            (55.0..=85.0).contains(&m).then(|| format!("{id}={m:.1}"))
        })
        .collect();
    verdict(
        "early window (iterations 1-25) mean XPL% in [55, 85] for >= 15 of 23",
        hits.len() >= 15,
        format!("{}/{}: {}", hits.len(), curves.len(), hits.join(" ")),
    );
}

#[test]
fn curve_final_exploitation() {
    let (_, report) = protocol();
    let curves = classical_curves(report);
    let t = report.config.iterations;
    let low: Vec<String> = curves
        .iter()
        .filter_map(|(id, _, xpt)| {
            let m = window_mean(xpt, t - 25..t);
            (m <= 65.0).then(|| format!("{id}={m:.1}"))
        })
        .collect();
    verdict(
        "final window (last 25 iterations) mean XPT% > 65 for every classical function",
        low.is_empty(),
        format!("{} at or below 65: [{}]", low.len(), low.join(" ")),
    );
}

#[test]
fn curve_non_converging_case() {
    let (_, report) = protocol();
    let curves = classical_curves(report);
    let t = report.config.iterations;
    let hits: Vec<String> = curves
        .iter()
        .filter_map(|(id, _, xpt)| {
            let m = window_mean(xpt, t - 25..t);
            (20.0..=60.0).contains(&m).then(|| format!("{id}={m:.1}"))
        })
        .collect();
    let lowest = curves
        .iter()
        .map(|(_, _, xpt)| window_mean(xpt, t - 25..t))
        .fold(f64::INFINITY, f64::min);
    verdict(
        "at least one function with final-window mean XPT% in [20, 60]",
        !hits.is_empty(),
        format!(
            "{} found: [{}]; lowest final XPT% {lowest:.2}",
            hits.len(),
            hits.join(" ")
        ),
    );
}

#[test]
fn benchmark_optima() {
    let reg = registry();
    let mut noise = RngStream::noise(0);
    let mut worst = 0.0f64;
    let mut checked = 0;
    for b in reg.benchmarks() {
        let spec = b.spec();
        if let (Some(x), Some(opt)) = (&spec.optimum_location, spec.known_optimum) {
            let v = b.evaluate(x, &mut noise);
            worst = worst.max((v - opt).abs());
            checked += 1;
        }
    }
    for id in ["F1", "F9", "F10", "F11"] {
        let v = reg.evaluate(id, &vec![0.0; 30], &mut noise).unwrap();
        worst = worst.max(v.abs());
        checked += 1;
    }
    let data = load_cec_data(&benchmarks::default_cec_data_dir()).unwrap();
    for k in 4..=10u8 {
        let id = format!("CEC{k:02}");
        let shift = &data.get(k).unwrap().shift;
        let v = reg.evaluate(&id, shift, &mut noise).unwrap();
        worst = worst.max((v - 1.0).abs());
        checked += 1;
    }
    verdict(
        "benchmark values at stored optima",
        worst <= 1e-8,
        format!("{checked} checks, max deviation {worst:e} (tol 1e-8)"),
    );
}

fn csv_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else if p.extension().is_some_and(|e| e == "csv" || e == "jsonl") {
                let rel = p.strip_prefix(dir).unwrap().display().to_string();
                out.push((rel, fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn determinism() {
    let (first_dir, _) = protocol();
    let second = TempDir::new().unwrap();
    run_experiment(registry(), &protocol_config(second.path())).unwrap();
    let a = csv_files(first_dir.path());
    let b = csv_files(second.path());
    let same_names = a.iter().map(|x| &x.0).eq(b.iter().map(|x| &x.0));
    let differing: Vec<&str> = a
        .iter()
        .zip(&b)
        .filter(|(x, y)| x.1 != y.1)
        .map(|(x, _)| x.0.as_str())
        .collect();
    verdict(
        "identical configuration and seed give bitwise-identical outputs",
        same_names && differing.is_empty() && !a.is_empty(),
        format!("{} files compared, {} differ", a.len(), differing.len()),
    );
}
