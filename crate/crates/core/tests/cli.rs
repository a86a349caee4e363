use std::fs;
use std::process::{Command, Output};

use tempfile::TempDir;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_woa-balance"))
        .args(args)
        .env_remove("WOA_BALANCE_OUT")
        .env_remove("WOA_BALANCE_CEC_DATA")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field<'a>(line: &'a str, key: &str) -> &'a str {
    line.split_whitespace()
        .find_map(|t| t.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .unwrap()
}

#[test]
fn bench_list_prints_every_function() {
    let text = stdout(&cli(&["bench", "list"]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 33);
    assert_eq!(lines[0], "F1\tunimodal\t30\t[-100,100]^30");
    assert!(lines[16].starts_with("F17\tfixed-dimension-multimodal\t2\t"));
    assert!(lines[32].starts_with("CEC10\t"));
}

#[test]
fn run_trace_then_analyze_agree() {
    let out = TempDir::new().unwrap();
    let o = out.path().to_str().unwrap();
    let run = stdout(&cli(&[
        "run",
        "--function",
        "f9",
        "--iterations",
        "60",
        "--seed",
        "5",
        "--trace",
        "--out",
        o,
    ]));
    let trace = out.path().join("run_F9_seed5/trace.jsonl");
    assert!(trace.is_file());
    let analyzed = stdout(&cli(&["analyze", trace.to_str().unwrap(), "--out", o]));
    assert_eq!(field(&run, "xpl_pct"), field(&analyzed, "xpl_pct"));
    assert_eq!(field(&run, "xpt_pct"), field(&analyzed, "xpt_pct"));
    let csv = fs::read_to_string(out.path().join("analysis_F9_seed5.csv")).unwrap();
    assert_eq!(csv.lines().count(), 61);
    let run_csv = fs::read_to_string(out.path().join("run_F9_seed5/balance.csv")).unwrap();
    assert_eq!(run_csv.lines().count(), 61);
}

#[test]
fn experiment_and_report_reemit_outputs() {
    let out = TempDir::new().unwrap();
    let o = out.path().to_str().unwrap();
    let printed = stdout(&cli(&[
        "experiment",
        "--functions",
        "F1,CEC04",
        "--reps",
        "2",
        "--agents",
        "5",
        "--iterations",
        "10",
        "--threads",
        "2",
        "--out",
        o,
    ]));
    assert!(printed.contains("# suite all: functions=2"));
    let again = TempDir::new().unwrap();
    let summary = out.path().join("summary.jsonl");
    let reprinted = stdout(&cli(&[
        "report",
        summary.to_str().unwrap(),
        "--out",
        again.path().to_str().unwrap(),
    ]));
    assert!(printed.starts_with(&reprinted));
    for name in [
        "report.csv",
        "suites.csv",
        "curves/F1_balance.csv",
        "curves/CEC04_convergence.csv",
    ] {
        assert_eq!(
            fs::read(out.path().join(name)).unwrap(),
            fs::read(again.path().join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cli(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(cli(&["run"]).status.code(), Some(2));
    assert_eq!(
        cli(&["experiment", "--suite", "all", "--functions", "F1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn runtime_errors_exit_1() {
    let o = cli(&["run", "--function", "F42"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown function id `F42`"));
    let missing = cli(&["bench", "list", "--data-dir", "/nonexistent/cec"]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("shift_data_4.txt"));
}
