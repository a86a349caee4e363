#![allow(dead_code)]

//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's update rules or diversity code.

use std::f64::consts::PI;

use woa_balance::rng::RngStream;

/// Exploration percentages of the classical functions F1..F23 as published.
pub const TABLE1_XPL: [f64; 23] = [
    45.7196, 51.7746, 58.7007, 56.2336, 46.647, 49.7779, 58.3987, 41.6489, 49.8063, 56.1418,
    52.3485, 56.5455, 44.8052, 60.9302, 46.94, 50.239, 62.4855, 54.5377, 45.8668, 47.7914, 46.624,
    44.968, 45.5886,
];

/// Exploration percentages of CEC01..CEC10 as published.
pub const TABLE2_XPL: [f64; 10] = [
    50.8883, 53.8929, 61.2, 57.9113, 59.2973, 56.2303, 59.7024, 59.7618, 55.4782, 61.5279,
];

/// Suite averages stated in the text accompanying the tables.
pub const STATED_CLASSICAL_XPL: f64 = 51.06606522;
pub const STATED_CEC_XPL: f64 = 50.8883;

/// Straight-line replay of WOA on a 1-D box, consuming the optimizer stream
/// of `seed` in the documented order. Returns the positions after every
/// iteration.
pub fn replay_woa_1d(
    seed: u64,
    agents: usize,
    iterations: usize,
    lo: f64,
    hi: f64,
    f: fn(f64) -> f64,
) -> Vec<Vec<f64>> {
    let mut rng = RngStream::new(seed);
    let mut x: Vec<f64> = (0..agents)
        .map(|_| lo + (hi - lo) * rng.uniform())
        .collect();
    let mut best_x = x[0];
    let mut best_f = f(x[0]);
    for &xi in &x[1..] {
        if f(xi) < best_f {
            best_f = f(xi);
            best_x = xi;
        }
    }
    let mut out = Vec::new();
    for t in 0..iterations {
        let a = 2.0 - 2.0 * t as f64 / iterations as f64;
        let prev = x.clone();
        for i in 0..agents {
            let r1 = rng.uniform();
            let r2 = rng.uniform();
            let p = rng.uniform();
            let l = -1.0 + 2.0 * rng.uniform();
            let big_a = 2.0 * a * r1 - a;
            let c = 2.0 * r2;
            let moved = if p >= 0.5 {
                (best_x - prev[i]).abs() * l.exp() * (2.0 * PI * l).cos() + best_x
            } else if big_a.abs() < 1.0 {
                best_x - big_a * (c * best_x - prev[i]).abs()
            } else {
                let k = ((rng.uniform() * agents as f64).floor() as usize).min(agents - 1);
                prev[k] - big_a * (c * prev[k] - prev[i]).abs()
            };
            x[i] = if moved < lo {
                lo
            } else if moved > hi {
                hi
            } else {
                moved
            };
        }
        // Best refreshed once per iteration, earliest index on ties.
        let mut cand = 0;
        for i in 1..agents {
            if f(x[i]) < f(x[cand]) {
                cand = i;
            }
        }
        if f(x[cand]) < best_f {
            best_f = f(x[cand]);
            best_x = x[cand];
        }
        out.push(x.clone());
    }
    out
}

/// Median by insertion sort.
pub fn naive_median(values: &[f64]) -> f64 {
    let mut v: Vec<f64> = Vec::with_capacity(values.len());
    for &x in values {
        let pos = v.iter().position(|&y| y > x).unwrap_or(v.len());
        v.insert(pos, x);
    }
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Double loop over dimensions and agents.
#[allow(clippy::needless_range_loop)]
pub fn naive_diversity(pop: &[Vec<f64>]) -> (Vec<f64>, f64) {
    let n = pop.len();
    let d = pop[0].len();
    let mut div_j = vec![0.0; d];
    for j in 0..d {
        let col: Vec<f64> = (0..n).map(|i| pop[i][j]).collect();
        let med = naive_median(&col);
        let mut s = 0.0;
        for i in 0..n {
            s += (med - pop[i][j]).abs();
        }
        div_j[j] = s / n as f64;
    }
    let mut total = 0.0;
    for v in &div_j {
        total += v;
    }
    (div_j.clone(), total / d as f64)
}
