//! The 23 classical test functions F1–F23.
//!
//! Definitions, ranges and dimensions follow the benchmark set published with
//! the original Whale Optimization Algorithm. F6 uses `|x + 0.5|^2`, as in the
//! reference MATLAB code for that set, and F7 adds uniform noise on `[0, 1)`.

use std::f64::consts::{E, PI};

use crate::rng::RngStream;

pub(crate) fn evaluate(id: u8, x: &[f64], noise: &mut RngStream) -> f64 {
    match id {
        1 => x.iter().map(|v| v * v).sum(),
        2 => {
            let s: f64 = x.iter().map(|v| v.abs()).sum();
            let p: f64 = x.iter().map(|v| v.abs()).product();
            s + p
        }
        3 => {
            let mut partial = 0.0;
            let mut total = 0.0;
            for v in x {
                partial += v;
                total += partial * partial;
            }
            total
        }
        4 => x.iter().fold(0.0, |m, v| m.max(v.abs())),
        5 => x
            .windows(2)
            .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (w[0] - 1.0).powi(2))
            .sum(),
        6 => x.iter().map(|v| (v + 0.5).abs().powi(2)).sum(),
        7 => {
            let s: f64 = x
                .iter()
                .enumerate()
                .map(|(i, v)| (i + 1) as f64 * v.powi(4))
                .sum();
            s + noise.uniform()
        }
        8 => x.iter().map(|v| -v * v.abs().sqrt().sin()).sum(),
        9 => {
            let s: f64 = x.iter().map(|v| v * v - 10.0 * (2.0 * PI * v).cos()).sum();
            s + 10.0 * x.len() as f64
        }
        10 => ackley(x),
        11 => {
            let s: f64 = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
            let p: f64 = x
                .iter()
                .enumerate()
                .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
                .product();
            s - p + 1.0
        }
        12 => penalized_1(x),
        13 => penalized_2(x),
        14 => foxholes(x),
        15 => kowalik(x),
        16 => {
            let (a, b) = (x[0], x[1]);
            4.0 * a * a - 2.1 * a.powi(4) + a.powi(6) / 3.0 + a * b - 4.0 * b * b + 4.0 * b.powi(4)
        }
        17 => {
            let (a, b) = (x[0], x[1]);
            (b - a * a * 5.1 / (4.0 * PI * PI) + 5.0 / PI * a - 6.0).powi(2)
                + 10.0 * (1.0 - 1.0 / (8.0 * PI)) * a.cos()
                + 10.0
        }
        18 => {
            let (a, b) = (x[0], x[1]);
            (1.0 + (a + b + 1.0).powi(2)
                * (19.0 - 14.0 * a + 3.0 * a * a - 14.0 * b + 6.0 * a * b + 3.0 * b * b))
                * (30.0
                    + (2.0 * a - 3.0 * b).powi(2)
                        * (18.0 - 32.0 * a + 12.0 * a * a + 48.0 * b - 36.0 * a * b + 27.0 * b * b))
        }
        19 => hartmann(x, &HARTMANN3_A, &HARTMANN3_P),
        20 => hartmann(x, &HARTMANN6_A, &HARTMANN6_P),
        21 => shekel(x, 5),
        22 => shekel(x, 7),
        23 => shekel(x, 10),
        _ => unreachable!("classical function id {id}"),
    }
}

fn ackley(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let sq: f64 = x.iter().map(|v| v * v).sum();
    let cs: f64 = x.iter().map(|v| (2.0 * PI * v).cos()).sum();
    -20.0 * (-0.2 * (sq / n).sqrt()).exp() - (cs / n).exp() + 20.0 + E
}

fn u_penalty(v: f64, a: f64, k: f64, m: i32) -> f64 {
    if v > a {
        k * (v - a).powi(m)
    } else if v < -a {
        k * (-v - a).powi(m)
    } else {
        0.0
    }
}

fn penalized_1(x: &[f64]) -> f64 {
    let n = x.len();
    let y = |v: f64| 1.0 + (v + 1.0) / 4.0;
    let mut inner = 10.0 * (PI * y(x[0])).sin().powi(2);
    for i in 0..n - 1 {
        inner += (y(x[i]) - 1.0).powi(2) * (1.0 + 10.0 * (PI * y(x[i + 1])).sin().powi(2));
    }
    inner += (y(x[n - 1]) - 1.0).powi(2);
    let penalty: f64 = x.iter().map(|&v| u_penalty(v, 10.0, 100.0, 4)).sum();
    PI / n as f64 * inner + penalty
}

fn penalized_2(x: &[f64]) -> f64 {
    let n = x.len();
    let mut inner = (3.0 * PI * x[0]).sin().powi(2);
    for i in 0..n - 1 {
        inner += (x[i] - 1.0).powi(2) * (1.0 + (3.0 * PI * x[i + 1]).sin().powi(2));
    }
    inner += (x[n - 1] - 1.0).powi(2) * (1.0 + (2.0 * PI * x[n - 1]).sin().powi(2));
    let penalty: f64 = x.iter().map(|&v| u_penalty(v, 5.0, 100.0, 4)).sum();
    0.1 * inner + penalty
}

const FOXHOLE_GRID: [f64; 5] = [-32.0, -16.0, 0.0, 16.0, 32.0];

fn foxholes(x: &[f64]) -> f64 {
    let mut s = 0.0;
    for j in 0..25 {
        let a0 = FOXHOLE_GRID[j % 5];
        let a1 = FOXHOLE_GRID[j / 5];
        let b = (x[0] - a0).powi(6) + (x[1] - a1).powi(6);
        s += 1.0 / ((j + 1) as f64 + b);
    }
    1.0 / (1.0 / 500.0 + s)
}

const KOWALIK_A: [f64; 11] = [
    0.1957, 0.1947, 0.1735, 0.16, 0.0844, 0.0627, 0.0456, 0.0342, 0.0323, 0.0235, 0.0246,
];
const KOWALIK_B_INV: [f64; 11] = [0.25, 0.5, 1.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0];

fn kowalik(x: &[f64]) -> f64 {
    KOWALIK_A
        .iter()
        .zip(KOWALIK_B_INV)
        .map(|(&a, binv)| {
            let b = 1.0 / binv;
            let model = x[0] * (b * b + x[1] * b) / (b * b + x[2] * b + x[3]);
            (a - model).powi(2)
        })
        .sum()
}

const HARTMANN_C: [f64; 4] = [1.0, 1.2, 3.0, 3.2];
const HARTMANN3_A: [[f64; 3]; 4] = [
    [3.0, 10.0, 30.0],
    [0.1, 10.0, 35.0],
    [3.0, 10.0, 30.0],
    [0.1, 10.0, 35.0],
];
const HARTMANN3_P: [[f64; 3]; 4] = [
    [0.3689, 0.117, 0.2673],
    [0.4699, 0.4387, 0.747],
    [0.1091, 0.8732, 0.5547],
    [0.03815, 0.5743, 0.8828],
];
const HARTMANN6_A: [[f64; 6]; 4] = [
    [10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
    [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
    [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
    [17.0, 8.0, 0.05, 10.0, 0.1, 14.0],
];
const HARTMANN6_P: [[f64; 6]; 4] = [
    [0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886],
    [0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991],
    [0.2348, 0.1415, 0.3522, 0.2883, 0.3047, 0.6650],
    [0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381],
];

fn hartmann<const D: usize>(x: &[f64], a: &[[f64; D]; 4], p: &[[f64; D]; 4]) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        let e: f64 = (0..D).map(|j| a[i][j] * (x[j] - p[i][j]).powi(2)).sum();
        s -= HARTMANN_C[i] * (-e).exp();
    }
    s
}

const SHEKEL_A: [[f64; 4]; 10] = [
    [4.0, 4.0, 4.0, 4.0],
    [1.0, 1.0, 1.0, 1.0],
    [8.0, 8.0, 8.0, 8.0],
    [6.0, 6.0, 6.0, 6.0],
    [3.0, 7.0, 3.0, 7.0],
    [2.0, 9.0, 2.0, 9.0],
    [5.0, 5.0, 3.0, 3.0],
    [8.0, 1.0, 8.0, 1.0],
    [6.0, 2.0, 6.0, 2.0],
    [7.0, 3.6, 7.0, 3.6],
];
const SHEKEL_C: [f64; 10] = [0.1, 0.2, 0.2, 0.4, 0.4, 0.6, 0.3, 0.7, 0.5, 0.5];

fn shekel(x: &[f64], m: usize) -> f64 {
    (0..m)
        .map(|i| {
            let d: f64 = (0..4).map(|j| (x[j] - SHEKEL_A[i][j]).powi(2)).sum();
            -1.0 / (d + SHEKEL_C[i])
        })
        .sum()
}
