//! CEC2019 "100-digit challenge" functions.
//!
//! CEC01–CEC03 (Storn's Chebyshev fitting, inverse Hilbert matrix,
//! Lennard-Jones cluster) take no external data. CEC04–CEC10 are shifted and
//! rotated classics:
//!
//! ```text
//! z = M * (rate * (x - o))
//! ```
//!
//! with `o` from `shift_data_<k>.txt` (first 10 values) and `M` from
//! `M_<k>_D10.txt`. Every function adds a bias of 1, so the global minimum
//! of each is 1.0. The evaluation code mirrors the suite's C reference
//! implementation, including its scale rates.

use std::collections::BTreeMap;
use std::f64::consts::{E, PI};
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Dimension of the shifted and rotated functions.
pub const ROTATED_DIMS: usize = 10;

/// Ids (1-based) of the functions that need data files.
pub const DATA_FUNCTIONS: std::ops::RangeInclusive<u8> = 4..=10;

const BIAS: f64 = 1.0;

pub fn shift_file_name(k: u8) -> String {
    format!("shift_data_{k}.txt")
}

pub fn matrix_file_name(k: u8, dims: usize) -> String {
    format!("M_{k}_D{dims}.txt")
}

/// Shift vector and rotation matrix of one function.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftRotation {
    pub shift: Vec<f64>,
    /// Row-major `dims x dims`.
    pub rotation: Vec<Vec<f64>>,
}

/// Parsed data for CEC04–CEC10, keyed by function number.
#[derive(Debug, Clone, PartialEq)]
pub struct CecData {
    pub dir: PathBuf,
    pub functions: BTreeMap<u8, ShiftRotation>,
}

impl CecData {
    pub fn get(&self, k: u8) -> Option<&ShiftRotation> {
        self.functions.get(&k)
    }
}

/// Loads every shift vector and rotation matrix from `dir`.
///
/// All missing files are reported together. Parse and shape errors name the
/// file and the 1-based line.
pub fn load_cec_data(dir: &Path) -> Result<CecData> {
    let required: Vec<String> = DATA_FUNCTIONS
        .flat_map(|k| [shift_file_name(k), matrix_file_name(k, ROTATED_DIMS)])
        .collect();
    let missing: Vec<String> = required
        .iter()
        .filter(|name| !dir.join(name).is_file())
        .cloned()
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingData {
            dir: dir.to_path_buf(),
            files: missing,
        });
    }
    let mut functions = BTreeMap::new();
    for k in DATA_FUNCTIONS {
        let shift_path = dir.join(shift_file_name(k));
        let rows = parse_numbers(&shift_path)?;
        let values: Vec<f64> = rows.into_iter().flat_map(|(_, r)| r).collect();
        if values.len() < ROTATED_DIMS {
            return Err(Error::DataFormat {
                file: shift_path,
                line: 1,
                message: format!(
                    "shift vector has {} values, need at least {ROTATED_DIMS}",
                    values.len()
                ),
            });
        }
        let shift = values[..ROTATED_DIMS].to_vec();

        let matrix_path = dir.join(matrix_file_name(k, ROTATED_DIMS));
        let rows = parse_numbers(&matrix_path)?;
        if rows.len() != ROTATED_DIMS {
            let line = rows.last().map_or(1, |(l, _)| *l);
            return Err(Error::DataFormat {
                file: matrix_path,
                line,
                message: format!("expected {ROTATED_DIMS} matrix rows, found {}", rows.len()),
            });
        }
        if let Some((line, r)) = rows.iter().find(|(_, r)| r.len() != ROTATED_DIMS) {
            return Err(Error::DataFormat {
                file: matrix_path,
                line: *line,
                message: format!("expected {ROTATED_DIMS} columns, found {}", r.len()),
            });
        }
        let rotation = rows.into_iter().map(|(_, r)| r).collect();
        functions.insert(k, ShiftRotation { shift, rotation });
    }
    Ok(CecData {
        dir: dir.to_path_buf(),
        functions,
    })
}

/// Non-empty lines of whitespace-separated decimals, with line numbers.
fn parse_numbers(path: &Path) -> Result<Vec<(usize, Vec<f64>)>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>().map_err(|_| Error::DataFormat {
                    file: path.to_path_buf(),
                    line: idx + 1,
                    message: format!("malformed number `{tok}`"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push((idx + 1, row));
    }
    Ok(rows)
}

fn shift_rotate(x: &[f64], sr: &ShiftRotation, rate: f64) -> Vec<f64> {
    let y: Vec<f64> = x
        .iter()
        .zip(&sr.shift)
        .map(|(xi, oi)| (xi - oi) * rate)
        .collect();
    sr.rotation
        .iter()
        .map(|row| row.iter().zip(&y).map(|(m, v)| m * v).sum())
        .collect()
}

/// Evaluates CEC function `k` (1..=10). `data` must hold function `k` when
/// `k >= 4`.
pub(crate) fn evaluate(k: u8, x: &[f64], data: Option<&ShiftRotation>) -> f64 {
    let raw = match k {
        1 => chebyshev(x),
        2 => inverse_hilbert(x),
        3 => lennard_jones(x) + 12.7120622568,
        _ => {
            let sr = data.expect("shift/rotation data for rotated CEC function");
            match k {
                4 => rastrigin(&shift_rotate(x, sr, 5.12 / 100.0)),
                5 => griewank(&shift_rotate(x, sr, 600.0 / 100.0)),
                6 => weierstrass(&shift_rotate(x, sr, 0.5 / 100.0)),
                7 => schwefel(&shift_rotate(x, sr, 1000.0 / 100.0)),
                8 => expanded_schaffer_f6(&shift_rotate(x, sr, 1.0)),
                9 => happy_cat(&shift_rotate(x, sr, 5.0 / 100.0)),
                10 => ackley(&shift_rotate(x, sr, 1.0)),
                _ => unreachable!("CEC function {k}"),
            }
        }
    };
    raw + BIAS
}

/// Storn's Chebyshev polynomial fitting problem.
fn chebyshev(x: &[f64]) -> f64 {
    let nx = x.len();
    let (mut a, mut b) = (1.0_f64, 1.2_f64);
    let mut dx = 0.0;
    for _ in 0..nx.saturating_sub(2) {
        dx = 2.4 * b - a;
        a = b;
        b = dx;
    }
    let sample = 32 * nx;
    let dy = 2.0 / sample as f64;
    let horner = |y: f64| x[1..].iter().fold(x[0], |px, &c| y * px + c);
    let mut sum = 0.0;
    for i in 0..=sample {
        let px = horner(-1.0 + i as f64 * dy);
        if !(-1.0..=1.0).contains(&px) {
            sum += (1.0 - px.abs()).powi(2);
        }
    }
    // The reference implementation checks the y = 1.2 endpoint twice.
    for _ in 0..2 {
        let px = horner(1.2);
        if px < dx {
            sum += px * px;
        }
    }
    sum
}

/// Inverse Hilbert matrix problem; `x` is a row-major `b x b` matrix.
fn inverse_hilbert(x: &[f64]) -> f64 {
    let b = (x.len() as f64).sqrt() as usize;
    let mut sum = 0.0;
    for j in 0..b {
        for k in 0..b {
            let y: f64 = (0..b).map(|i| x[k + b * i] / (j + i + 1) as f64).sum();
            sum += if j == k { (y - 1.0).abs() } else { y.abs() };
        }
    }
    sum
}

/// Lennard-Jones potential of `x.len() / 3` atoms.
fn lennard_jones(x: &[f64]) -> f64 {
    let atoms = x.len() / 3;
    let mut sum = 0.0;
    for i in 0..atoms.saturating_sub(1) {
        for j in i + 1..atoms {
            let (a, b) = (3 * i, 3 * j);
            let ed: f64 = (0..3).map(|d| (x[a + d] - x[b + d]).powi(2)).sum();
            let ud = ed * ed * ed;
            if ud > 1.0e-10 {
                sum += (1.0 / ud - 2.0) / ud;
            } else {
                sum += 1.0e20;
            }
        }
    }
    sum
}

fn rastrigin(z: &[f64]) -> f64 {
    z.iter()
        .map(|v| v * v - 10.0 * (2.0 * PI * v).cos() + 10.0)
        .sum()
}

fn griewank(z: &[f64]) -> f64 {
    let s: f64 = z.iter().map(|v| v * v).sum();
    let p: f64 = z
        .iter()
        .enumerate()
        .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
        .product();
    1.0 + s / 4000.0 - p
}

fn weierstrass(z: &[f64]) -> f64 {
    const A: f64 = 0.5;
    const B: f64 = 3.0;
    const K_MAX: i32 = 20;
    let mut f = 0.0;
    let mut offset = 0.0;
    for (idx, v) in z.iter().enumerate() {
        let mut sum = 0.0;
        let mut sum2 = 0.0;
        for k in 0..=K_MAX {
            let ak = A.powi(k);
            let bk = B.powi(k);
            sum += ak * (2.0 * PI * bk * (v + 0.5)).cos();
            sum2 += ak * (2.0 * PI * bk * 0.5).cos();
        }
        f += sum;
        if idx == 0 {
            offset = sum2;
        }
    }
    f - z.len() as f64 * offset
}

fn schwefel(z: &[f64]) -> f64 {
    let nx = z.len() as f64;
    let mut f = 0.0;
    for &v in z {
        let zi = v + 4.209687462275036e2;
        if zi > 500.0 {
            let m = zi % 500.0;
            f -= (500.0 - m) * (500.0 - m).sqrt().sin();
            let t = (zi - 500.0) / 100.0;
            f += t * t / nx;
        } else if zi < -500.0 {
            let m = zi.abs() % 500.0;
            f -= (-500.0 + m) * (500.0 - m).sqrt().sin();
            let t = (zi + 500.0) / 100.0;
            f += t * t / nx;
        } else {
            f -= zi * zi.abs().sqrt().sin();
        }
    }
    f + 4.189828872724338e2 * nx
}

fn expanded_schaffer_f6(z: &[f64]) -> f64 {
    let n = z.len();
    (0..n)
        .map(|i| {
            let (a, b) = (z[i], z[(i + 1) % n]);
            let r2 = a * a + b * b;
            let t1 = r2.sqrt().sin().powi(2);
            let t2 = 1.0 + 0.001 * r2;
            0.5 + (t1 - 0.5) / (t2 * t2)
        })
        .sum()
}

fn happy_cat(z: &[f64]) -> f64 {
    const ALPHA: f64 = 1.0 / 8.0;
    let nx = z.len() as f64;
    let mut r2 = 0.0;
    let mut sum_z = 0.0;
    for v in z {
        let zi = v - 1.0;
        r2 += zi * zi;
        sum_z += zi;
    }
    (r2 - nx).abs().powf(2.0 * ALPHA) + (0.5 * r2 + sum_z) / nx + 0.5
}

fn ackley(z: &[f64]) -> f64 {
    let n = z.len() as f64;
    let s1: f64 = z.iter().map(|v| v * v).sum();
    let s2: f64 = z.iter().map(|v| (2.0 * PI * v).cos()).sum();
    -20.0 * (-0.2 * (s1 / n).sqrt()).exp() - (s2 / n).exp() + 20.0 + E
}

/// Coefficients of the degree-8 Chebyshev polynomial, highest degree first:
/// the exact solution of CEC01.
pub const CHEBYSHEV_T8: [f64; 9] = [128.0, 0.0, -256.0, 0.0, 160.0, 0.0, -32.0, 0.0, 1.0];

/// Inverse of the 4x4 Hilbert matrix, row-major: the exact solution of CEC02.
pub const INVERSE_HILBERT_4: [f64; 16] = [
    16.0, -120.0, 240.0, -140.0, -120.0, 1200.0, -2700.0, 1680.0, 240.0, -2700.0, 6480.0, -4200.0,
    -140.0, 1680.0, -4200.0, 2800.0,
];
