//! Dimension-wise diversity and exploration/exploitation percentages.
//!
//! For a population of `n` agents in `D` dimensions:
//!
//! ```text
//! Div_j = (1/n) * sum_i |median(x^j) - x_i^j|
//! Div   = (1/D) * sum_j Div_j
//! XPL%  = 100 * Div / Div_max
//! XPT%  = 100 * |Div - Div_max| / Div_max
//! ```
//!
//! `Div_max` is the largest `Div` over the whole run, so percentages are only
//! final once the run is complete. A run whose diversity is zero at every
//! iteration is reported as fully exploitative (XPL 0%, XPT 100%).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trace::Trace;
use crate::woa::{IterationHook, IterationView};

/// Median of `values`; even lengths average the two central order statistics.
pub fn median(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::invalid("median of an empty slice"));
    }
    let mut sorted = values.to_vec();
    Ok(median_in_place(&mut sorted))
}

fn median_in_place(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

fn check_matrix<P: AsRef<[f64]>>(positions: &[P]) -> Result<usize> {
    if positions.len() < 2 {
        return Err(Error::invalid(format!(
            "diversity needs at least 2 agents, got {}",
            positions.len()
        )));
    }
    let dims = positions[0].as_ref().len();
    if dims == 0 {
        return Err(Error::invalid("positions have zero dimensions"));
    }
    if let Some(i) = positions.iter().position(|p| p.as_ref().len() != dims) {
        return Err(Error::invalid(format!(
            "agent {i} has {} coordinates, expected {dims}",
            positions[i].as_ref().len()
        )));
    }
    Ok(dims)
}

fn column_diversity<P: AsRef<[f64]>>(positions: &[P], j: usize, scratch: &mut Vec<f64>) -> f64 {
    scratch.clear();
    scratch.extend(positions.iter().map(|p| p.as_ref()[j]));
    let med = median_in_place(scratch);
    let total: f64 = positions.iter().map(|p| (med - p.as_ref()[j]).abs()).sum();
    total / positions.len() as f64
}

/// Mean absolute deviation of column `j` from its median.
pub fn dimension_diversity<P: AsRef<[f64]>>(positions: &[P], j: usize) -> Result<f64> {
    let dims = check_matrix(positions)?;
    if j >= dims {
        return Err(Error::invalid(format!(
            "dimension {j} out of range for {dims} dimensions"
        )));
    }
    Ok(column_diversity(positions, j, &mut Vec::new()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiversitySnapshot {
    pub iteration: usize,
    pub div_j: Vec<f64>,
    pub div: f64,
}

/// Diversity of one population, tagged with `iteration`.
pub fn swarm_diversity<P: AsRef<[f64]>>(
    iteration: usize,
    positions: &[P],
) -> Result<DiversitySnapshot> {
    let dims = check_matrix(positions)?;
    let mut scratch = Vec::with_capacity(positions.len());
    let div_j: Vec<f64> = (0..dims)
        .map(|j| column_diversity(positions, j, &mut scratch))
        .collect();
    let div = div_j.iter().sum::<f64>() / dims as f64;
    Ok(DiversitySnapshot {
        iteration,
        div_j,
        div,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BalanceSeries {
    pub div_series: Vec<DiversitySnapshot>,
    pub div_max: f64,
    pub xpl_series: Vec<f64>,
    pub xpt_series: Vec<f64>,
    pub xpl_aggregate: f64,
    pub xpt_aggregate: f64,
}

/// Per-iteration and aggregate XPL%/XPT% relative to the run-wide maximum.
pub fn balance_from_series(div_series: Vec<DiversitySnapshot>) -> Result<BalanceSeries> {
    if div_series.is_empty() {
        return Err(Error::invalid("balance needs at least one snapshot"));
    }
    let div_max = div_series
        .iter()
        .map(|s| s.div)
        .fold(f64::NEG_INFINITY, f64::max);
    let (xpl_series, xpt_series): (Vec<f64>, Vec<f64>) = div_series
        .iter()
        .map(|s| percentages(s.div, div_max))
        .unzip();
    let len = div_series.len() as f64;
    let xpl_aggregate = xpl_series.iter().sum::<f64>() / len;
    let xpt_aggregate = xpt_series.iter().sum::<f64>() / len;
    Ok(BalanceSeries {
        div_series,
        div_max,
        xpl_series,
        xpt_series,
        xpl_aggregate,
        xpt_aggregate,
    })
}

fn percentages(div: f64, div_max: f64) -> (f64, f64) {
    if div_max > 0.0 {
        // Dividing first keeps XPL% at exactly 100 when div == div_max.
        (
            100.0 * (div / div_max),
            100.0 * ((div - div_max).abs() / div_max),
        )
    } else {
        (0.0, 100.0)
    }
}

/// Offline analysis of a recorded trace.
pub fn analyze_trace(trace: &Trace) -> Result<BalanceSeries> {
    trace.validate()?;
    let snapshots = trace
        .iterations
        .iter()
        .map(|rec| swarm_diversity(rec.iteration, &rec.positions))
        .collect::<Result<Vec<_>>>()?;
    balance_from_series(snapshots)
}

/// Hook that records one [`DiversitySnapshot`] per iteration.
#[derive(Debug, Default)]
pub struct DiversityRecorder {
    snapshots: Vec<DiversitySnapshot>,
    error: Option<Error>,
}

impl DiversityRecorder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn snapshots(&self) -> &[DiversitySnapshot] {
        &self.snapshots
    }

    pub fn finish(self) -> Result<BalanceSeries> {
        if let Some(e) = self.error {
            return Err(e);
        }
        balance_from_series(self.snapshots)
    }
}

impl IterationHook for DiversityRecorder {
    fn on_iteration(&mut self, view: &IterationView<'_>) {
        if self.error.is_some() {
            return;
        }
        match swarm_diversity(view.iteration, view.agents) {
            Ok(s) => self.snapshots.push(s),
            Err(e) => self.error = Some(e),
        }
    }
}

/// Live percentages against the running maximum.
///
/// Provisional: early values are relative to a maximum that may still grow,
/// so they differ from [`balance_from_series`]. Never use these for reported
/// aggregates.
#[derive(Debug, Default, Clone)]
pub struct StreamingBalance {
    running_max: f64,
}

impl StreamingBalance {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns provisional `(xpl, xpt)` after observing `div`.
    pub fn observe(&mut self, div: f64) -> (f64, f64) {
        self.running_max = self.running_max.max(div);
        percentages(div, self.running_max)
    }

    pub fn running_max(&self) -> f64 {
        self.running_max
    }
}
