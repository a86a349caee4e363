//! Search space, agents, population state and the objective contract.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Box constraints of a search space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() {
            return Err(Error::invalid("bounds need at least one dimension"));
        }
        if lower.len() != upper.len() {
            return Err(Error::invalid(format!(
                "lower has {} limits but upper has {}",
                lower.len(),
                upper.len()
            )));
        }
        // Negated so that NaN limits are rejected too.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        let bad = (0..lower.len()).find(|&j| !(lower[j] < upper[j]));
        if let Some(j) = bad {
            return Err(Error::invalid(format!(
                "dimension {j}: lower {} is not below upper {}",
                lower[j], upper[j]
            )));
        }
        Ok(Self { lower, upper })
    }

    /// The same `[low, high]` interval in every one of `dims` dimensions.
    pub fn uniform(low: f64, high: f64, dims: usize) -> Result<Self> {
        Self::new(vec![low; dims], vec![high; dims])
    }

    pub fn dims(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dims()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&v, (&lo, &hi))| lo <= v && v <= hi)
    }

    /// Uniform point in the box, one draw per coordinate in index order.
    pub fn sample(&self, rng: &mut RngStream) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(&lo, &hi)| rng.uniform_in(lo, hi))
            .collect()
    }

    /// Compact description, e.g. `[-100,100]^30` or `[-5,10]x[0,15]`.
    pub fn describe(&self) -> String {
        let first = (self.lower[0], self.upper[0]);
        let same = self
            .lower
            .iter()
            .zip(&self.upper)
            .all(|(&lo, &hi)| (lo, hi) == first);
        if same {
            format!("[{},{}]^{}", first.0, first.1, self.dims())
        } else {
            self.lower
                .iter()
                .zip(&self.upper)
                .map(|(lo, hi)| format!("[{lo},{hi}]"))
                .collect::<Vec<_>>()
                .join("x")
        }
    }
}

/// Replaces every coordinate by `min(upper, max(lower, x))`.
pub fn clamp(position: &[f64], bounds: &Bounds) -> Result<Vec<f64>> {
    let mut out = position.to_vec();
    clamp_in_place(&mut out, bounds)?;
    Ok(out)
}

pub fn clamp_in_place(position: &mut [f64], bounds: &Bounds) -> Result<()> {
    if position.len() != bounds.dims() {
        return Err(Error::DimensionMismatch {
            expected: bounds.dims(),
            actual: position.len(),
        });
    }
    for ((x, &lo), &hi) in position.iter_mut().zip(&bounds.lower).zip(&bounds.upper) {
        *x = hi.min(lo.max(*x));
    }
    Ok(())
}

/// A candidate solution; lower fitness is better.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Agent {
    pub position: Vec<f64>,
    pub fitness: f64,
}

impl AsRef<[f64]> for Agent {
    fn as_ref(&self) -> &[f64] {
        &self.position
    }
}

/// An objective to be minimized over a box.
///
/// `evaluate` must be deterministic for a fixed input. Noisy objectives draw
/// their noise from `noise` and from nothing else, so an identical noise
/// stream reproduces identical values.
pub trait Objective: Send + Sync {
    fn name(&self) -> &str;

    fn bounds(&self) -> &Bounds;

    fn evaluate(&self, x: &[f64], noise: &mut RngStream) -> f64;

    /// Reported alongside results; never consulted by the optimizer.
    fn known_optimum(&self) -> Option<f64> {
        None
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    pub agents: Vec<Agent>,
    pub best: Agent,
    pub iteration: usize,
    pub max_iterations: usize,
}

impl Population {
    /// Index of the fittest agent; ties keep the lowest index.
    pub fn argmin(agents: &[Agent]) -> usize {
        let mut best = 0;
        for (i, a) in agents.iter().enumerate().skip(1) {
            if a.fitness < agents[best].fitness {
                best = i;
            }
        }
        best
    }

    /// Replaces `best` when some agent is strictly better.
    pub fn refresh_best(&mut self) {
        let i = Self::argmin(&self.agents);
        if self.agents[i].fitness < self.best.fitness || self.best.fitness.is_nan() {
            self.best = self.agents[i].clone();
        }
    }

    pub fn dims(&self) -> usize {
        self.best.position.len()
    }
}

/// Draws `n` agents uniformly inside the objective's bounds, agent by agent
/// and coordinate by coordinate, then evaluates them.
pub fn init_population(
    f: &dyn Objective,
    n: usize,
    max_iterations: usize,
    rng: &mut RngStream,
    noise: &mut RngStream,
) -> Result<Population> {
    if n < 2 {
        return Err(Error::invalid(format!(
            "population needs at least 2 agents, got {n}"
        )));
    }
    let bounds = f.bounds();
    let agents: Vec<Agent> = (0..n)
        .map(|_| {
            let position = bounds.sample(rng);
            let fitness = f.evaluate(&position, noise);
            Agent { position, fitness }
        })
        .collect();
    let best = agents[Population::argmin(&agents)].clone();
    Ok(Population {
        agents,
        best,
        iteration: 0,
        max_iterations,
    })
}
