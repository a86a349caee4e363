//! Whale Optimization Algorithm.
//!
//! Each iteration moves every agent with one of three rules:
//!
//! * spiral (`p >= 0.5`): logarithmic spiral around the best agent;
//! * encircle (`p < 0.5`, `|A| < 1`): shrink toward the best agent;
//! * explore (`p < 0.5`, `|A| >= 1`): move relative to a randomly chosen agent.
//!
//! `a` decreases linearly from 2 to 0 over the run, so `|A| <= a` eventually
//! rules out the explore branch.
//!
//! Random draws per agent happen in a fixed order: `r1`, `r2`, `p`, `l` and,
//! only on the explore branch, the index of the random agent. In
//! [`CoefficientMode::PerCoordinate`] the scalars `r1` and `r2` become one draw
//! per coordinate (all `r1` first, then all `r2`).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::domain::{clamp_in_place, init_population, Agent, Objective, Population};
use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Spiral shape constant.
pub const SPIRAL_SHAPE: f64 = 1.0;

/// `a = 2 (1 - t/T)`.
pub fn coefficient_a(t: usize, max_iterations: usize) -> Result<f64> {
    if max_iterations == 0 {
        return Err(Error::invalid("max_iterations must be at least 1"));
    }
    if t > max_iterations {
        return Err(Error::invalid(format!(
            "iteration {t} exceeds max_iterations {max_iterations}"
        )));
    }
    Ok(2.0 * (1.0 - t as f64 / max_iterations as f64))
}

/// Random control values for one agent update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub a: f64,
    pub r1: f64,
    pub r2: f64,
    /// `2 a r1 - a`, in `[-a, a)`.
    pub big_a: f64,
    /// `2 r2`, in `[0, 2)`.
    pub c: f64,
    /// Branch selector in `[0, 1)`.
    pub p: f64,
    /// Spiral parameter in `[-1, 1)`.
    pub l: f64,
    pub b: f64,
}

impl Coefficients {
    pub fn from_draws(a: f64, r1: f64, r2: f64, p: f64, l: f64) -> Self {
        Self {
            a,
            r1,
            r2,
            big_a: 2.0 * a * r1 - a,
            c: 2.0 * r2,
            p,
            l,
            b: SPIRAL_SHAPE,
        }
    }
}

/// Draws `r1`, `r2`, `p` and `l` (in that order).
pub fn sample_coefficients(a: f64, rng: &mut RngStream) -> Coefficients {
    let r1 = rng.uniform();
    let r2 = rng.uniform();
    let p = rng.uniform();
    let l = rng.uniform_in(-1.0, 1.0);
    Coefficients::from_draws(a, r1, r2, p, l)
}

fn check_lengths(x: &[f64], target: &[f64]) -> Result<()> {
    if x.len() != target.len() {
        return Err(Error::DimensionMismatch {
            expected: target.len(),
            actual: x.len(),
        });
    }
    Ok(())
}

/// `D = |C x* - x|`, returns `x* - A D`.
pub fn encircle_update(x: &[f64], x_best: &[f64], big_a: f64, c: f64) -> Result<Vec<f64>> {
    check_lengths(x, x_best)?;
    Ok(x.iter()
        .zip(x_best)
        .map(|(&xi, &bi)| bi - big_a * (c * bi - xi).abs())
        .collect())
}

/// `D' = |x* - x|`, returns `D' e^(b l) cos(2 pi l) + x*`.
pub fn spiral_update(x: &[f64], x_best: &[f64], l: f64, b: f64) -> Result<Vec<f64>> {
    check_lengths(x, x_best)?;
    let factor = (b * l).exp() * (2.0 * PI * l).cos();
    Ok(x.iter()
        .zip(x_best)
        .map(|(&xi, &bi)| (bi - xi).abs() * factor + bi)
        .collect())
}

/// `D = |C x_rand - x|`, returns `x_rand - A D`.
pub fn explore_update(x: &[f64], x_rand: &[f64], big_a: f64, c: f64) -> Result<Vec<f64>> {
    check_lengths(x, x_rand)?;
    Ok(x.iter()
        .zip(x_rand)
        .map(|(&xi, &ri)| ri - big_a * (c * ri - xi).abs())
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    Spiral,
    Encircle,
    Explore,
}

/// Number of agent updates per branch.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchCounts {
    pub spiral: u64,
    pub encircle: u64,
    pub explore: u64,
}

impl BranchCounts {
    fn record(&mut self, branch: Branch) {
        match branch {
            Branch::Spiral => self.spiral += 1,
            Branch::Encircle => self.encircle += 1,
            Branch::Explore => self.explore += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.spiral + self.encircle + self.explore
    }

    pub fn add(&mut self, other: &BranchCounts) {
        self.spiral += other.spiral;
        self.encircle += other.encircle;
        self.explore += other.explore;
    }
}

/// How `A` and `C` are drawn for an agent update.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoefficientMode {
    /// One `A` and one `C` per agent, shared by all coordinates.
    #[default]
    Scalar,
    /// Independent `A` and `C` for every coordinate; the encircle/explore
    /// choice is then made per coordinate.
    PerCoordinate,
}

/// Read-only state handed to an [`IterationHook`].
#[derive(Debug, Clone, Copy)]
pub struct IterationView<'a> {
    /// Number of completed iterations, `1..=T`.
    pub iteration: usize,
    pub agents: &'a [Agent],
    pub best_fitness: f64,
}

/// Observer invoked once per completed iteration, after all agents moved and
/// the best agent was refreshed.
pub trait IterationHook {
    fn on_iteration(&mut self, view: &IterationView<'_>);
}

impl<F> IterationHook for F
where
    F: FnMut(&IterationView<'_>),
{
    fn on_iteration(&mut self, view: &IterationView<'_>) {
        self(view)
    }
}

/// One WOA iteration over `pop`.
///
/// Agents move in index order. Random agents for the explore branch are taken
/// from the positions at the start of the iteration and may be the moving
/// agent itself. The best agent is refreshed once, after every agent moved.
pub fn woa_step(
    pop: &mut Population,
    f: &dyn Objective,
    mode: CoefficientMode,
    rng: &mut RngStream,
    noise: &mut RngStream,
) -> Result<BranchCounts> {
    if pop.iteration >= pop.max_iterations {
        return Err(Error::State(format!(
            "population already completed {} of {} iterations",
            pop.iteration, pop.max_iterations
        )));
    }
    let a = coefficient_a(pop.iteration, pop.max_iterations)?;
    let bounds = f.bounds();
    let previous: Vec<Vec<f64>> = pop.agents.iter().map(|ag| ag.position.clone()).collect();
    let best = pop.best.position.clone();
    let n = previous.len();
    let mut counts = BranchCounts::default();

    for (i, x) in previous.iter().enumerate() {
        let mut next = match mode {
            CoefficientMode::Scalar => {
                let k = sample_coefficients(a, rng);
                let branch = if k.p >= 0.5 {
                    Branch::Spiral
                } else if k.big_a.abs() < 1.0 {
                    Branch::Encircle
                } else {
                    Branch::Explore
                };
                counts.record(branch);
                match branch {
                    Branch::Spiral => spiral_update(x, &best, k.l, k.b)?,
                    Branch::Encircle => encircle_update(x, &best, k.big_a, k.c)?,
                    Branch::Explore => {
                        let r = rng.index(n);
                        explore_update(x, &previous[r], k.big_a, k.c)?
                    }
                }
            }
            CoefficientMode::PerCoordinate => {
                per_coordinate_update(x, &best, &previous, a, rng, &mut counts)?
            }
        };
        clamp_in_place(&mut next, bounds)?;
        let fitness = f.evaluate(&next, noise);
        pop.agents[i] = Agent {
            position: next,
            fitness,
        };
    }

    pop.refresh_best();
    pop.iteration += 1;
    Ok(counts)
}

fn per_coordinate_update(
    x: &[f64],
    best: &[f64],
    previous: &[Vec<f64>],
    a: f64,
    rng: &mut RngStream,
    counts: &mut BranchCounts,
) -> Result<Vec<f64>> {
    let dims = x.len();
    let r1: Vec<f64> = (0..dims).map(|_| rng.uniform()).collect();
    let r2: Vec<f64> = (0..dims).map(|_| rng.uniform()).collect();
    let p = rng.uniform();
    let l = rng.uniform_in(-1.0, 1.0);
    if p >= 0.5 {
        counts.record(Branch::Spiral);
        return spiral_update(x, best, l, SPIRAL_SHAPE);
    }
    let big_a: Vec<f64> = r1.iter().map(|r| 2.0 * a * r - a).collect();
    let exploring = big_a.iter().any(|v| v.abs() >= 1.0);
    counts.record(if exploring {
        Branch::Explore
    } else {
        Branch::Encircle
    });
    let rand_agent = if exploring {
        Some(&previous[rng.index(previous.len())])
    } else {
        None
    };
    Ok((0..dims)
        .map(|j| {
            let c = 2.0 * r2[j];
            let target = match rand_agent {
                Some(r) if big_a[j].abs() >= 1.0 => r[j],
                _ => best[j],
            };
            target - big_a[j] * (c * target - x[j]).abs()
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WoaConfig {
    pub agents: usize,
    pub iterations: usize,
    pub mode: CoefficientMode,
}

impl Default for WoaConfig {
    fn default() -> Self {
        Self {
            agents: 30,
            iterations: 500,
            mode: CoefficientMode::Scalar,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub seed: u64,
    pub best: Agent,
    /// Best fitness after each iteration, length `T`.
    pub convergence: Vec<f64>,
    /// Branch usage per iteration, length `T`.
    pub branches: Vec<BranchCounts>,
}

/// Full optimization run. The optimizer consumes `RngStream::new(seed)` and
/// noisy objectives consume `RngStream::noise(seed)`.
pub fn run(
    f: &dyn Objective,
    config: &WoaConfig,
    seed: u64,
    mut hook: Option<&mut dyn IterationHook>,
) -> Result<RunResult> {
    if config.iterations == 0 {
        return Err(Error::invalid("iterations must be at least 1"));
    }
    let mut rng = RngStream::new(seed);
    let mut noise = RngStream::noise(seed);
    let mut pop = init_population(f, config.agents, config.iterations, &mut rng, &mut noise)?;
    let mut convergence = Vec::with_capacity(config.iterations);
    let mut branches = Vec::with_capacity(config.iterations);
    while pop.iteration < pop.max_iterations {
        let counts = woa_step(&mut pop, f, config.mode, &mut rng, &mut noise)?;
        convergence.push(pop.best.fitness);
        branches.push(counts);
        if let Some(h) = hook.as_deref_mut() {
            h.on_iteration(&IterationView {
                iteration: pop.iteration,
                agents: &pop.agents,
                best_fitness: pop.best.fitness,
            });
        }
    }
    Ok(RunResult {
        seed,
        best: pop.best,
        convergence,
        branches,
    })
}
