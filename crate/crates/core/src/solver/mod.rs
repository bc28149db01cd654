//! Defender equilibrium search.
//!
//! The defender maximizes its utility against a quantal-response attacker
//! subject to `Σ q_i · cost_i ≤ M`, `q ∈ [0,1]^N`. [`iga_solve`] restarts a
//! real-coded genetic algorithm ([`ga_optimize`]) and keeps the best result;
//! [`brute_force_solve`] is an exhaustive grid oracle for small instances.

mod brute;
mod ga;

pub use brute::brute_force_solve;
pub use ga::{ga_optimize, repair};

use serde::{Deserialize, Serialize};

use crate::error::{GtraError, Result};
use crate::game::{DefenseStrategy, GameInstance};
use crate::seed;

pub const DEFAULT_TIMES: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaParams {
    pub population_size: usize,
    pub generations: usize,
    pub crossover_rate: f64,
    /// Per-gene mutation probability; `None` means `1/N`.
    pub mutation_rate: Option<f64>,
    /// Standard deviation of the Gaussian mutation step.
    pub mutation_scale: f64,
    pub elitism_count: usize,
    pub stall_generations: usize,
}

impl Default for GaParams {
    fn default() -> Self {
        Self {
            population_size: 200,
            generations: 300,
            crossover_rate: 0.9,
            mutation_rate: None,
            mutation_scale: 0.1,
            elitism_count: 2,
            stall_generations: 50,
        }
    }
}

impl GaParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(GtraError::Config(m));
        if self.population_size == 0 {
            return bad("population_size must be positive".into());
        }
        if self.generations == 0 {
            return bad("generations must be positive".into());
        }
        if self.stall_generations == 0 {
            return bad("stall_generations must be positive".into());
        }
        if self.elitism_count >= self.population_size {
            return bad(format!(
                "elitism_count ({}) must be smaller than population_size ({})",
                self.elitism_count, self.population_size
            ));
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return bad(format!(
                "crossover_rate {} is outside [0, 1]",
                self.crossover_rate
            ));
        }
        if let Some(m) = self.mutation_rate {
            if !(0.0..=1.0).contains(&m) {
                return bad(format!("mutation_rate {m} is outside [0, 1]"));
            }
        }
        if !(self.mutation_scale > 0.0 && self.mutation_scale.is_finite()) {
            return bad(format!(
                "mutation_scale {} must be positive",
                self.mutation_scale
            ));
        }
        Ok(())
    }

    pub fn mutation_rate_for(&self, n: usize) -> f64 {
        self.mutation_rate.unwrap_or(1.0 / n.max(1) as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub q_star: DefenseStrategy,
    /// Defender utility at `q_star` against the QR attacker.
    pub utility: f64,
    pub iterations_used: usize,
    pub per_iteration_utilities: Vec<f64>,
    pub seed: u64,
}

/// Seed of restart `k` for a game seeded with `game_seed`.
pub fn restart_seed(game_seed: u64, k: usize) -> u64 {
    seed::mix(game_seed, k as u64)
}

/// Runs the GA `times` times from decorrelated seeds and keeps the best.
pub fn iga_solve(g: &GameInstance, times: usize, params: &GaParams) -> Result<SolveResult> {
    if times == 0 {
        return Err(GtraError::Config("times must be at least 1".into()));
    }
    let mut best: Option<SolveResult> = None;
    let mut best_utility = f64::NEG_INFINITY;
    let mut history = Vec::with_capacity(times);
    for k in 0..times {
        let run = ga_optimize(g, params, restart_seed(g.seed, k))?;
        history.push(run.utility);
        if run.utility > best_utility {
            best_utility = run.utility;
            best = Some(run);
        }
    }
    // NaN utilities are rejected by the GA, so at least one run was kept.
    let mut best =
        best.ok_or_else(|| GtraError::Numeric("no GA run produced a finite utility".into()))?;
    best.iterations_used = times;
    best.per_iteration_utilities = history;
    Ok(best)
}
