//! Reference allocation strategies the equilibrium is compared against.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::game::{DefenseStrategy, GameInstance};
use crate::seed;
use crate::solver::{iga_solve, GaParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StrategyKind {
    #[serde(rename = "NE")]
    Ne,
    PartOneS,
    Rand,
    Average,
    AllOneS,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 5] = [
        StrategyKind::Ne,
        StrategyKind::PartOneS,
        StrategyKind::Rand,
        StrategyKind::Average,
        StrategyKind::AllOneS,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::Ne => "NE",
            StrategyKind::PartOneS => "PartOneS",
            StrategyKind::Rand => "Rand",
            StrategyKind::Average => "Average",
            StrategyKind::AllOneS => "AllOneS",
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

/// Order in which [`part_ones_by`] fills targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FillOrder {
    #[default]
    Index,
    /// Highest attacker reward first; ties by index.
    RewardDescending,
}

/// Fully protect targets in index order until the budget runs out; the
/// first target that does not fit gets the fractional remainder.
pub fn part_ones(g: &GameInstance) -> DefenseStrategy {
    part_ones_by(g, FillOrder::Index)
}

pub fn part_ones_by(g: &GameInstance, order: FillOrder) -> DefenseStrategy {
    let mut idx: Vec<usize> = (0..g.n()).collect();
    if order == FillOrder::RewardDescending {
        idx.sort_by(|&a, &b| {
            g.targets[b]
                .attack_reward
                .total_cmp(&g.targets[a].attack_reward)
                .then(a.cmp(&b))
        });
    }
    let mut q = vec![0.0; g.n()];
    let mut remaining = g.budget;
    for i in idx {
        let c = g.resource_cost(i);
        if remaining >= c {
            q[i] = 1.0;
            remaining -= c;
        } else {
            q[i] = (remaining / c).clamp(0.0, 1.0);
            break;
        }
    }
    DefenseStrategy::for_game(g, q)
}

/// Random allocation scaled to spend the budget, clamped to `[0,1]`.
pub fn rand_strategy(g: &GameInstance, stream_seed: u64) -> DefenseStrategy {
    let mut rng = seed::rng(stream_seed);
    let costs = g.resource_costs();
    let (r, weighted) = loop {
        let r: Vec<f64> = (0..g.n()).map(|_| rng.random::<f64>()).collect();
        let weighted: f64 = r.iter().zip(&costs).map(|(a, c)| a * c).sum();
        if weighted > 0.0 {
            break (r, weighted);
        }
    };
    let q = r
        .iter()
        .map(|ri| (ri * g.budget / weighted).min(1.0))
        .collect();
    DefenseStrategy::for_game(g, q)
}

/// Equal resource share `M/N` per target.
pub fn average_strategy(g: &GameInstance) -> DefenseStrategy {
    let share = g.budget / g.n() as f64;
    let q = (0..g.n())
        .map(|i| (share / g.resource_cost(i)).min(1.0))
        .collect();
    DefenseStrategy::for_game(g, q)
}

/// Protect everything, ignoring the budget.
pub fn all_ones(g: &GameInstance) -> DefenseStrategy {
    DefenseStrategy::for_game(g, vec![1.0; g.n()])
}

/// The equilibrium strategy from the iterative GA.
pub fn ne_strategy(g: &GameInstance, times: usize, params: &GaParams) -> Result<DefenseStrategy> {
    Ok(iga_solve(g, times, params)?.q_star)
}
