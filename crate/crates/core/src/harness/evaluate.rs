//! Per-instance strategy evaluation shared by `compare` and `sweep`.

use rayon::prelude::*;
use serde::Serialize;

use super::config::{ExperimentConfig, OutcomeMode};
use crate::baselines::{
    all_ones, average_strategy, ne_strategy, part_ones_by, rand_strategy, StrategyKind,
};
use crate::error::Result;
use crate::game::{
    attacker_utility, defender_utility, qr_attack_distribution, DefenseStrategy, GameInstance,
};
use crate::metrics::{coverage, effectiveness, expected_outcomes, sample_outcomes, vulnerability};
use crate::scenario::{sample_instance, ScenarioConfig};
use crate::seed;

const RAND_STREAM: u64 = 1;
const OUTCOME_STREAM: u64 = 2;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrategyEval {
    pub strategy: StrategyKind,
    pub q: DefenseStrategy,
    pub defender_utility: f64,
    pub attacker_utility: f64,
    pub vulnerability: f64,
    pub coverage: f64,
    pub effectiveness: f64,
    pub consumption: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceEval {
    pub index: usize,
    pub budget: f64,
    pub strategies: Vec<StrategyEval>,
}

impl InstanceEval {
    pub fn get(&self, kind: StrategyKind) -> Option<&StrategyEval> {
        self.strategies.iter().find(|s| s.strategy == kind)
    }
}

pub fn allocate(
    g: &GameInstance,
    kind: StrategyKind,
    cfg: &ExperimentConfig,
) -> Result<DefenseStrategy> {
    Ok(match kind {
        StrategyKind::Ne => ne_strategy(g, cfg.times, &cfg.ga)?,
        StrategyKind::PartOneS => part_ones_by(g, cfg.fill_order),
        StrategyKind::Rand => rand_strategy(g, seed::mix(g.seed, RAND_STREAM)),
        StrategyKind::Average => average_strategy(g),
        StrategyKind::AllOneS => all_ones(g),
    })
}

/// Scores `q` against the QR attacker it induces.
pub fn evaluate_allocation(
    g: &GameInstance,
    kind: StrategyKind,
    q: DefenseStrategy,
    cfg: &ExperimentConfig,
) -> Result<StrategyEval> {
    let p = qr_attack_distribution(g, &q)?;
    let consumption = g.consumption(&q.q);
    let (vul, cov, eff) = match cfg.outcome_mode {
        OutcomeMode::Sampled => {
            let stream = if cfg.shared_draws {
                seed::mix(g.seed, OUTCOME_STREAM)
            } else {
                seed::mix_path(g.seed, &[OUTCOME_STREAM, kind as u64])
            };
            let c = sample_outcomes(g, &p, &q, cfg.trials, stream)?;
            (
                vulnerability(&c),
                coverage(&c),
                effectiveness(&c, consumption),
            )
        }
        OutcomeMode::Expected => {
            let e = expected_outcomes(g, &p, &q)?;
            (
                vulnerability(&e),
                coverage(&e),
                effectiveness(&e, consumption),
            )
        }
    };
    Ok(StrategyEval {
        strategy: kind,
        defender_utility: defender_utility(g, &p, &q)?,
        attacker_utility: attacker_utility(g, &p, &q)?,
        vulnerability: vul,
        coverage: cov,
        effectiveness: eff,
        consumption,
        q,
    })
}

pub fn evaluate_instance(
    g: &GameInstance,
    index: usize,
    cfg: &ExperimentConfig,
) -> Result<InstanceEval> {
    let strategies = cfg
        .strategies
        .iter()
        .map(|&kind| evaluate_allocation(g, kind, allocate(g, kind, cfg)?, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(InstanceEval {
        index,
        budget: g.budget,
        strategies,
    })
}

/// Evaluates every instance of `scfg` in parallel; output is in index order.
pub fn evaluate_population(
    scfg: &ScenarioConfig,
    cfg: &ExperimentConfig,
) -> Result<Vec<InstanceEval>> {
    (0..scfg.instances)
        .into_par_iter()
        .map(|i| evaluate_instance(&sample_instance(scfg, i)?, i, cfg))
        .collect()
}

/// Arithmetic mean of one metric for one strategy across instances.
pub fn mean_of(
    evals: &[InstanceEval],
    kind: StrategyKind,
    metric: impl Fn(&StrategyEval) -> f64,
) -> f64 {
    let vals: Vec<f64> = evals
        .iter()
        .filter_map(|e| e.get(kind))
        .map(metric)
        .collect();
    if vals.is_empty() {
        f64::NAN
    } else {
        vals.iter().sum::<f64>() / vals.len() as f64
    }
}
