//! Game primitives: targets, instances, strategy profiles, the per-target
//! 2×2 payoff matrix and the closed-form utilities built on it.
//!
//! Penalties are stored as nonnegative magnitudes; every sign is applied by
//! the payoff formulas themselves.

use serde::{Deserialize, Serialize};

use crate::error::{check_len, GtraError, Result};

pub const DEFAULT_ALPHA: f64 = 0.8;
pub const DEFAULT_LAMBDA: f64 = 1.5;

/// One protected asset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetParams {
    /// 1-based index.
    pub id: usize,
    /// Attacker reward for an unopposed attack.
    pub attack_reward: f64,
    /// Attacker penalty magnitude when caught.
    pub attack_penalty: f64,
    /// Defender resource cost of protecting this target.
    pub defense_cost: f64,
    /// Attacker resource cost of attacking this target.
    pub attack_cost: f64,
    /// Defender-side penalty magnitude. Carried for scenario fidelity only;
    /// no utility reads it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub defender_penalty: Option<f64>,
}

impl TargetParams {
    pub fn new(id: usize, reward: f64, penalty: f64, defense_cost: f64, attack_cost: f64) -> Self {
        Self {
            id,
            attack_reward: reward,
            attack_penalty: penalty,
            defense_cost,
            attack_cost,
            defender_penalty: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("attack_reward", self.attack_reward),
            ("attack_penalty", self.attack_penalty),
            ("defense_cost", self.defense_cost),
            ("attack_cost", self.attack_cost),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(GtraError::Config(format!(
                    "target {}: {name} is not finite",
                    self.id
                )));
            }
            if v < 0.0 {
                return Err(GtraError::Config(format!(
                    "target {}: {name} must be nonnegative",
                    self.id
                )));
            }
        }
        Ok(())
    }
}

/// How consumed resources are counted against the budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostAccounting {
    /// Σ q_i · C_i^m.
    #[default]
    DefenseCost,
    /// Σ q_i; used when the utility carries no action cost.
    UnitPerTarget,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameInstance {
    pub targets: Vec<TargetParams>,
    pub budget: f64,
    pub alpha: f64,
    pub lambda: f64,
    pub seed: u64,
    #[serde(default)]
    pub accounting: CostAccounting,
}

impl GameInstance {
    pub fn new(targets: Vec<TargetParams>, budget: f64) -> Self {
        Self {
            targets,
            budget,
            alpha: DEFAULT_ALPHA,
            lambda: DEFAULT_LAMBDA,
            seed: 0,
            accounting: CostAccounting::DefenseCost,
        }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn n(&self) -> usize {
        self.targets.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.targets.is_empty() {
            return Err(GtraError::Config("a game needs at least one target".into()));
        }
        for t in &self.targets {
            t.validate()?;
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(GtraError::Config(format!(
                "alpha = {} is outside [0, 1]",
                self.alpha
            )));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(GtraError::Config(format!(
                "lambda = {} must be finite and >= 0",
                self.lambda
            )));
        }
        if !(self.budget >= 0.0 && self.budget.is_finite()) {
            return Err(GtraError::Config(format!(
                "budget = {} must be finite and >= 0",
                self.budget
            )));
        }
        Ok(())
    }

    /// Resource units charged for fully protecting target `i`.
    pub fn resource_cost(&self, i: usize) -> f64 {
        match self.accounting {
            CostAccounting::DefenseCost => self.targets[i].defense_cost,
            CostAccounting::UnitPerTarget => 1.0,
        }
    }

    pub fn resource_costs(&self) -> Vec<f64> {
        (0..self.n()).map(|i| self.resource_cost(i)).collect()
    }

    /// Resources needed to protect every target with certainty.
    pub fn full_coverage_cost(&self) -> f64 {
        (0..self.n()).map(|i| self.resource_cost(i)).sum()
    }

    pub fn consumption(&self, q: &[f64]) -> f64 {
        q.iter()
            .enumerate()
            .map(|(i, qi)| qi * self.resource_cost(i))
            .sum()
    }

    pub fn is_within_budget(&self, q: &[f64]) -> bool {
        self.consumption(q) <= self.budget + 1e-9
    }
}

/// Per-target protection probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefenseStrategy {
    pub q: Vec<f64>,
    /// Whether Σ q_i · cost_i ≤ M held for the game this strategy was built for.
    pub budget_feasible: bool,
}

impl DefenseStrategy {
    /// Wraps `q` and labels it against `g`'s budget.
    pub fn for_game(g: &GameInstance, q: Vec<f64>) -> Self {
        debug_assert!(
            q.iter().all(|v| (0.0..=1.0).contains(v)),
            "q outside [0,1]: {q:?}"
        );
        let budget_feasible = g.is_within_budget(&q);
        Self { q, budget_feasible }
    }

    pub fn zeros(g: &GameInstance) -> Self {
        Self::for_game(g, vec![0.0; g.n()])
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }
}

/// Per-target attack probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackStrategy {
    pub p: Vec<f64>,
    /// True for a quantal-response distribution (sums to one), false for
    /// independent per-target best-response probabilities.
    pub normalized: bool,
}

impl AttackStrategy {
    pub fn independent(p: Vec<f64>) -> Self {
        Self {
            p,
            normalized: false,
        }
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }
}

/// Payoff pair `(attacker, defender)` for one target and one action pair.
pub fn payoff_cell(
    t: &TargetParams,
    attacker_acts: bool,
    defender_acts: bool,
    alpha: f64,
) -> (f64, f64) {
    let (r, p, ca, cm) = (
        t.attack_reward,
        t.attack_penalty,
        t.attack_cost,
        t.defense_cost,
    );
    match (attacker_acts, defender_acts) {
        (true, true) => (
            -alpha * p + (1.0 - alpha) * r - ca,
            alpha * p - (1.0 - alpha) * r - cm,
        ),
        (true, false) => (r - ca, -r),
        (false, true) => (0.0, -cm),
        (false, false) => (0.0, 0.0),
    }
}

fn check_profile(g: &GameInstance, p: &AttackStrategy, q: &DefenseStrategy) -> Result<()> {
    check_len("attack strategy", g.n(), p.len())?;
    check_len("defense strategy", g.n(), q.len())
}

/// Defender's total utility `Σ q_i[α p_i (P_i + R_i) − C_i^m] − p_i R_i`.
pub fn defender_utility(g: &GameInstance, p: &AttackStrategy, q: &DefenseStrategy) -> Result<f64> {
    check_profile(g, p, q)?;
    Ok(g.targets
        .iter()
        .zip(p.p.iter().zip(&q.q))
        .map(|(t, (&pi, &qi))| {
            qi * (g.alpha * pi * (t.attack_penalty + t.attack_reward) - t.defense_cost)
                - pi * t.attack_reward
        })
        .sum())
}

/// Attacker's total utility `Σ p_i[−α q_i (P_i + R_i) + (R_i − C_i^a)]`.
pub fn attacker_utility(g: &GameInstance, p: &AttackStrategy, q: &DefenseStrategy) -> Result<f64> {
    check_profile(g, p, q)?;
    Ok(g.targets
        .iter()
        .zip(p.p.iter().zip(&q.q))
        .map(|(t, (&pi, &qi))| pi * per_target_attacker_utility(t, qi, g.alpha))
        .sum())
}

/// Expected attacker payoff from attacking `t` when it is protected with
/// probability `q_i`.
#[inline]
pub fn per_target_attacker_utility(t: &TargetParams, q_i: f64, alpha: f64) -> f64 {
    -alpha * q_i * (t.attack_penalty + t.attack_reward) + (t.attack_reward - t.attack_cost)
}

/// Quantal-response attack distribution: softmax of `λ · u_i`.
pub fn qr_attack_distribution(g: &GameInstance, q: &DefenseStrategy) -> Result<AttackStrategy> {
    check_len("defense strategy", g.n(), q.len())?;
    let mut p = vec![0.0; g.n()];
    qr_into(g, &q.q, &mut p)?;
    Ok(AttackStrategy {
        p,
        normalized: true,
    })
}

/// Writes the QR distribution for `q` into `out`. Shared by the allocation
/// free hot path of the solver.
pub(crate) fn qr_into(g: &GameInstance, q: &[f64], out: &mut [f64]) -> Result<()> {
    let lambda = g.lambda;
    let mut max = f64::NEG_INFINITY;
    for ((o, t), &qi) in out.iter_mut().zip(&g.targets).zip(q) {
        let z = lambda * per_target_attacker_utility(t, qi, g.alpha);
        *o = z;
        max = max.max(z);
    }
    if !max.is_finite() {
        return Err(GtraError::Numeric(format!(
            "QR exponent is not finite (max = {max})"
        )));
    }
    let mut sum = 0.0;
    for o in out.iter_mut() {
        *o = (*o - max).exp();
        sum += *o;
    }
    if !(sum.is_finite() && sum > 0.0) {
        return Err(GtraError::Numeric(format!(
            "QR normalizer is degenerate ({sum})"
        )));
    }
    for o in out.iter_mut() {
        *o /= sum;
    }
    Ok(())
}

/// Defender utility against a quantal-response attacker.
pub fn qr_defender_utility(g: &GameInstance, q: &DefenseStrategy) -> Result<f64> {
    check_len("defense strategy", g.n(), q.len())?;
    let mut scratch = vec![0.0; g.n()];
    qr_defender_utility_with(g, &q.q, &mut scratch)
}

pub(crate) fn qr_defender_utility_with(
    g: &GameInstance,
    q: &[f64],
    scratch: &mut [f64],
) -> Result<f64> {
    qr_into(g, q, scratch)?;
    Ok(g.targets
        .iter()
        .zip(q.iter().zip(scratch.iter()))
        .map(|(t, (&qi, &pi))| {
            (g.alpha * qi * (t.attack_penalty + t.attack_reward) - t.attack_reward) * pi
                - qi * t.defense_cost
        })
        .sum())
}

/// Perfectly rational attacker: attack exactly the targets with strictly
/// positive expected payoff.
pub fn rational_best_response(g: &GameInstance, q: &DefenseStrategy) -> Result<AttackStrategy> {
    check_len("defense strategy", g.n(), q.len())?;
    let p = g
        .targets
        .iter()
        .zip(&q.q)
        .map(|(t, &qi)| {
            if per_target_attacker_utility(t, qi, g.alpha) > 0.0 {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    Ok(AttackStrategy::independent(p))
}
