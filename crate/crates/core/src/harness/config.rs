use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::baselines::{FillOrder, StrategyKind};
use crate::dynamics::{IntegrationOptions, DEFAULT_DT, DEFAULT_TOL};
use crate::error::{GtraError, Result};
use crate::game::{GameInstance, TargetParams, DEFAULT_ALPHA, DEFAULT_LAMBDA};
use crate::scenario::{Scenario, ScenarioConfig, DEFAULT_GAMMA};
use crate::solver::{GaParams, DEFAULT_TIMES};

/// Largest N accepted without `--paper-scale`.
pub const DESK_MAX_N: usize = 200;
pub const DESK_INSTANCES: usize = 20;
pub const PAPER_INSTANCES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomeMode {
    /// Bernoulli draws per target and trial.
    #[default]
    Sampled,
    /// Expected cell counts, no sampling noise.
    Expected,
}

/// Single-target parameters for the dynamics command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicsTarget {
    pub reward: f64,
    pub penalty: f64,
    pub defense_cost: f64,
    pub attack_cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DynamicsConfig {
    pub target: DynamicsTarget,
    pub alpha: f64,
    pub grid: usize,
    pub dt: f64,
    pub max_steps: usize,
    pub tol: f64,
    pub record_every: usize,
}

impl Default for DynamicsConfig {
    fn default() -> Self {
        Self {
            target: DynamicsTarget {
                reward: 2.0,
                penalty: 1.0,
                defense_cost: 0.3,
                attack_cost: 0.5,
            },
            alpha: DEFAULT_ALPHA,
            grid: 4,
            dt: DEFAULT_DT,
            max_steps: 20_000,
            tol: DEFAULT_TOL,
            record_every: 50,
        }
    }
}

impl DynamicsConfig {
    pub fn target_params(&self) -> TargetParams {
        let t = &self.target;
        TargetParams::new(1, t.reward, t.penalty, t.defense_cost, t.attack_cost)
    }

    pub fn options(&self) -> IntegrationOptions {
        IntegrationOptions {
            dt: self.dt,
            max_steps: self.max_steps,
            tol: self.tol,
            record_every: self.record_every,
        }
    }
}

/// Explicit game for `solve`, bypassing the scenario sampler.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitGame {
    pub targets: Vec<TargetParams>,
    pub budget: f64,
}

/// One experiment definition, read from JSON. Every field has a default and
/// the fully resolved form is echoed into the run manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub n: usize,
    /// Target counts for `compare`; defaults to `[n]`.
    pub n_values: Option<Vec<usize>>,
    pub gamma: f64,
    pub alpha: f64,
    pub lambda: f64,
    pub instances: usize,
    pub master_seed: u64,
    pub budget_fraction: Option<f64>,
    /// GA restarts per solve.
    pub times: usize,
    pub trials: usize,
    pub outcome_mode: OutcomeMode,
    /// Reuse one outcome stream for every strategy of an instance.
    pub shared_draws: bool,
    pub fill_order: FillOrder,
    pub strategies: Vec<StrategyKind>,
    /// Which sampled instance `solve` works on.
    pub instance_index: usize,
    pub game: Option<ExplicitGame>,
    pub ga: GaParams,
    pub dynamics: DynamicsConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            scenario: Scenario::HighSec,
            n: 50,
            n_values: None,
            gamma: DEFAULT_GAMMA,
            alpha: DEFAULT_ALPHA,
            lambda: DEFAULT_LAMBDA,
            instances: DESK_INSTANCES,
            master_seed: 0,
            budget_fraction: None,
            times: DEFAULT_TIMES,
            trials: 10_000,
            outcome_mode: OutcomeMode::Sampled,
            shared_draws: true,
            fill_order: FillOrder::Index,
            strategies: StrategyKind::ALL.to_vec(),
            instance_index: 0,
            game: None,
            ga: GaParams::default(),
            dynamics: DynamicsConfig::default(),
        }
    }
}

/// Command-line adjustments applied on top of the file.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub paper_scale: bool,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            GtraError::Config(format!("line {}, column {}: {e}", e.line(), e.column()))
        })
    }

    /// Reads, applies overrides and validates. Validation errors name the
    /// line of the offending key when it appears in the file.
    pub fn load(path: &Path, overrides: Overrides) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| GtraError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::from_json(&text)?;
        cfg.apply(overrides);
        cfg.validate(overrides.paper_scale).map_err(|e| match e {
            GtraError::Config(msg) => {
                let line = msg
                    .split(|c: char| !(c.is_alphanumeric() || c == '_'))
                    .find_map(|word| key_line(&text, word));
                match line {
                    Some(l) => GtraError::Config(format!("{}: line {l}: {msg}", path.display())),
                    None => GtraError::Config(format!("{}: {msg}", path.display())),
                }
            }
            other => other,
        })?;
        Ok(cfg)
    }

    pub fn apply(&mut self, o: Overrides) {
        if let Some(s) = o.seed {
            self.master_seed = s;
        }
        if o.paper_scale {
            self.instances = PAPER_INSTANCES;
        }
    }

    pub fn validate(&self, paper_scale: bool) -> Result<()> {
        for &n in self.target_counts().iter() {
            self.scenario_config(n).validate()?;
            if !paper_scale && n > DESK_MAX_N {
                return Err(GtraError::Config(format!(
                    "n = {n} exceeds the desk-scale limit of {DESK_MAX_N}; pass --paper-scale to run it"
                )));
            }
        }
        if self.times == 0 {
            return Err(GtraError::Config("times must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(GtraError::Config("trials must be at least 1".into()));
        }
        if self.strategies.is_empty() {
            return Err(GtraError::Config("strategies must not be empty".into()));
        }
        if self.instance_index >= self.instances && self.game.is_none() {
            return Err(GtraError::Config(format!(
                "instance_index {} is out of range for {} instances",
                self.instance_index, self.instances
            )));
        }
        if let Some(g) = &self.game {
            self.explicit_instance(g).validate()?;
        }
        self.ga.validate()?;
        let d = &self.dynamics;
        if !(0.0..=1.0).contains(&d.alpha) {
            return Err(GtraError::Config(format!(
                "dynamics alpha = {} is outside [0, 1]",
                d.alpha
            )));
        }
        d.target_params().validate()?;
        if d.grid < 2
            || d.record_every == 0
            || d.max_steps == 0
            || d.dt.is_nan()
            || d.dt <= 0.0
            || d.tol.is_nan()
            || d.tol < 0.0
        {
            return Err(GtraError::Config(
                "dynamics needs grid >= 2, dt > 0, tol >= 0, max_steps > 0 and record_every > 0"
                    .into(),
            ));
        }
        Ok(())
    }

    pub fn target_counts(&self) -> Vec<usize> {
        self.n_values.clone().unwrap_or_else(|| vec![self.n])
    }

    pub fn scenario_config(&self, n: usize) -> ScenarioConfig {
        ScenarioConfig {
            scenario: self.scenario,
            n,
            gamma: self.gamma,
            alpha: self.alpha,
            lambda: self.lambda,
            instances: self.instances,
            master_seed: self.master_seed,
            budget_fraction: self.budget_fraction,
        }
    }

    pub fn explicit_instance(&self, g: &ExplicitGame) -> GameInstance {
        GameInstance::new(g.targets.clone(), g.budget)
            .with_alpha(self.alpha)
            .with_lambda(self.lambda)
            .with_seed(self.master_seed)
    }
}

/// 1-based line of the first `"key":` occurrence.
fn key_line(text: &str, key: &str) -> Option<usize> {
    if key.is_empty() {
        return None;
    }
    let needle = format!("\"{key}\"");
    text.lines()
        .position(|l| l.contains(&needle))
        .map(|i| i + 1)
}
