//! Seeded random game populations for the experiment families.

use std::fmt;
use std::str::FromStr;

use rand::distr::Open01;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GtraError, Result};
use crate::game::{CostAccounting, GameInstance, TargetParams, DEFAULT_ALPHA, DEFAULT_LAMBDA};
use crate::seed;

pub const DEFAULT_GAMMA: f64 = 0.1;

/// Reward and penalty magnitudes for the cost scenarios.
const VALUE_RANGE: (f64, f64) = (1.0, 10.0);

const HIGHSEC_DEFENSE_COST: (f64, f64) = (0.01, 0.02);
const HIGHSEC_ATTACK_COST: (f64, f64) = (0.02, 0.03);
const HIGHSEC_PENALTY: (f64, f64) = (1.4, 1.6);
const HIGHSEC_DEFENDER_PENALTY: (f64, f64) = (0.4, 0.6);
/// Not published for this configuration; chosen below the penalty range.
const HIGHSEC_REWARD: (f64, f64) = (0.9, 1.1);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scenario {
    /// Defense costlier than attack: C^m ∈ (γ, 2γ), C^a ∈ (0, γ).
    CmGreater,
    /// Attack costlier than defense: C^m ∈ (0, γ), C^a ∈ (γ, 2γ).
    CaGreater,
    /// C^m ∈ (0, γ), C^a = C^m.
    Equal,
    /// No action costs; resources are counted as Σ q_i.
    NoCost,
    /// Narrow-gap, high-security configuration.
    HighSec,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::CmGreater => "CmGreater",
            Scenario::CaGreater => "CaGreater",
            Scenario::Equal => "Equal",
            Scenario::NoCost => "NoCost",
            Scenario::HighSec => "HighSec",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Scenario {
    type Err = GtraError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "CmGreater" => Ok(Scenario::CmGreater),
            "CaGreater" => Ok(Scenario::CaGreater),
            "Equal" => Ok(Scenario::Equal),
            "NoCost" => Ok(Scenario::NoCost),
            "HighSec" => Ok(Scenario::HighSec),
            other => Err(GtraError::Config(format!(
                "unknown scenario {other:?} (expected CmGreater, CaGreater, Equal, NoCost or HighSec)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub n: usize,
    /// Budget ratio. Cost scenarios use `M = γ·N`; HighSec uses
    /// `M = γ·Σ C_i^m`.
    pub gamma: f64,
    pub alpha: f64,
    pub lambda: f64,
    pub instances: usize,
    pub master_seed: u64,
    /// When set, `M = fraction · (cost of protecting every target)`,
    /// overriding the γ rule.
    #[serde(default)]
    pub budget_fraction: Option<f64>,
}

impl ScenarioConfig {
    pub fn new(scenario: Scenario, n: usize) -> Self {
        Self {
            scenario,
            n,
            gamma: DEFAULT_GAMMA,
            alpha: DEFAULT_ALPHA,
            lambda: DEFAULT_LAMBDA,
            instances: 20,
            master_seed: 0,
            budget_fraction: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(GtraError::Config(m));
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return bad(format!(
                "gamma = {} violates 0 < gamma <= 1 (the budget must not cover every target)",
                self.gamma
            ));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return bad(format!("alpha = {} is outside [0, 1]", self.alpha));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return bad(format!("lambda = {} must be finite and >= 0", self.lambda));
        }
        if self.instances == 0 {
            return bad("instances must be at least 1".into());
        }
        if let Some(f) = self.budget_fraction {
            if !(0.0..=1.0).contains(&f) {
                return bad(format!("budget_fraction = {f} is outside [0, 1]"));
            }
        }
        Ok(())
    }

    pub fn instance_seed(&self, index: usize) -> u64 {
        seed::mix(self.master_seed, index as u64)
    }
}

fn open_uniform(rng: &mut impl Rng, (lo, hi): (f64, f64)) -> f64 {
    let u: f64 = rng.sample(Open01);
    lo + u * (hi - lo)
}

/// Instance `index` of the population described by `cfg`.
pub fn sample_instance(cfg: &ScenarioConfig, index: usize) -> Result<GameInstance> {
    cfg.validate()?;
    if index >= cfg.instances {
        return Err(GtraError::Config(format!(
            "instance index {index} out of range (config has {})",
            cfg.instances
        )));
    }
    let instance_seed = cfg.instance_seed(index);
    let mut rng = seed::rng(instance_seed);
    let gamma = cfg.gamma;
    let targets: Vec<TargetParams> = (1..=cfg.n)
        .map(|id| {
            let mut t = match cfg.scenario {
                Scenario::HighSec => {
                    let reward = open_uniform(&mut rng, HIGHSEC_REWARD);
                    let penalty = open_uniform(&mut rng, HIGHSEC_PENALTY);
                    let cm = open_uniform(&mut rng, HIGHSEC_DEFENSE_COST);
                    let ca = open_uniform(&mut rng, HIGHSEC_ATTACK_COST);
                    TargetParams::new(id, reward, penalty, cm, ca)
                }
                _ => {
                    let reward = open_uniform(&mut rng, VALUE_RANGE);
                    let penalty = open_uniform(&mut rng, VALUE_RANGE);
                    let (cm, ca) = match cfg.scenario {
                        Scenario::CmGreater => (
                            open_uniform(&mut rng, (gamma, 2.0 * gamma)),
                            open_uniform(&mut rng, (0.0, gamma)),
                        ),
                        Scenario::CaGreater => (
                            open_uniform(&mut rng, (0.0, gamma)),
                            open_uniform(&mut rng, (gamma, 2.0 * gamma)),
                        ),
                        Scenario::Equal => {
                            let c = open_uniform(&mut rng, (0.0, gamma));
                            (c, c)
                        }
                        _ => (0.0, 0.0),
                    };
                    TargetParams::new(id, reward, penalty, cm, ca)
                }
            };
            if cfg.scenario == Scenario::HighSec {
                t.defender_penalty = Some(open_uniform(&mut rng, HIGHSEC_DEFENDER_PENALTY));
            }
            t
        })
        .collect();

    let mut g = GameInstance::new(targets, 0.0)
        .with_alpha(cfg.alpha)
        .with_lambda(cfg.lambda)
        .with_seed(seed::mix(instance_seed, u64::from(u32::MAX)));
    if cfg.scenario == Scenario::NoCost {
        g.accounting = CostAccounting::UnitPerTarget;
    }
    g.budget = match (cfg.budget_fraction, cfg.scenario) {
        (Some(f), _) => f * g.full_coverage_cost(),
        (None, Scenario::HighSec) => gamma * g.full_coverage_cost(),
        (None, _) => gamma * cfg.n as f64,
    };
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SweepAxis {
    #[serde(rename = "N")]
    N,
    #[serde(rename = "gamma")]
    Gamma,
    #[serde(rename = "alpha")]
    Alpha,
    #[serde(rename = "lambda")]
    Lambda,
    #[serde(rename = "budget_fraction")]
    BudgetFraction,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::N => "N",
            SweepAxis::Gamma => "gamma",
            SweepAxis::Alpha => "alpha",
            SweepAxis::Lambda => "lambda",
            SweepAxis::BudgetFraction => "budget_fraction",
        }
    }

    fn code(self) -> u64 {
        self as u64
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for SweepAxis {
    type Err = GtraError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "N" | "n" => Ok(SweepAxis::N),
            "gamma" => Ok(SweepAxis::Gamma),
            "alpha" => Ok(SweepAxis::Alpha),
            "lambda" => Ok(SweepAxis::Lambda),
            "budget_fraction" => Ok(SweepAxis::BudgetFraction),
            other => Err(GtraError::Config(format!(
                "unknown sweep axis {other:?} (expected N, gamma, alpha, lambda or budget_fraction)"
            ))),
        }
    }
}

const MAX_GRID_POINTS: usize = 100_000;

/// Parses `start:end:step` (inclusive) or a comma-separated list.
pub fn parse_values(expr: &str) -> Result<Vec<f64>> {
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| GtraError::Config(format!("cannot parse {s:?} as a number in {expr:?}")))
    };
    let values = if expr.contains(':') {
        let parts: Vec<&str> = expr.split(':').collect();
        if parts.len() != 3 {
            return Err(GtraError::Config(format!(
                "range {expr:?} must look like start:end:step"
            )));
        }
        let (start, end, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if step.is_nan() || step <= 0.0 || end < start {
            return Err(GtraError::Config(format!(
                "range {expr:?} needs step > 0 and end >= start"
            )));
        }
        let span = (end - start) / step + 1e-9;
        if !(start.is_finite() && span.is_finite()) || span >= MAX_GRID_POINTS as f64 {
            return Err(GtraError::Config(format!(
                "range {expr:?} must be finite with fewer than {MAX_GRID_POINTS} points"
            )));
        }
        let count = span.floor() as usize + 1;
        (0..count).map(|k| start + k as f64 * step).collect()
    } else {
        expr.split(',').map(num).collect::<Result<Vec<_>>>()?
    };
    if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
        return Err(GtraError::Config(format!("no usable values in {expr:?}")));
    }
    Ok(values)
}

/// One configuration per value along `axis`, each with its own master seed.
pub fn sweep_grid(
    base: &ScenarioConfig,
    axis: SweepAxis,
    values: &[f64],
) -> Result<Vec<ScenarioConfig>> {
    if values.is_empty() {
        return Err(GtraError::Config("sweep needs at least one value".into()));
    }
    values
        .iter()
        .enumerate()
        .map(|(k, &v)| {
            let mut cfg = base.clone();
            match axis {
                SweepAxis::N => {
                    if !(v >= 1.0 && v.fract() == 0.0) {
                        return Err(GtraError::Config(format!(
                            "N = {v} is not a positive integer"
                        )));
                    }
                    cfg.n = v as usize;
                }
                SweepAxis::Gamma => cfg.gamma = v,
                SweepAxis::Alpha => cfg.alpha = v,
                SweepAxis::Lambda => cfg.lambda = v,
                SweepAxis::BudgetFraction => cfg.budget_fraction = Some(v),
            }
            cfg.master_seed = seed::mix_path(base.master_seed, &[axis.code(), k as u64]);
            cfg.validate()
                .map_err(|e| GtraError::Config(format!("{axis} = {v}: {e}")))?;
            Ok(cfg)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(s: Scenario) -> ScenarioConfig {
        ScenarioConfig {
            instances: 5,
            master_seed: 11,
            ..ScenarioConfig::new(s, 30)
        }
    }

    #[test]
    fn no_cost_targets_are_free() {
        for i in 0..5 {
            let g = sample_instance(&cfg(Scenario::NoCost), i).unwrap();
            assert!(g
                .targets
                .iter()
                .all(|t| t.defense_cost == 0.0 && t.attack_cost == 0.0));
            assert_eq!(g.accounting, CostAccounting::UnitPerTarget);
            assert_eq!(g.budget, 3.0);
        }
    }

    #[test]
    fn cm_greater_ranges() {
        let g = sample_instance(&cfg(Scenario::CmGreater), 2).unwrap();
        for t in &g.targets {
            assert!(t.defense_cost > 0.1 && t.defense_cost < 0.2);
            assert!(t.attack_cost > 0.0 && t.attack_cost < 0.1);
            assert!(t.defense_cost > t.attack_cost);
        }
        assert!((g.budget - 3.0).abs() < 1e-12);
    }

    #[test]
    fn deterministic_and_distinct() {
        let c = cfg(Scenario::Equal);
        assert_eq!(
            sample_instance(&c, 3).unwrap(),
            sample_instance(&c, 3).unwrap()
        );
        assert_ne!(
            sample_instance(&c, 3).unwrap().targets,
            sample_instance(&c, 4).unwrap().targets
        );
        assert!(sample_instance(&c, 5).is_err());
    }

    #[test]
    fn highsec_budget_and_ranges() {
        let g = sample_instance(&cfg(Scenario::HighSec), 0).unwrap();
        let total: f64 = g.targets.iter().map(|t| t.defense_cost).sum();
        assert!((g.budget - 0.1 * total).abs() < 1e-12);
        for t in &g.targets {
            assert!(t.attack_penalty > t.attack_reward);
            assert!(t.defender_penalty.is_some());
        }
        let mut c = cfg(Scenario::HighSec);
        c.budget_fraction = Some(0.4);
        let g = sample_instance(&c, 0).unwrap();
        assert!((g.budget - 0.4 * total).abs() < 1e-12);
    }

    #[test]
    fn config_validation() {
        let mut c = cfg(Scenario::CmGreater);
        c.gamma = 1.5;
        let err = c.validate().unwrap_err().to_string();
        assert!(err.contains("gamma"), "{err}");
        assert!("Bogus".parse::<Scenario>().is_err());
        assert_eq!("HighSec".parse::<Scenario>().unwrap(), Scenario::HighSec);
    }

    #[test]
    fn value_expressions() {
        assert_eq!(parse_values("0:15:0.5").unwrap().len(), 31);
        let v = parse_values("0:1:0.1").unwrap();
        assert_eq!(v.len(), 11);
        assert!((v[10] - 1.0).abs() < 1e-12);
        assert_eq!(parse_values("0, 0.5,1").unwrap(), vec![0.0, 0.5, 1.0]);
        assert!(parse_values("1:0:0.1").is_err());
        assert!(parse_values("a,b").is_err());
        assert!(parse_values("0:1").is_err());
        assert!(parse_values("0:inf:1").is_err());
        assert!(parse_values("0:1:1e-12").is_err());
    }

    #[test]
    fn sweep_examples() {
        let base = cfg(Scenario::HighSec);
        let grid =
            sweep_grid(&base, SweepAxis::Lambda, &parse_values("0:15:0.5").unwrap()).unwrap();
        assert_eq!(grid.len(), 31);
        assert_eq!(grid[3].lambda, 1.5);

        let one = sweep_grid(&base, SweepAxis::N, &[80.0]).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].n, 80);
        assert_eq!(
            ScenarioConfig {
                n: 30,
                master_seed: base.master_seed,
                ..one[0].clone()
            },
            base
        );

        let alphas = sweep_grid(&base, SweepAxis::Alpha, &[0.0, 0.5, 1.0]).unwrap();
        assert_eq!(
            alphas.iter().map(|c| c.alpha).collect::<Vec<_>>(),
            vec![0.0, 0.5, 1.0]
        );
        assert_ne!(alphas[0].master_seed, alphas[1].master_seed);

        assert!(sweep_grid(&base, SweepAxis::Alpha, &[1.5]).is_err());
        assert!(sweep_grid(&base, SweepAxis::N, &[2.5]).is_err());
        assert!(sweep_grid(&base, SweepAxis::Gamma, &[]).is_err());
        assert!("speed".parse::<SweepAxis>().is_err());
    }
}
