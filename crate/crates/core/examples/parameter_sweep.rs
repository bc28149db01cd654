//! How the optimized utilities move with the punishment factor alpha.

use gtra::baselines::StrategyKind;
use gtra::harness::evaluate::{evaluate_population, mean_of};
use gtra::harness::{ExperimentConfig, OutcomeMode};
use gtra::scenario::{sweep_grid, Scenario, SweepAxis};

fn main() -> gtra::Result<()> {
    let cfg = ExperimentConfig {
        scenario: Scenario::CmGreater,
        n: 30,
        instances: 6,
        times: 3,
        strategies: vec![StrategyKind::Ne],
        outcome_mode: OutcomeMode::Expected,
        ..Default::default()
    };
    let alphas = [0.0, 0.25, 0.5, 0.75, 1.0];
    let grid = sweep_grid(&cfg.scenario_config(cfg.n), SweepAxis::Alpha, &alphas)?;
    println!("alpha  defender  attacker");
    for (point, alpha) in grid.iter().zip(alphas) {
        let evals = evaluate_population(point, &cfg)?;
        println!(
            "{alpha:<5}  {:>8.4}  {:>8.4}",
            mean_of(&evals, StrategyKind::Ne, |s| s.defender_utility),
            mean_of(&evals, StrategyKind::Ne, |s| s.attacker_utility),
        );
    }
    Ok(())
}
