//! Score the optimized allocation against the four heuristics on a
//! population of high-security instances.

use gtra::baselines::StrategyKind;
use gtra::harness::evaluate::{evaluate_population, mean_of};
use gtra::harness::ExperimentConfig;
use gtra::scenario::Scenario;

fn main() -> gtra::Result<()> {
    let cfg = ExperimentConfig {
        scenario: Scenario::HighSec,
        n: 60,
        instances: 8,
        times: 3,
        master_seed: 1,
        ..Default::default()
    };
    let evals = evaluate_population(&cfg.scenario_config(cfg.n), &cfg)?;

    println!(
        "{:<10} {:>10} {:>10} {:>9} {:>12}",
        "strategy", "defender", "vuln", "coverage", "effectiveness"
    );
    for kind in StrategyKind::ALL {
        println!(
            "{:<10} {:>10.4} {:>10.4} {:>9.4} {:>12.2}",
            kind.to_string(),
            mean_of(&evals, kind, |s| s.defender_utility),
            mean_of(&evals, kind, |s| s.vulnerability),
            mean_of(&evals, kind, |s| s.coverage),
            mean_of(&evals, kind, |s| s.effectiveness),
        );
    }
    Ok(())
}
