//! Seeded instance generation for each cost scenario, plus the outcome
//! metrics of the naive full-coverage allocation.

use gtra::baselines::all_ones;
use gtra::game::qr_attack_distribution;
use gtra::metrics::{coverage, effectiveness, sample_outcomes, vulnerability};
use gtra::scenario::{sample_instance, Scenario, ScenarioConfig};

fn main() -> gtra::Result<()> {
    for scenario in [
        Scenario::CmGreater,
        Scenario::CaGreater,
        Scenario::Equal,
        Scenario::NoCost,
        Scenario::HighSec,
    ] {
        let mut cfg = ScenarioConfig::new(scenario, 20);
        cfg.master_seed = 7;
        let g = sample_instance(&cfg, 0)?;
        let t = &g.targets[0];
        let q = all_ones(&g);
        let p = qr_attack_distribution(&g, &q)?;
        let c = sample_outcomes(&g, &p, &q, 5_000, 1)?;
        let used = g.consumption(&q.q);
        println!(
            "{scenario:<9} budget {:>6.3}  first target R={:.2} P={:.2} Cm={:.3} Ca={:.3}  full cover: vuln {} cov {} eff {:.2}",
            g.budget,
            t.attack_reward,
            t.attack_penalty,
            t.defense_cost,
            t.attack_cost,
            vulnerability(&c),
            coverage(&c),
            effectiveness(&c, used),
        );
    }
    Ok(())
}
