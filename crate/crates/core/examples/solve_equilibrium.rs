//! Solve a small hand-built game for the defender's allocation against a
//! quantal-response attacker, and compare with an exhaustive grid search.

use gtra::game::{qr_attack_distribution, GameInstance, TargetParams};
use gtra::solver::{brute_force_solve, iga_solve, GaParams};

fn main() -> gtra::Result<()> {
    // (id, attack reward, attack penalty, defense cost, attack cost)
    let targets = vec![
        TargetParams::new(1, 8.0, 3.0, 0.6, 0.2),
        TargetParams::new(2, 4.0, 6.0, 0.3, 0.4),
        TargetParams::new(3, 6.0, 5.0, 0.5, 0.1),
    ];
    let g = GameInstance::new(targets, 0.8).with_seed(42);

    let ga = iga_solve(&g, 10, &GaParams::default())?;
    let p = qr_attack_distribution(&g, &ga.q_star)?;
    println!("defender utility {:.5}", ga.utility);
    for (i, (q, p)) in ga.q_star.q.iter().zip(&p.p).enumerate() {
        println!("  target {}: protect {q:.4}  attack {p:.4}", i + 1);
    }
    println!(
        "resources used {:.4} of {}",
        g.consumption(&ga.q_star.q),
        g.budget
    );

    let grid = brute_force_solve(&g, 0.02)?;
    println!("grid search (step 0.02) utility {:.5}", grid.utility);
    Ok(())
}
