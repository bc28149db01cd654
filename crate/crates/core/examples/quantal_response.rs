//! The attacker's rationality parameter, from uniform guessing to a sharp
//! best response.

use gtra::game::{
    qr_attack_distribution, qr_defender_utility, DefenseStrategy, GameInstance, TargetParams,
};

fn main() -> gtra::Result<()> {
    let targets = vec![
        TargetParams::new(1, 9.0, 2.0, 0.4, 0.3),
        TargetParams::new(2, 5.0, 5.0, 0.4, 0.3),
        TargetParams::new(3, 2.0, 8.0, 0.4, 0.3),
    ];
    let base = GameInstance::new(targets, 1.0);
    let q = DefenseStrategy::for_game(&base, vec![0.5, 0.3, 0.2]);
    for lambda in [0.0, 0.5, 1.5, 4.0, 15.0] {
        let g = base.clone().with_lambda(lambda);
        let p = qr_attack_distribution(&g, &q)?;
        let shown: Vec<String> = p.p.iter().map(|x| format!("{x:.3}")).collect();
        println!(
            "lambda {lambda:>4}: p = [{}]  defender {:.4}",
            shown.join(", "),
            qr_defender_utility(&g, &q)?
        );
    }
    Ok(())
}
