//! Replicator dynamics of a single target: locate the interior rest point
//! and write a phase portrait to `phase_portrait.svg`.

use gtra::dynamics::{interior_equilibrium, phase_portrait, reduce_payoffs, DEFAULT_DT};
use gtra::game::TargetParams;
use gtra::harness::svg::LinePlot;

fn main() -> gtra::Result<()> {
    let target = TargetParams::new(0, 5.0, 4.0, 1.0, 0.5);
    let sp = reduce_payoffs(&target, 0.8);
    println!("reduced payoffs: {sp:?}");

    let eq = interior_equilibrium(&sp);
    match eq {
        Some((p, q)) => println!("interior equilibrium p* = {p:.4}, q* = {q:.4}"),
        None => println!("no interior equilibrium"),
    }

    let trajectories = phase_portrait(&sp, 3, DEFAULT_DT, 20_000)?;
    let mut plot = LinePlot::new(
        "Replicator dynamics",
        "attack probability p",
        "protection probability q",
    );
    plot.x_range = Some((0.0, 1.0));
    plot.y_range = Some((0.0, 1.0));
    plot.marker = eq;
    for (k, t) in trajectories.iter().enumerate() {
        let end = t.last();
        println!(
            "trajectory {k}: ends at ({:.4}, {:.4}) after {} steps",
            end.p, end.q, t.steps
        );
        plot = plot.with_series(
            &format!("trajectory {k}"),
            t.points.iter().step_by(50).map(|x| (x.p, x.q)).collect(),
        );
    }
    std::fs::write("phase_portrait.svg", plot.render())?;
    println!("wrote phase_portrait.svg");
    Ok(())
}
