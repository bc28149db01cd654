use super::SolveResult;
use crate::error::{GtraError, Result};
use crate::game::{qr_defender_utility_with, DefenseStrategy, GameInstance};

const MAX_TARGETS: usize = 4;
const MAX_POINTS: f64 = 2e7;

/// Exhaustive search over the lattice `{0, step, 2·step, …} ∩ [0,1]` per target.
///
/// Budget-infeasible points are skipped. The all-zero point is always
/// feasible, so a result always exists.
pub fn brute_force_solve(g: &GameInstance, grid_step: f64) -> Result<SolveResult> {
    g.validate()?;
    if !(grid_step > 0.0 && grid_step <= 0.5) {
        return Err(GtraError::Config(format!(
            "grid_step {grid_step} must lie in (0, 0.5]"
        )));
    }
    let n = g.n();
    let levels: Vec<f64> = {
        let k = (1.0 / grid_step + 1e-9).floor() as usize;
        (0..=k).map(|i| (i as f64 * grid_step).min(1.0)).collect()
    };
    let points = (levels.len() as f64).powi(n as i32);
    if n > MAX_TARGETS || points > MAX_POINTS {
        return Err(GtraError::Capacity(format!(
            "grid of {points:.0} points over {n} targets exceeds the oracle limit ({MAX_TARGETS} targets, {MAX_POINTS:.0} points)"
        )));
    }

    let costs = g.resource_costs();
    let mut idx = vec![0usize; n];
    let mut q = vec![0.0; n];
    let mut scratch = vec![0.0; n];
    let mut best_q = vec![0.0; n];
    let mut best = qr_defender_utility_with(g, &q, &mut scratch)?;
    loop {
        // odometer increment
        let mut pos = 0;
        while pos < n {
            idx[pos] += 1;
            if idx[pos] < levels.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
        if pos == n {
            break;
        }
        for (qi, &k) in q.iter_mut().zip(&idx) {
            *qi = levels[k];
        }
        let used: f64 = q.iter().zip(&costs).map(|(a, c)| a * c).sum();
        if used > g.budget + 1e-12 {
            continue;
        }
        let u = qr_defender_utility_with(g, &q, &mut scratch)?;
        if u > best {
            best = u;
            best_q.copy_from_slice(&q);
        }
    }

    Ok(SolveResult {
        q_star: DefenseStrategy::for_game(g, best_q),
        utility: best,
        iterations_used: 1,
        per_iteration_utilities: vec![best],
        seed: g.seed,
    })
}
