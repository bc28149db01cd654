//! Real-coded GA over `q ∈ [0,1]^N` with repair-by-scaling for the budget.
//!
//! Operators: tournament selection (size 3), BLX-0.5 crossover, per-gene
//! Gaussian mutation, elitism. Every offspring draws from its own ChaCha
//! stream addressed by `(generation, slot)`, and the fitness is pure, so the
//! result does not depend on how rayon schedules the work.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use super::{GaParams, SolveResult};
use crate::error::{GtraError, Result};
use crate::game::{qr_defender_utility_with, DefenseStrategy, GameInstance};
use crate::seed;

const TOURNAMENT: usize = 3;
const BLX_ALPHA: f64 = 0.5;
const MIN_IMPROVEMENT: f64 = 1e-9;

/// Scales `q` down uniformly until `Σ q_i · costs_i ≤ budget`.
///
/// The factor is always ≤ 1, so entries stay in `[0,1]`.
pub fn repair(q: &mut [f64], costs: &[f64], budget: f64) {
    let used: f64 = q.iter().zip(costs).map(|(a, c)| a * c).sum();
    if used <= budget {
        return;
    }
    if budget <= 0.0 {
        q.iter_mut().for_each(|v| *v = 0.0);
        return;
    }
    let factor = budget / used;
    q.iter_mut().for_each(|v| *v *= factor);
}

struct Problem<'a> {
    game: &'a GameInstance,
    costs: Vec<f64>,
    budget: f64,
    mutation_rate: f64,
    mutation: Normal<f64>,
    sparse_density: f64,
}

impl Problem<'_> {
    fn random_individual(&self, rng: &mut impl Rng, sparse: bool) -> Vec<f64> {
        let mut q: Vec<f64> = (0..self.costs.len())
            .map(|_| {
                if sparse && !rng.random_bool(self.sparse_density) {
                    0.0
                } else {
                    rng.random::<f64>()
                }
            })
            .collect();
        repair(&mut q, &self.costs, self.budget);
        q
    }

    fn offspring(
        &self,
        pop: &[Vec<f64>],
        fitness: &[f64],
        params: &GaParams,
        rng: &mut impl Rng,
    ) -> Vec<f64> {
        let a = tournament(fitness, rng);
        let b = tournament(fitness, rng);
        let mut child = if rng.random_bool(params.crossover_rate) {
            blend(&pop[a], &pop[b], rng)
        } else {
            pop[a].clone()
        };
        for gene in child.iter_mut() {
            if rng.random_bool(self.mutation_rate) {
                *gene = (*gene + self.mutation.sample(rng)).clamp(0.0, 1.0);
            }
        }
        repair(&mut child, &self.costs, self.budget);
        child
    }

    fn evaluate(&self, pop: &[Vec<f64>]) -> Result<Vec<f64>> {
        let n = self.costs.len();
        pop.par_iter()
            .map_init(
                || vec![0.0; n],
                |scratch, q| {
                    let u = qr_defender_utility_with(self.game, q, scratch)?;
                    if u.is_nan() {
                        return Err(GtraError::Numeric(
                            "defender utility evaluated to NaN".into(),
                        ));
                    }
                    Ok(u)
                },
            )
            .collect()
    }
}

fn tournament(fitness: &[f64], rng: &mut impl Rng) -> usize {
    let mut best = rng.random_range(0..fitness.len());
    for _ in 1..TOURNAMENT {
        let c = rng.random_range(0..fitness.len());
        if fitness[c] > fitness[best] || (fitness[c] == fitness[best] && c < best) {
            best = c;
        }
    }
    best
}

fn blend(x: &[f64], y: &[f64], rng: &mut impl Rng) -> Vec<f64> {
    x.iter()
        .zip(y)
        .map(|(&a, &b)| {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let d = hi - lo;
            if d == 0.0 {
                lo
            } else {
                rng.random_range((lo - BLX_ALPHA * d)..(hi + BLX_ALPHA * d))
                    .clamp(0.0, 1.0)
            }
        })
        .collect()
}

/// Indices sorted by descending fitness; ties keep index order.
fn ranking(fitness: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..fitness.len()).collect();
    idx.sort_by(|&a, &b| fitness[b].total_cmp(&fitness[a]).then(a.cmp(&b)));
    idx
}

/// One GA run. Deterministic in `(g, params, stream_seed)`.
pub fn ga_optimize(g: &GameInstance, params: &GaParams, stream_seed: u64) -> Result<SolveResult> {
    g.validate()?;
    params.validate()?;
    let n = g.n();
    let costs = g.resource_costs();
    if let Some(i) = costs.iter().position(|&c| c <= 0.0) {
        return Err(GtraError::Config(format!(
            "target {} has non-positive resource cost",
            i + 1
        )));
    }
    let total: f64 = costs.iter().sum();
    let problem = Problem {
        game: g,
        budget: g.budget,
        mutation_rate: params.mutation_rate_for(n),
        mutation: Normal::new(0.0, params.mutation_scale)
            .map_err(|e| GtraError::Config(format!("mutation_scale: {e}")))?,
        sparse_density: (g.budget / total).clamp(0.0, 1.0),
        costs,
    };

    let size = params.population_size;
    let mut pop: Vec<Vec<f64>> = (0..size)
        .into_par_iter()
        .map(|i| {
            let mut rng = seed::rng(seed::mix_path(stream_seed, &[0, i as u64]));
            problem.random_individual(&mut rng, i >= size / 2)
        })
        .collect();
    let mut fitness = problem.evaluate(&pop)?;

    let mut order = ranking(&fitness);
    let mut best_fitness = fitness[order[0]];
    let mut stall = 0;
    for generation in 1..=params.generations {
        let elites: Vec<usize> = order[..params.elitism_count].to_vec();
        let children: Vec<Vec<f64>> = (params.elitism_count..size)
            .into_par_iter()
            .map(|slot| {
                let mut rng = seed::rng(seed::mix_path(
                    stream_seed,
                    &[generation as u64, slot as u64],
                ));
                problem.offspring(&pop, &fitness, params, &mut rng)
            })
            .collect();
        let child_fitness = problem.evaluate(&children)?;

        let mut next_pop = Vec::with_capacity(size);
        let mut next_fit = Vec::with_capacity(size);
        for &e in &elites {
            next_pop.push(pop[e].clone());
            next_fit.push(fitness[e]);
        }
        next_pop.extend(children);
        next_fit.extend(child_fitness);
        pop = next_pop;
        fitness = next_fit;

        order = ranking(&fitness);
        let top = fitness[order[0]];
        if top > best_fitness + MIN_IMPROVEMENT {
            stall = 0;
        } else {
            stall += 1;
        }
        best_fitness = best_fitness.max(top);
        if stall >= params.stall_generations {
            break;
        }
    }

    let q = pop.swap_remove(order[0]);
    let utility = fitness[order[0]];
    Ok(SolveResult {
        q_star: DefenseStrategy::for_game(g, q),
        utility,
        iterations_used: 1,
        per_iteration_utilities: vec![utility],
        seed: stream_seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{qr_defender_utility, TargetParams};
    use proptest::prelude::*;

    fn params() -> GaParams {
        GaParams {
            population_size: 60,
            generations: 120,
            ..GaParams::default()
        }
    }

    #[test]
    fn zero_budget_gives_zero_strategy() {
        let g = GameInstance::new(
            vec![
                TargetParams::new(1, 2.0, 1.0, 0.3, 0.5),
                TargetParams::new(2, 3.0, 2.0, 0.2, 0.1),
            ],
            0.0,
        )
        .with_lambda(1.5);
        let r = ga_optimize(&g, &params(), 5).unwrap();
        assert_eq!(r.q_star.q, vec![0.0, 0.0]);
        let expected = qr_defender_utility(&g, &DefenseStrategy::zeros(&g)).unwrap();
        assert_eq!(r.utility, expected);
    }

    #[test]
    fn finds_the_upper_boundary_in_one_dimension() {
        // d/dq of the objective is α(P+R) − C^m > 0 for N = 1, so q = 1 is optimal.
        let g = GameInstance::new(vec![TargetParams::new(1, 2.0, 1.0, 0.01, 0.5)], 1.0);
        let grid_best = (0..=1000)
            .map(|k| {
                let q = k as f64 / 1000.0;
                (
                    q,
                    qr_defender_utility(&g, &DefenseStrategy::for_game(&g, vec![q])).unwrap(),
                )
            })
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        assert_eq!(grid_best.0, 1.0);
        let r = ga_optimize(&g, &params(), 11).unwrap();
        assert!(r.q_star.q[0] > 1.0 - 1e-6, "q = {:?}", r.q_star.q);
    }

    #[test]
    fn repeatable() {
        let g = GameInstance::new(
            (1..=5)
                .map(|i| TargetParams::new(i, 1.0 + 0.1 * i as f64, 1.5, 0.015, 0.025))
                .collect(),
            0.03,
        );
        let a = ga_optimize(&g, &params(), 42).unwrap();
        let b = ga_optimize(&g, &params(), 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.utility.to_bits(), b.utility.to_bits());
        let c = ga_optimize(&g, &params(), 43).unwrap();
        assert_eq!(c.seed, 43);
    }

    #[test]
    fn independent_of_thread_count() {
        let g = GameInstance::new(
            (1..=8)
                .map(|i| TargetParams::new(i, 1.0 + 0.05 * i as f64, 1.5, 0.012, 0.025))
                .collect(),
            0.05,
        );
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| ga_optimize(&g, &params(), 3).unwrap())
        };
        assert_eq!(run(1), run(4));
    }

    proptest! {
        #[test]
        fn repair_stays_in_box_and_budget(
            q in prop::collection::vec(0.0f64..=1.0, 1..20),
            budget in 0.0f64..3.0,
        ) {
            let costs: Vec<f64> = (0..q.len()).map(|i| 0.05 + 0.1 * (i % 7) as f64).collect();
            let mut r = q.clone();
            repair(&mut r, &costs, budget);
            let used: f64 = r.iter().zip(&costs).map(|(a, c)| a * c).sum();
            prop_assert!(used <= budget + 1e-9);
            for (after, before) in r.iter().zip(&q) {
                prop_assert!((0.0..=1.0).contains(after));
                prop_assert!(after <= before);
            }
        }
    }
}
