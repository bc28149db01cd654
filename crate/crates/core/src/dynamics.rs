//! Single-target evolutionary analysis.
//!
//! With `p` the attack share and `q` the protection share, the replicator
//! field over the simplified payoffs is
//!
//! ```text
//! ṗ = p(1−p)[q·a + (1−q)·c]
//! q̇ = q(1−q)[p(b−d) + (1−p)·f]
//! ```
//!
//! The unit square is invariant; trajectories are integrated with classical
//! RK4 and any floating-point drift outside it is clipped and accounted for.

use serde::{Deserialize, Serialize};

use crate::error::{GtraError, Result};
use crate::game::{payoff_cell, TargetParams};

pub const DEFAULT_DT: f64 = 1e-3;
pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_STEPS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimplifiedPayoffs {
    /// Attacker payoff, attack vs. protect.
    pub a: f64,
    /// Defender payoff, attack vs. protect.
    pub b: f64,
    /// Attacker payoff, attack vs. no protection.
    pub c: f64,
    /// Defender payoff, attack vs. no protection.
    pub d: f64,
    /// Defender payoff, no attack vs. protect.
    pub f: f64,
}

pub fn reduce_payoffs(t: &TargetParams, alpha: f64) -> SimplifiedPayoffs {
    let (a, b) = payoff_cell(t, true, true, alpha);
    let (c, d) = payoff_cell(t, true, false, alpha);
    let (_, f) = payoff_cell(t, false, true, alpha);
    SimplifiedPayoffs { a, b, c, d, f }
}

#[inline]
pub fn replicator_field(sp: &SimplifiedPayoffs, p: f64, q: f64) -> (f64, f64) {
    let p_dot = p * (1.0 - p) * (q * sp.a + (1.0 - q) * sp.c);
    let q_dot = q * (1.0 - q) * (p * (sp.b - sp.d) + (1.0 - p) * sp.f);
    (p_dot, q_dot)
}

/// Interior rest point `(p*, q*)`, if one exists strictly inside the square.
pub fn interior_equilibrium(sp: &SimplifiedPayoffs) -> Option<(f64, f64)> {
    let q_den = sp.c - sp.a;
    let p_den = (sp.b - sp.d) - sp.f;
    if q_den == 0.0 || p_den == 0.0 {
        return None;
    }
    let q = sp.c / q_den;
    let p = -sp.f / p_den;
    let inside = |x: f64| x > 0.0 && x < 1.0;
    (inside(p) && inside(q)).then_some((p, q))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// Field norm fell below the tolerance.
    Converged,
    MaxSteps,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub p: f64,
    pub q: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
    pub dt: f64,
    pub terminated_early: bool,
    pub termination: Termination,
    pub steps: usize,
    /// Sum of the distances removed by clipping back into the unit square.
    pub clipped: f64,
}

impl Trajectory {
    pub fn last(&self) -> TrajectoryPoint {
        *self
            .points
            .last()
            .expect("trajectory holds its initial point")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrationOptions {
    pub dt: f64,
    pub max_steps: usize,
    pub tol: f64,
    /// Keep every `record_every`-th step; the final state is always kept.
    pub record_every: usize,
}

impl Default for IntegrationOptions {
    fn default() -> Self {
        Self {
            dt: DEFAULT_DT,
            max_steps: DEFAULT_MAX_STEPS,
            tol: DEFAULT_TOL,
            record_every: 1,
        }
    }
}

fn rk4_step(sp: &SimplifiedPayoffs, p: f64, q: f64, h: f64) -> (f64, f64) {
    let (k1p, k1q) = replicator_field(sp, p, q);
    let (k2p, k2q) = replicator_field(sp, p + 0.5 * h * k1p, q + 0.5 * h * k1q);
    let (k3p, k3q) = replicator_field(sp, p + 0.5 * h * k2p, q + 0.5 * h * k2q);
    let (k4p, k4q) = replicator_field(sp, p + h * k3p, q + h * k3q);
    (
        p + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p),
        q + h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q),
    )
}

/// RK4 integration recording every step.
pub fn integrate_trajectory(
    sp: &SimplifiedPayoffs,
    p0: f64,
    q0: f64,
    dt: f64,
    max_steps: usize,
    tol: f64,
) -> Result<Trajectory> {
    integrate_with(
        sp,
        p0,
        q0,
        &IntegrationOptions {
            dt,
            max_steps,
            tol,
            record_every: 1,
        },
    )
}

pub fn integrate_with(
    sp: &SimplifiedPayoffs,
    p0: f64,
    q0: f64,
    opts: &IntegrationOptions,
) -> Result<Trajectory> {
    if !((0.0..=1.0).contains(&p0) && (0.0..=1.0).contains(&q0)) {
        return Err(GtraError::Config(format!(
            "initial point ({p0}, {q0}) is outside [0,1]^2"
        )));
    }
    if !(opts.dt > 0.0 && opts.dt.is_finite()) {
        return Err(GtraError::Config(format!(
            "dt = {} must be positive",
            opts.dt
        )));
    }
    if opts.max_steps == 0 || opts.record_every == 0 {
        return Err(GtraError::Config(
            "max_steps and record_every must be positive".into(),
        ));
    }

    let stride = opts.record_every;
    let mut points = Vec::with_capacity(opts.max_steps / stride + 2);
    points.push(TrajectoryPoint {
        t: 0.0,
        p: p0,
        q: q0,
    });
    let (mut p, mut q) = (p0, q0);
    let mut clipped = 0.0;
    let mut termination = Termination::MaxSteps;
    let mut steps = 0;

    for step in 1..=opts.max_steps {
        let (dp, dq) = replicator_field(sp, p, q);
        if dp.hypot(dq) < opts.tol {
            termination = Termination::Converged;
            break;
        }
        let (np, nq) = rk4_step(sp, p, q, opts.dt);
        if !(np.is_finite() && nq.is_finite()) {
            return Err(GtraError::Numeric(format!(
                "non-finite state at step {step}"
            )));
        }
        let (cp, cq) = (np.clamp(0.0, 1.0), nq.clamp(0.0, 1.0));
        clipped += (np - cp).abs() + (nq - cq).abs();
        p = cp;
        q = cq;
        steps = step;
        if step % stride == 0 || step == opts.max_steps {
            points.push(TrajectoryPoint {
                t: step as f64 * opts.dt,
                p,
                q,
            });
        }
    }
    if steps % stride != 0 && points.last().map(|x| x.t) != Some(steps as f64 * opts.dt) {
        points.push(TrajectoryPoint {
            t: steps as f64 * opts.dt,
            p,
            q,
        });
    }

    Ok(Trajectory {
        points,
        dt: opts.dt,
        terminated_early: termination == Termination::Converged,
        termination,
        steps,
        clipped,
    })
}

/// Trajectories from the interior lattice `{k/(grid+1)}²`, `k = 1..=grid`,
/// in row-major order (outer index over `p`).
pub fn phase_portrait(
    sp: &SimplifiedPayoffs,
    grid: usize,
    dt: f64,
    max_steps: usize,
) -> Result<Vec<Trajectory>> {
    phase_portrait_with(
        sp,
        grid,
        &IntegrationOptions {
            dt,
            max_steps,
            ..IntegrationOptions::default()
        },
    )
}

pub fn phase_portrait_with(
    sp: &SimplifiedPayoffs,
    grid: usize,
    opts: &IntegrationOptions,
) -> Result<Vec<Trajectory>> {
    use rayon::prelude::*;
    if grid < 2 {
        return Err(GtraError::Config(format!(
            "phase portrait grid must be >= 2, got {grid}"
        )));
    }
    let coord = |k: usize| (k + 1) as f64 / (grid + 1) as f64;
    (0..grid * grid)
        .into_par_iter()
        .map(|idx| integrate_with(sp, coord(idx / grid), coord(idx % grid), opts))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn sample_sp() -> SimplifiedPayoffs {
        reduce_payoffs(&TargetParams::new(1, 2.0, 1.0, 0.3, 0.5), 0.8)
    }

    #[test]
    fn reduced_payoffs() {
        let sp = sample_sp();
        assert_abs_diff_eq!(sp.a, -0.9, epsilon = 1e-12);
        assert_abs_diff_eq!(sp.b, 0.1, epsilon = 1e-12);
        assert_abs_diff_eq!(sp.c, 1.5, epsilon = 1e-12);
        assert_abs_diff_eq!(sp.d, -2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sp.f, -0.3, epsilon = 1e-12);
        assert_eq!(
            reduce_payoffs(&TargetParams::new(1, 2.0, 1.0, 0.3, 2.0), 0.8).c,
            0.0
        );
        assert_eq!(
            reduce_payoffs(&TargetParams::new(1, 2.0, 1.0, 0.0, 2.0), 0.8).f,
            0.0
        );
    }

    #[test]
    fn field_at_centre() {
        let (dp, dq) = replicator_field(&sample_sp(), 0.5, 0.5);
        assert_abs_diff_eq!(dp, 0.075, epsilon = 1e-12);
        assert_abs_diff_eq!(dq, 0.225, epsilon = 1e-12);
    }

    #[test]
    fn equilibrium_closed_form() {
        let (p, q) = interior_equilibrium(&sample_sp()).unwrap();
        assert_abs_diff_eq!(p, 0.125, epsilon = 1e-12);
        assert_abs_diff_eq!(q, 0.625, epsilon = 1e-12);
        let (dp, dq) = replicator_field(&sample_sp(), p, q);
        assert!(dp.abs() < 1e-12 && dq.abs() < 1e-12);
    }

    #[test]
    fn equilibrium_absent_cases() {
        let free = SimplifiedPayoffs {
            f: 0.0,
            ..sample_sp()
        };
        assert_eq!(interior_equilibrium(&free), None);
        let dominant = SimplifiedPayoffs {
            a: 0.4,
            c: 1.0,
            ..sample_sp()
        };
        assert_eq!(interior_equilibrium(&dominant), None);
        let flat = SimplifiedPayoffs {
            a: 1.0,
            c: 1.0,
            ..sample_sp()
        };
        assert_eq!(interior_equilibrium(&flat), None);
    }

    #[test]
    fn corner_is_fixed() {
        let tr = integrate_trajectory(&sample_sp(), 0.0, 0.0, 1e-3, 100, 0.0).unwrap();
        assert!(tr.points.iter().all(|x| x.p == 0.0 && x.q == 0.0));
        let tr = integrate_trajectory(&sample_sp(), 0.0, 0.0, 1e-3, 100, 1e-8).unwrap();
        assert!(tr.terminated_early);
        assert_eq!(tr.steps, 0);
    }

    #[test]
    fn equilibrium_start_stays_put() {
        let sp = sample_sp();
        let tr = integrate_trajectory(&sp, 0.125, 0.625, 1e-3, 10_000, 0.0).unwrap();
        for x in &tr.points {
            assert!((x.p - 0.125).abs() < 1e-6 && (x.q - 0.625).abs() < 1e-6);
        }
    }

    #[test]
    fn first_step_follows_field() {
        let sp = sample_sp();
        let tr = integrate_trajectory(&sp, 0.5, 0.5, 1e-3, 1, 0.0).unwrap();
        let x = tr.points[1];
        let (dp, dq) = ((x.p - 0.5) / 1e-3, (x.q - 0.5) / 1e-3);
        assert!(dp > 0.0 && dq > 0.0);
        assert_abs_diff_eq!(dp, 0.075, epsilon = 1e-3);
        assert_abs_diff_eq!(dq, 0.225, epsilon = 1e-3);
    }

    #[test]
    fn rk4_is_fourth_order() {
        let sp = sample_sp();
        let (p0, q0) = (0.5, 0.5);
        let step_error = |h: f64| {
            let (p, q) = rk4_step(&sp, p0, q0, h);
            let mut r = (p0, q0);
            for _ in 0..10 {
                r = rk4_step(&sp, r.0, r.1, h / 10.0);
            }
            (p - r.0).hypot(q - r.1)
        };
        let h = 0.4;
        let ratio = step_error(h) / step_error(h / 2.0);
        assert!(ratio >= 12.0, "ratio {ratio}");
    }

    #[test]
    fn record_stride_keeps_final_state() {
        let tr = integrate_with(
            &sample_sp(),
            0.3,
            0.3,
            &IntegrationOptions {
                dt: 1e-2,
                max_steps: 105,
                tol: 0.0,
                record_every: 10,
            },
        )
        .unwrap();
        assert_eq!(tr.points.len(), 12);
        assert_abs_diff_eq!(tr.last().t, 1.05, epsilon = 1e-12);
        assert_eq!(tr.termination, Termination::MaxSteps);
    }

    #[test]
    fn bad_inputs() {
        assert!(integrate_trajectory(&sample_sp(), 1.5, 0.5, 1e-3, 10, 1e-8).is_err());
        assert!(integrate_trajectory(&sample_sp(), 0.5, 0.5, 0.0, 10, 1e-8).is_err());
        assert!(phase_portrait(&sample_sp(), 1, 1e-3, 10).is_err());
    }

    #[test]
    fn portrait_lattice() {
        let sp = sample_sp();
        let tol = DEFAULT_TOL;
        let trs = phase_portrait(&sp, 2, 1e-2, 2_000).unwrap();
        assert_eq!(trs.len(), 4);
        let starts: Vec<(f64, f64)> = trs.iter().map(|t| (t.points[0].p, t.points[0].q)).collect();
        let (a, b) = (1.0 / 3.0, 2.0 / 3.0);
        assert_eq!(starts, vec![(a, a), (a, b), (b, a), (b, b)]);
        for tr in &trs {
            assert!(tr
                .points
                .iter()
                .all(|x| (0.0..=1.0).contains(&x.p) && (0.0..=1.0).contains(&x.q)));
            let end = tr.last();
            let (dp, dq) = replicator_field(&sp, end.p, end.q);
            assert!(dp.hypot(dq) < 10.0 * tol || tr.steps == 2_000);
        }
    }

    proptest! {
        #[test]
        fn boundaries_are_invariant(a in -5.0f64..5.0, b in -5.0f64..5.0, c in -5.0f64..5.0,
                                    d in -5.0f64..5.0, f in -5.0f64..5.0, x in 0.0f64..=1.0) {
            let sp = SimplifiedPayoffs { a, b, c, d, f };
            prop_assert_eq!(replicator_field(&sp, 0.0, x).0, 0.0);
            prop_assert_eq!(replicator_field(&sp, 1.0, x).0, 0.0);
            prop_assert_eq!(replicator_field(&sp, x, 0.0).1, 0.0);
            prop_assert_eq!(replicator_field(&sp, x, 1.0).1, 0.0);
        }

        #[test]
        fn reduction_matches_payoff_matrix(r in 0.0f64..10.0, pen in 0.0f64..10.0, cm in 0.0f64..2.0,
                                            ca in 0.0f64..2.0, alpha in 0.0f64..=1.0) {
            let t = TargetParams::new(1, r, pen, cm, ca);
            let sp = reduce_payoffs(&t, alpha);
            let cells = [
                ((true, true), (sp.a, sp.b)),
                ((true, false), (sp.c, sp.d)),
                ((false, true), (0.0, sp.f)),
                ((false, false), (0.0, 0.0)),
            ];
            for ((att, def), (ea, ed)) in cells {
                let (pa, pd) = payoff_cell(&t, att, def, alpha);
                prop_assert!((pa - ea).abs() <= 1e-12 && (pd - ed).abs() <= 1e-12);
            }
            prop_assert!(sp.d <= 0.0 && sp.f <= 0.0);
        }
    }
}
