//! Attack/protection outcome tallies and the evaluation metrics built on them.
//!
//! Each target in each trial falls in one of four cells:
//!
//! | attacked | protected | cell |
//! |----------|-----------|------|
//! | yes      | yes       | AP   |
//! | yes      | no        | AF   |
//! | no       | yes       | NP   |
//! | no       | no        | NF   |
//!
//! A protected target always repels an attack, so AF counts the successful
//! attacks and AP the failed ones.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_len, GtraError, Result};
use crate::game::{AttackStrategy, DefenseStrategy, GameInstance};
use crate::seed;

const TRIALS_PER_CHUNK: usize = 1024;

/// Anything that can report the four outcome cells.
pub trait Tally {
    /// `(ap, af, np, nf)` as totals over all trials.
    fn cells(&self) -> [f64; 4];
    fn trials(&self) -> f64;
    fn targets(&self) -> f64;
}

/// Monte Carlo counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct OutcomeCounts {
    pub ap: u64,
    pub af: u64,
    pub np: u64,
    pub nf: u64,
    pub trials: u64,
    pub n: u64,
}

impl OutcomeCounts {
    fn merge(mut self, o: OutcomeCounts) -> OutcomeCounts {
        self.ap += o.ap;
        self.af += o.af;
        self.np += o.np;
        self.nf += o.nf;
        self.trials += o.trials;
        self.n = self.n.max(o.n);
        self
    }

    pub fn total(&self) -> u64 {
        self.ap + self.af + self.np + self.nf
    }
}

impl Tally for OutcomeCounts {
    fn cells(&self) -> [f64; 4] {
        [
            self.ap as f64,
            self.af as f64,
            self.np as f64,
            self.nf as f64,
        ]
    }
    fn trials(&self) -> f64 {
        self.trials as f64
    }
    fn targets(&self) -> f64 {
        self.n as f64
    }
}

/// Noise-free analogue of [`OutcomeCounts`]: the expected cell counts of one
/// trial, `ap = Σ p_i q_i` and so on.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ExpectedOutcomes {
    pub ap: f64,
    pub af: f64,
    pub np: f64,
    pub nf: f64,
    pub n: usize,
}

impl Tally for ExpectedOutcomes {
    fn cells(&self) -> [f64; 4] {
        [self.ap, self.af, self.np, self.nf]
    }
    fn trials(&self) -> f64 {
        1.0
    }
    fn targets(&self) -> f64 {
        self.n as f64
    }
}

/// Draws attack and protection events independently per target and trial.
///
/// Each target-trial consumes exactly two uniforms (attack, then protect)
/// from a chunk-local stream whether or not the event fires, so two runs with
/// the same seed see the same draws even when `p` or `q` differ.
pub fn sample_outcomes(
    g: &GameInstance,
    p: &AttackStrategy,
    q: &DefenseStrategy,
    trials: usize,
    stream_seed: u64,
) -> Result<OutcomeCounts> {
    check_len("attack strategy", g.n(), p.len())?;
    check_len("defense strategy", g.n(), q.len())?;
    if trials == 0 {
        return Err(GtraError::Config("trials must be positive".into()));
    }
    let chunks = trials.div_ceil(TRIALS_PER_CHUNK);
    let counts = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let len = TRIALS_PER_CHUNK.min(trials - c * TRIALS_PER_CHUNK);
            let mut rng = seed::rng(seed::mix(stream_seed, c as u64));
            let mut out = OutcomeCounts {
                trials: len as u64,
                n: g.n() as u64,
                ..Default::default()
            };
            for _ in 0..len {
                for (&pi, &qi) in p.p.iter().zip(&q.q) {
                    let attacked = rng.random::<f64>() < pi;
                    let protected = rng.random::<f64>() < qi;
                    match (attacked, protected) {
                        (true, true) => out.ap += 1,
                        (true, false) => out.af += 1,
                        (false, true) => out.np += 1,
                        (false, false) => out.nf += 1,
                    }
                }
            }
            out
        })
        .collect::<Vec<_>>();
    Ok(counts
        .into_iter()
        .fold(OutcomeCounts::default(), OutcomeCounts::merge))
}

pub fn expected_outcomes(
    g: &GameInstance,
    p: &AttackStrategy,
    q: &DefenseStrategy,
) -> Result<ExpectedOutcomes> {
    check_len("attack strategy", g.n(), p.len())?;
    check_len("defense strategy", g.n(), q.len())?;
    let mut e = ExpectedOutcomes {
        n: g.n(),
        ..Default::default()
    };
    for (&pi, &qi) in p.p.iter().zip(&q.q) {
        e.ap += pi * qi;
        e.af += pi * (1.0 - qi);
        e.np += (1.0 - pi) * qi;
        e.nf += (1.0 - pi) * (1.0 - qi);
    }
    Ok(e)
}

/// `(success − failure) / (success + failure)` with success = AF and
/// failure = AP; −1 when no attack happened.
pub fn vulnerability<T: Tally>(c: &T) -> f64 {
    let [ap, af, _, _] = c.cells();
    let attacks = af + ap;
    if attacks == 0.0 {
        -1.0
    } else {
        (af - ap) / attacks
    }
}

/// Fraction of target-trials that were not successfully attacked.
pub fn coverage<T: Tally>(c: &T) -> f64 {
    let [ap, _, np, nf] = c.cells();
    (ap + np + nf) / (c.trials() * c.targets())
}

pub fn consumed_resources(g: &GameInstance, q: &DefenseStrategy) -> Result<f64> {
    check_len("defense strategy", g.n(), q.len())?;
    Ok(g.consumption(&q.q))
}

/// Covered targets per trial divided by consumed resources.
///
/// Zero resources with positive coverage returns `f64::INFINITY`; check
/// with [`is_unbounded`].
pub fn effectiveness<T: Tally>(c: &T, resources: f64) -> f64 {
    let [ap, _, np, nf] = c.cells();
    let covered = (ap + np + nf) / c.trials();
    if resources > 0.0 {
        covered / resources
    } else if covered == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

pub fn is_unbounded(effectiveness: f64) -> bool {
    effectiveness == f64::INFINITY
}

/// Relative difference `(a − b) / b`.
pub fn growth_rate(a: f64, b: f64) -> Result<f64> {
    if b == 0.0 {
        return Err(GtraError::DivisionByZero("growth rate baseline is zero"));
    }
    Ok((a - b) / b)
}
