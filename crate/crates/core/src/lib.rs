//! Cost-aware Stackelberg security resource allocation.
//!
//! A defender spreads a limited budget of protection over `N` targets; a
//! boundedly rational attacker answers with a quantal-response distribution.
//! Both players pay for acting. The crate provides
//!
//! - [`game`]: payoff matrix, utilities, attacker response models;
//! - [`solver`]: the restarted genetic algorithm and a grid oracle;
//! - [`baselines`]: fixed allocation rules used for comparison;
//! - [`metrics`]: outcome sampling, vulnerability, coverage, effectiveness;
//! - [`dynamics`]: single-target replicator dynamics and phase portraits;
//! - [`scenario`]: seeded instance populations and sweep grids;
//! - [`harness`]: experiment drivers writing CSV, SVG and run manifests.

pub mod baselines;
pub mod dynamics;
pub mod error;
pub mod game;
pub mod harness;
pub mod metrics;
pub mod scenario;
pub mod seed;
pub mod solver;

pub use error::{GtraError, Result};
pub use game::{AttackStrategy, DefenseStrategy, GameInstance, TargetParams};
