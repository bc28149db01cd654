//! Batch experiment drivers: configuration, evaluation, CSV/SVG output and
//! run manifests.

mod commands;
pub mod config;
pub mod evaluate;
pub mod manifest;
pub mod svg;
pub mod table;

pub use commands::{
    cmd_compare, cmd_dynamics, cmd_solve, cmd_sweep, compare_plot, phase_plot, sweep_plot,
    COMPARE_HEADER, COMPARE_METRICS, MANIFEST_FILE, SWEEP_HEADER,
};
pub use config::{ExperimentConfig, OutcomeMode, Overrides};
pub use manifest::RunManifest;

use crate::error::{GtraError, Result};

/// Runs `f` on a dedicated rayon pool of `threads` workers, or on the global
/// pool when `None`.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(GtraError::Config("thread count must be positive".into())),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| GtraError::Config(format!("cannot build thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Process exit code for an error: 2 for configuration problems, 3 for
/// numeric or solver failures, 1 for I/O.
pub fn exit_code(e: &GtraError) -> i32 {
    match e {
        GtraError::Config(_) | GtraError::Json(_) | GtraError::Dimension { .. } => 2,
        GtraError::Numeric(_) | GtraError::Capacity(_) | GtraError::DivisionByZero(_) => 3,
        GtraError::Io(_) => 1,
    }
}
