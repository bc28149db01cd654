use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gtra::error::{GtraError, Result};
use gtra::harness::{self, ExperimentConfig, Overrides};
use gtra::scenario::{parse_values, SweepAxis};

#[derive(Parser)]
#[command(
    name = "gtra",
    version,
    about = "Resource allocation games against a quantal-response attacker"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON experiment configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory [env: GTRA_OUT_DIR].
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the configured master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads [env: GTRA_THREADS].
    #[arg(long)]
    threads: Option<usize>,
    /// Full-size instance counts and N above the desk limit.
    #[arg(long)]
    paper_scale: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance for the defender's optimal allocation.
    Solve(Common),
    /// Compare all allocation strategies over a population of instances.
    Compare(Common),
    /// Repeat the comparison along one parameter axis.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// N, gamma, alpha, lambda or budget_fraction.
        #[arg(long)]
        axis: String,
        /// `start:end:step` or a comma-separated list.
        #[arg(long)]
        values: String,
    },
    /// Replicator dynamics of the single-target game.
    Dynamics(Common),
}

fn env_or<T: std::str::FromStr>(flag: Option<T>, var: &str) -> Result<Option<T>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var(var) {
        Ok(v) => v
            .parse()
            .map(Some)
            .map_err(|_| GtraError::Config(format!("{var}={v:?} is not valid"))),
        Err(_) => Ok(None),
    }
}

fn run(cli: Cli, command_line: &str) -> Result<Vec<String>> {
    let common = match &cli.command {
        Command::Solve(c) | Command::Compare(c) | Command::Dynamics(c) => c,
        Command::Sweep { common, .. } => common,
    };
    let overrides = Overrides {
        seed: common.seed,
        paper_scale: common.paper_scale,
    };
    let cfg = ExperimentConfig::load(&common.config, overrides)?;
    let out = env_or(common.out.clone(), "GTRA_OUT_DIR")?.ok_or_else(|| {
        GtraError::Config("no output directory: pass --out or set GTRA_OUT_DIR".into())
    })?;
    let threads = env_or(common.threads, "GTRA_THREADS")?;
    let sweep = match &cli.command {
        Command::Sweep { axis, values, .. } => {
            Some((axis.parse::<SweepAxis>()?, parse_values(values)?))
        }
        _ => None,
    };
    harness::with_threads(threads, || match &cli.command {
        Command::Solve(_) => harness::cmd_solve(&cfg, &out, command_line),
        Command::Compare(_) => harness::cmd_compare(&cfg, &out, command_line),
        Command::Dynamics(_) => harness::cmd_dynamics(&cfg, &out, command_line),
        Command::Sweep { .. } => {
            let (axis, values) = sweep.as_ref().expect("parsed above");
            harness::cmd_sweep(&cfg, *axis, values, &out, command_line)
        }
    })?
}

fn main() -> ExitCode {
    let command_line = std::env::args().collect::<Vec<_>>().join(" ");
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli, &command_line) {
        Ok(files) => {
            for f in files {
                println!("{f}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("gtra: {e}");
            ExitCode::from(harness::exit_code(&e) as u8)
        }
    }
}
