//! Scenario files, reports and the `persuade` subcommands.

mod commands;
mod report;
mod scenario;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::{
    plot_csv, read_scenario, solve_report, sweep_csv, verify_report, CliError, Job, Overrides, SweepAxis, SweepSpec,
    EXIT_DOMAIN, EXIT_OK, EXIT_PARSE, EXIT_VERIFY_FAIL,
};
pub use report::{Diagnostics, OracleBlock, SolveReport, VerifyReport, VerifyStatus};
pub use scenario::{OracleSpec, Prior, PriorSpec, ScenarioFile, DEFAULT_ORACLE_N, DEFAULT_TOL};

use crate::oracle::TieRule;

#[derive(Debug, Parser)]
#[command(name = "persuade", version, about = "Maxmin persuasion solvers and game oracle")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Scenario file (JSON).
    pub scenario: PathBuf,
    /// Tie rule, overriding the scenario.
    #[arg(long)]
    pub tie: Option<TieRule>,
    /// Oracle grid size, overriding the scenario.
    #[arg(long = "oracle-n")]
    pub oracle_n: Option<usize>,
    /// Solver and oracle tolerance, overriding the scenario.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Write output here instead of stdout.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a scenario and print the report as JSON.
    Solve(Common),
    /// Compare the solver with the discretized game oracle.
    Verify(Common),
    /// Solve over a range of one parameter and print CSV.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        axis: SweepAxis,
        #[arg(long, allow_negative_numbers = true)]
        min: f64,
        #[arg(long, allow_negative_numbers = true)]
        max: f64,
        #[arg(long)]
        steps: usize,
        /// Add an oracle value column.
        #[arg(long)]
        oracle: bool,
    },
    /// Print prior, solution CDF and its envelope on a grid as CSV.
    Plotdata {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 512)]
        points: usize,
    },
}

impl Common {
    fn job(&self) -> Result<Job, CliError> {
        let s = read_scenario(&self.scenario)?;
        Job::new(s, &Overrides { tie: self.tie, oracle_n: self.oracle_n, tol: self.tol })
    }
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let common = match &cli.command {
        Command::Solve(c) | Command::Verify(c) => c,
        Command::Sweep { common, .. } | Command::Plotdata { common, .. } => common,
    };
    let outcome = common.job().and_then(|job| match &cli.command {
        Command::Solve(_) => {
            let r = solve_report(&job)?;
            for w in &r.warnings {
                log::warn!("{w}");
            }
            Ok((r.to_json() + "\n", EXIT_OK))
        }
        Command::Verify(_) => {
            let r = verify_report(&job)?;
            let code = if r.status == VerifyStatus::Fail { EXIT_VERIFY_FAIL } else { EXIT_OK };
            Ok((r.to_text(), code))
        }
        Command::Sweep { axis, min, max, steps, oracle, .. } => {
            let spec = SweepSpec { axis: *axis, min: *min, max: *max, steps: *steps, with_oracle: *oracle };
            Ok((sweep_csv(&job, &spec)?, EXIT_OK))
        }
        Command::Plotdata { points, .. } => Ok((plot_csv(&job, *points)?, EXIT_OK)),
    });
    match outcome {
        Ok((text, code)) => {
            let written = match &common.output {
                Some(path) => std::fs::write(path, text.as_bytes()),
                None => std::io::stdout().lock().write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: cannot write output: {e}");
                return EXIT_PARSE;
            }
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}
