//! `sosgap` command line.
//!
//! Exit codes: 0 on success, 2 on usage errors, 1 on any other failure. On
//! failure a single JSON line `{"error": kind, "message": text}` is written
//! to stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::certificate::{certify, PositivityMode, ReportJson};
use crate::error::{Error, Result};
use crate::estimators::{
    avg_estimate, lp_estimate, max_estimate, scan_estimate_with, ScanOptions, ScanStrategy, DEFAULT_EXHAUSTIVE_LIMIT,
};
use crate::models::{generate, MatrixFile, ModelParams, Noise, NoisyMatrix};
use crate::sdp::{extreme_eigenvalues, solve, SdpStatus, SolverOptions};
use crate::sos_program::{assemble_basic, assemble_level};

#[derive(Debug, Parser)]
#[command(
    name = "sosgap",
    version,
    about = "Planted submatrix models, scan and SoS estimators, pseudo-moment certificates"
)]
struct Cli {
    /// Seed for `generate`; overrides `base_seed` for `experiment`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a planted instance and write it as matrix JSON.
    Generate(GenerateArgs),
    /// Run one estimator on a matrix file and print its value.
    Estimate(EstimateArgs),
    /// Build and verify the expansivity certificate; prints a JSON report.
    Certify(CertifyArgs),
    /// Solve the basic or level-ℓ semidefinite relaxation; prints JSON.
    Solve(SolveArgs),
    /// Run an experiment config and write its CSV.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelArg {
    Submatrix,
    Sbm,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum NoiseArg {
    Gaussian,
    Rademacher,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long, value_enum, default_value = "submatrix")]
    model: ModelArg,
    /// Dimension d.
    #[arg(long)]
    d: usize,
    /// Planted support size s*.
    #[arg(long)]
    s: usize,
    /// Signal strength β* (edge probability inside the block for sbm).
    #[arg(long, default_value_t = 0.0)]
    beta: f64,
    /// Edge probability outside the block (sbm only).
    #[arg(long)]
    beta_tilde: Option<f64>,
    /// Noise law (submatrix only).
    #[arg(long, value_enum, default_value = "gaussian")]
    noise: NoiseArg,
    /// Gaussian standard deviation; 0 gives the noiseless mode.
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// Two-point magnitude for rademacher noise.
    #[arg(long, default_value_t = 1.0)]
    nu: f64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EstimatorArg {
    Scan,
    Avg,
    Max,
    Lp,
    SosBasic,
    SosLevel,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StrategyArg {
    Exhaustive,
    Bnb,
}

#[derive(Debug, Args)]
struct SolverArgs {
    /// Stopping tolerance on the scaled primal and dual residuals.
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
    /// Iteration cap; reaching it is reported as max_iter_reached.
    #[arg(long, default_value_t = 100_000)]
    max_iter: usize,
    /// Initial ADMM penalty.
    #[arg(long, default_value_t = 1.0)]
    step: f64,
}

impl SolverArgs {
    fn options(&self) -> SolverOptions {
        SolverOptions { tol: self.tol, max_iter: self.max_iter, step: self.step, ..SolverOptions::default() }
    }
}

#[derive(Debug, Args)]
struct EstimateArgs {
    /// Matrix JSON file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Estimator to run.
    #[arg(long, value_enum)]
    estimator: EstimatorArg,
    /// Support size s*.
    #[arg(long)]
    s: usize,
    /// Level for `sos-level`.
    #[arg(long, default_value_t = 1)]
    level: usize,
    /// Scan search strategy.
    #[arg(long, value_enum, default_value = "bnb")]
    strategy: StrategyArg,
    /// Largest number of subsets the exhaustive scan may visit.
    #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_LIMIT)]
    exhaustive_limit: u64,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Edge iff X_ij > 0.
    Sign,
    /// Edge iff X_ij = 1 (binary input).
    Binary,
}

#[derive(Debug, Args)]
struct CertifyArgs {
    /// Matrix JSON file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Hierarchy level ℓ.
    #[arg(long)]
    level: usize,
    /// Support size s*.
    #[arg(long)]
    s: usize,
    /// Which entries count as edges of the positivity graph.
    #[arg(long, value_enum, default_value = "sign")]
    mode: ModeArg,
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Matrix JSON file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Hierarchy level ℓ.
    #[arg(long, conflicts_with = "basic", required_unless_present = "basic")]
    level: Option<usize>,
    /// Solve the (d+1)x(d+1) basic relaxation instead of a level-ℓ program.
    #[arg(long)]
    basic: bool,
    /// Support size s*.
    #[arg(long)]
    s: usize,
    /// Also write the assembled program as JSON.
    #[arg(long)]
    dump_program: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    /// Experiment config JSON.
    #[arg(long)]
    config: PathBuf,
    /// CSV output path; defaults to the config's `output`.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read_matrix(path: &Path) -> Result<NoisyMatrix> {
    MatrixFile::read(path)?.matrix()
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Generate(a) => {
            let seed = cli.seed.unwrap_or(0);
            let params = match a.model {
                ModelArg::Sbm => {
                    let beta_tilde = a.beta_tilde.unwrap_or(a.beta);
                    ModelParams::sbm(a.d, a.s, a.beta, beta_tilde, seed)
                }
                ModelArg::Submatrix => {
                    let noise = match a.noise {
                        NoiseArg::Gaussian => Noise::Gaussian { sigma: a.sigma },
                        NoiseArg::Rademacher => Noise::Rademacher { nu: a.nu },
                    };
                    ModelParams::submatrix(a.d, a.s, a.beta, noise, seed)
                }
            };
            let file = MatrixFile::from_instance(&generate(&params)?);
            match a.out {
                Some(path) => file.write(&path)?,
                None => writeln!(out, "{}", file.to_json()?)?,
            }
        }
        Command::Estimate(a) => {
            let x = read_matrix(&a.input)?;
            let value = match a.estimator {
                EstimatorArg::Scan => {
                    let strategy = match a.strategy {
                        StrategyArg::Exhaustive => ScanStrategy::Exhaustive,
                        StrategyArg::Bnb => ScanStrategy::BranchAndBound,
                    };
                    let opts = ScanOptions { strategy, exhaustive_limit: a.exhaustive_limit };
                    scan_estimate_with(&x, a.s, &opts)?.value
                }
                EstimatorArg::Avg => avg_estimate(&x, a.s)?,
                EstimatorArg::Max => max_estimate(&x),
                EstimatorArg::Lp => lp_estimate(&x, a.s)?,
                EstimatorArg::SosBasic => solve_value(&assemble_basic(&x, a.s)?, &a.solver.options())?,
                EstimatorArg::SosLevel => solve_value(&assemble_level(&x, a.s, a.level)?, &a.solver.options())?,
            };
            writeln!(out, "{value}")?;
        }
        Command::Certify(a) => {
            let x = read_matrix(&a.input)?;
            let mode = match a.mode {
                ModeArg::Sign => PositivityMode::SignPositive,
                ModeArg::Binary => PositivityMode::BinaryOne,
            };
            let certified = certify(&x, mode, a.s, a.level)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&ReportJson::from(&certified.report))?)?;
        }
        Command::Solve(a) => {
            let x = read_matrix(&a.input)?;
            let program = match a.level {
                Some(level) if !a.basic => assemble_level(&x, a.s, level)?,
                _ => assemble_basic(&x, a.s)?,
            };
            if let Some(path) = &a.dump_program {
                std::fs::write(path, serde_json::to_string(&program.dump())? + "\n")?;
            }
            let sol = solve(&program, &a.solver.options())?;
            let (lo, hi) = extreme_eigenvalues(&sol.matrix)?;
            let report = json!({
                "status": match sol.status { SdpStatus::Optimal => "optimal", SdpStatus::MaxIterReached => "max_iter_reached" },
                "value": sol.value,
                "iterations": sol.iterations,
                "primal_residual": sol.primal_residual,
                "dual_residual": sol.dual_residual,
                "min_eigenvalue": lo,
                "max_eigenvalue": hi,
                "dim": program.dim,
                "var_count": program.var_count,
                "constraints": program.constraints.len(),
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
        }
        Command::Experiment(a) => {
            let table = super::run_config_file(&a.config, a.out.as_deref(), cli.seed)?;
            writeln!(out, "{} rows", table.rows.len())?;
        }
    }
    Ok(())
}

fn solve_value(program: &crate::sos_program::SosProgram, opts: &SolverOptions) -> Result<f64> {
    let sol = solve(program, opts)?;
    match sol.status {
        SdpStatus::Optimal => Ok(sol.value),
        SdpStatus::MaxIterReached => Err(Error::Format(format!(
            "solver stopped at max_iter = {} with primal residual {:e}",
            sol.iterations, sol.primal_residual
        ))),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn cli_main<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
                let line = json!({"error": "Usage", "message": e.kind().to_string()});
                let _ = writeln!(err, "{line}");
            }
            return code;
        }
    };
    match run(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let line = json!({"error": e.kind(), "message": e.to_string()});
            let _ = writeln!(err, "{line}");
            1
        }
    }
}
