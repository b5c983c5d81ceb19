//! Command-line front end.
//!
//! Settings are resolved as built-in defaults < `--config` file < flags.
//! Exit codes: 0 success, 1 invalid input, 2 a check failed, 3 the solver
//! aborted.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::{cmd_build, cmd_evolve, cmd_example, cmd_export_plot, cmd_verify, run_suite, SuiteRow};
pub use config::{RunConfig, System, Thresholds};

use crate::error::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_FAIL: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "susy-fp", version, about = "Exactly solvable Fokker-Planck models from asymmetric intertwining")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the model and write model.csv
    Build,
    /// Run every residual and convergence check
    Verify,
    /// Evolve numerically and compare with the analytic solution
    Evolve,
    /// Worked example: omega = x^2 + 2t + B
    Example,
    /// Write a gnuplot script for the CSVs in the output directory
    ExportPlot,
}

#[derive(Debug, Args)]
struct Overrides {
    /// Heat seed: const, poly:B=<v>, exp:k=<v> or sum:(<seed>*<w>+<seed>*<w>...)
    #[arg(long, global = true, allow_hyphen_values = true)]
    seed: Option<String>,
    /// Constant c (V2 = c/2)
    #[arg(long, global = true, allow_hyphen_values = true)]
    c: Option<String>,
    /// Coefficient a of rho1
    #[arg(long, global = true, allow_hyphen_values = true)]
    a: Option<String>,
    /// Coefficient b of rho1 (b != 0 is analytic-only)
    #[arg(long, global = true, allow_hyphen_values = true)]
    b: Option<String>,
    /// Shorthand for --seed poly:B=<v>
    #[arg(long = "B", global = true, allow_hyphen_values = true)]
    big_b: Option<String>,
    /// nx,nt,xmin,xmax,tmin,tmax
    #[arg(long, global = true, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Threshold override name=value (repeatable)
    #[arg(long, global = true)]
    tol: Vec<String>,
    /// Output directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// key = value configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// System for evolve: fp, diffusion or heat
    #[arg(long, global = true)]
    system: Option<String>,
    /// Boundary for evolve: dirichlet_zero or neumann_zero
    #[arg(long, global = true)]
    boundary: Option<String>,
    /// Negative control: perturb a coefficient (g2)
    #[arg(long, global = true, hide = true)]
    corrupt: Option<String>,
}

impl Overrides {
    fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        let flags = [
            ("seed", &self.seed),
            ("B", &self.big_b),
            ("c", &self.c),
            ("a", &self.a),
            ("b", &self.b),
            ("grid", &self.grid),
            ("system", &self.system),
            ("boundary", &self.boundary),
            ("corrupt", &self.corrupt),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                cfg.set(key, v, &format!("--{key}"))?;
            }
        }
        for t in &self.tol {
            cfg.set("tol", t, "--tol")?;
        }
        if let Some(out) = &self.out {
            cfg.out = out.clone();
        }
        Ok(cfg)
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Instability { .. } | Error::LinearSolve { .. } => EXIT_SOLVER,
        _ => EXIT_INVALID,
    }
}

fn verdict(pass: bool) -> i32 {
    if pass {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    let outcome = cli.overrides.resolve().and_then(|cfg| match cli.command {
        Command::Build => cmd_build(&cfg).map(|_| EXIT_OK),
        Command::Verify => cmd_verify(&cfg).map(verdict),
        Command::Evolve => cmd_evolve(&cfg).map(|o| verdict(o.pass)),
        Command::Example => cmd_example(&cfg).map(verdict),
        Command::ExportPlot => cmd_export_plot(&cfg).map(|_| EXIT_OK),
    });
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
