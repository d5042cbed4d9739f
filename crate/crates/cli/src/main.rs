//! `sips`: spectra, oracle verification, algebra checks and SO(2,1)
//! representation queries for shape-invariant potentials.
//!
//! Exit codes: 0 success, 1 failed verification or consistency check,
//! 2 usage or validation error.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{FileConfig, FlagValues, Format, Route, RunConfig};
use crate::error::CliError;

#[derive(Parser)]
#[command(name = "sips", version, about = "Shape-invariant potentials: SUSY-QM and SO(2,1) potential algebra")]
struct Cli {
    /// Key-value (TOML) file mirroring the flags; flags win on conflict
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct RunArgs {
    /// Catalog model id (see `sips list`)
    #[arg(long)]
    model: Option<String>,

    /// Parameters as comma-separated key=value, e.g. a=3,B=1
    #[arg(long, allow_hyphen_values = true)]
    params: Option<String>,

    /// Grid as min:max:n (default -20:20:4001, or $SIPS_DEFAULT_GRID)
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,

    /// Tolerance for oracle comparisons
    #[arg(long)]
    tol: Option<f64>,

    /// Output format
    #[arg(long, value_enum)]
    format: Option<Format>,

    /// Output file (written atomically); stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn flags(self) -> FlagValues {
        FlagValues {
            model: self.model,
            params: self.params,
            grid: self.grid,
            tol: self.tol,
            format: self.format,
            out: self.out,
            ..Default::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// List catalog models
    List {
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bound-state spectrum by shape invariance and/or the SO(2,1) algebra
    Spectrum {
        #[command(flatten)]
        run: RunArgs,
        /// Number of levels (capped at the bound-state count)
        #[arg(long)]
        levels: Option<usize>,
        #[arg(long, value_enum)]
        route: Option<Route>,
        /// J3 sector for the algebra route (default a + 1/2)
        #[arg(long, allow_hyphen_values = true)]
        m: Option<f64>,
    },
    /// Check shape invariance and compare spectra with the finite-difference oracle
    Verify {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        levels: Option<usize>,
    },
    /// Ladder-built eigenfunction psi_n
    Wavefunction {
        #[command(flatten)]
        run: RunArgs,
        /// Level index
        #[arg(long)]
        n: Option<usize>,
    },
    /// Potential-algebra checks
    Algebra {
        #[command(subcommand)]
        command: AlgebraCommand,
    },
    /// SO(2,1) unitary representations
    Reps {
        #[command(subcommand)]
        command: RepsCommand,
    },
}

#[derive(Subcommand)]
enum AlgebraCommand {
    /// Residuals of the commutation relations on one sector
    Check {
        #[command(flatten)]
        run: RunArgs,
        /// J3 eigenvalue of the sector
        #[arg(long, allow_hyphen_values = true)]
        m: Option<f64>,
        /// Restrict to one test function
        #[arg(long, value_enum)]
        test_function: Option<TestFunctionArg>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TestFunctionArg {
    Gaussian,
    OddGaussian,
    ShiftedGaussian,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum RepClassArg {
    #[value(name = "D_plus", alias = "d-plus")]
    DPlus,
    #[value(name = "D_minus", alias = "d-minus")]
    DMinus,
    #[value(name = "D_s", alias = "d-s")]
    DS,
    #[value(name = "D_p", alias = "d-p")]
    DP,
}

#[derive(Subcommand)]
enum RepsCommand {
    /// Classify (j, m0) against the unirep table
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        j: f64,
        #[arg(long, allow_hyphen_values = true)]
        m0: f64,
        /// Imaginary part of j; selects the principal series check
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<f64>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// List the first weights of a multiplet with its ladder coefficients
    Enumerate {
        #[arg(long, value_enum)]
        class: RepClassArg,
        #[arg(long, allow_hyphen_values = true)]
        j: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        m0: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<f64>,
        #[arg(long, default_value_t = 5)]
        count: usize,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// CSV raster (j, m, region) of the allowed (j, m) areas
    RegionGrid {
        /// j lattice as min:max:step
        #[arg(long, allow_hyphen_values = true)]
        j: String,
        /// m lattice as min:max:step
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn resolve(config: &Option<PathBuf>, flags: FlagValues) -> Result<RunConfig, CliError> {
    let file = config.as_deref().map(FileConfig::load).transpose()?;
    RunConfig::resolve(flags, file)
}

fn run(cli: Cli) -> Result<commands::Outcome, CliError> {
    use sips_core::algebra::TestFunction;
    match cli.command {
        Command::List { format, out } => {
            let cfg = resolve(&cli.config, FlagValues { format, out, ..Default::default() })?;
            commands::list(&cfg)
        }
        Command::Spectrum { run, levels, route, m } => {
            let cfg = resolve(&cli.config, FlagValues { levels, route, m, ..run.flags() })?;
            commands::spectrum(&cfg)
        }
        Command::Verify { run, levels } => {
            let cfg = resolve(&cli.config, FlagValues { levels, ..run.flags() })?;
            commands::verify(&cfg)
        }
        Command::Wavefunction { run, n } => {
            let cfg = resolve(&cli.config, FlagValues { n, ..run.flags() })?;
            commands::wavefunction(&cfg)
        }
        Command::Algebra { command: AlgebraCommand::Check { run, m, test_function } } => {
            let cfg = resolve(&cli.config, FlagValues { m, ..run.flags() })?;
            let selected = match test_function {
                None => TestFunction::ALL.to_vec(),
                Some(TestFunctionArg::Gaussian) => vec![TestFunction::Gaussian],
                Some(TestFunctionArg::OddGaussian) => vec![TestFunction::OddGaussian],
                Some(TestFunctionArg::ShiftedGaussian) => vec![TestFunction::ShiftedGaussian],
            };
            commands::algebra_check(&cfg, &selected)
        }
        Command::Reps { command } => match command {
            RepsCommand::Classify { j, m0, beta, format } => commands::reps_classify(j, m0, beta, format),
            RepsCommand::Enumerate { class, j, m0, beta, count, format } => {
                commands::reps_enumerate(class, j, m0, beta, count, format)
            }
            RepsCommand::RegionGrid { j, m, out } => commands::reps_region_grid(&j, &m, out.as_deref()),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => ExitCode::from(outcome.code),
        Err(e) => {
            eprintln!("sips: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
