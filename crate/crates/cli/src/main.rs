//! `tdesim`: figure data, scenario reports and a small circuit interpreter.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "tdesim", version, about = "Time-displaced entanglement simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Numerical tolerance for the reported checks.
    #[arg(long, global = true, default_value_t = 1e-12, allow_negative_numbers = true)]
    tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Basis {
    Computational,
    Diagonal,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct InputArgs {
    /// Weight of |1> in the real input qubit.
    #[arg(long, conflicts_with = "alpha_sq", allow_negative_numbers = true)]
    beta_sq: Option<f64>,

    /// Weight of |0> in the real input qubit.
    #[arg(long, allow_negative_numbers = true)]
    alpha_sq: Option<f64>,
}

impl InputArgs {
    pub fn beta_sq(&self, default: f64) -> f64 {
        match (self.beta_sq, self.alpha_sq) {
            (Some(b), _) => b,
            (None, Some(a)) => 1.0 - a,
            (None, None) => default,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Input and output trace distances over the beta^2 grid.
    Fig2 {
        #[arg(long, default_value_t = 101)]
        steps: usize,
    },
    /// Entropies for a vacuum/qubit mixture over the beta^2 grid.
    Fig3 {
        #[arg(long, default_value_t = 101)]
        steps: usize,
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        pvac: f64,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        tau: i64,
    },
    /// Parse and run a circuit file.
    Circuit {
        program: PathBuf,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Bob's output for each of Alice's outcomes.
    Nosignal {
        #[arg(long, value_enum, default_value_t = Basis::Computational)]
        basis: Basis,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        tau: i64,
    },
    /// Displaced Bell pair at its measurement cycle.
    Decohere {
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        tau: i64,
    },
    /// Undo the displaced circuit and compare with the input.
    Reverse {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        tau: i64,
    },
    /// Proper against improper mixture of the two basis states.
    Propriety {
        #[arg(long, value_enum, default_value_t = Basis::Computational)]
        basis: Basis,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        tau: i64,
    },
    /// Output populations of a circuit over the beta^2 grid.
    Sweep {
        /// Circuit file; the displaced two-CNOT circuit when omitted.
        #[arg(long)]
        program: Option<PathBuf>,
        #[arg(long, default_value_t = 101)]
        steps: usize,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        tau: i64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if !(cli.tolerance > 0.0 && cli.tolerance.is_finite()) {
        anyhow::bail!("--tolerance must be positive, got {}", cli.tolerance);
    }
    let fmt = cli.format;
    let text = match cli.command {
        Command::Fig2 { steps } => commands::fig2(steps, fmt)?,
        Command::Fig3 { steps, pvac, tau } => commands::fig3(steps, pvac, tau, cli.tolerance, fmt)?,
        Command::Circuit { program, input } => commands::circuit(&program, &input, fmt)?,
        Command::Nosignal { basis, tau } => commands::nosignal(basis, tau, cli.tolerance, fmt)?,
        Command::Decohere { tau } => commands::decohere(tau, fmt)?,
        Command::Reverse { input, tau } => commands::reverse(&input, tau, fmt)?,
        Command::Propriety { basis, tau } => commands::propriety(basis, tau, fmt)?,
        Command::Sweep {
            program,
            steps,
            tau,
        } => commands::sweep(program.as_deref(), steps, tau, fmt)?,
    };
    output::emit(&text, cli.out.as_deref())
}
