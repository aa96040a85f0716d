use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use specrad_cli::commands;

/// Certified two-sided brackets for the s-joint spectral radius of linear
/// cocycles over subshifts of finite type.
#[derive(Parser)]
#[command(name = "specrad", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certified bracket per s value, with witnesses.
    Radii {
        /// Cocycle spec file (JSON).
        file: PathBuf,
        /// Comma-separated list of s exponents.
        #[arg(long, value_delimiter = ',', required = true)]
        s: Vec<f64>,
        /// Maximal product depth n for the upper estimate.
        #[arg(long)]
        depth: usize,
        /// Maximal orbit period K for the lower estimate.
        #[arg(long)]
        orbits: usize,
        /// Run even outside the desk-scale envelope.
        #[arg(long)]
        force: bool,
    },
    /// Gap table along increasing (depth, orbit-period) pairs.
    BergerWang {
        file: PathBuf,
        #[arg(long)]
        s: f64,
        /// Comma-separated strictly increasing depths.
        #[arg(long, value_delimiter = ',', required = true)]
        depths: Vec<usize>,
        /// Comma-separated strictly increasing orbit periods (paired with
        /// --depths).
        #[arg(long, value_delimiter = ',', required = true)]
        orbits: Vec<usize>,
        #[arg(long)]
        force: bool,
    },
    /// Brackets of A + eps B for decreasing eps, against the bracket of A.
    Continuity {
        file: PathBuf,
        /// Spec file of the direction cocycle B (same alphabet, transition,
        /// window and dim).
        #[arg(long)]
        direction: PathBuf,
        #[arg(long)]
        s: f64,
        /// Comma-separated strictly decreasing positive eps values.
        #[arg(long, value_delimiter = ',', required = true)]
        eps: Vec<f64>,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, default_value_t = 6)]
        orbits: usize,
        #[arg(long)]
        force: bool,
    },
    /// Periodic orbits with their lower-bound contributions, best first.
    Orbits {
        file: PathBuf,
        /// Enumerate all cyclically admissible words up to this period.
        #[arg(long = "max-period")]
        max_period: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        s: Vec<f64>,
        /// Drop cycles that repeat a strictly shorter cycle.
        #[arg(long)]
        primitive: bool,
        #[arg(long)]
        force: bool,
    },
    /// rho_s of finite sections of the file's compact model.
    Truncate {
        file: PathBuf,
        /// Comma-separated strictly increasing section ranks.
        #[arg(long, value_delimiter = ',', required = true)]
        ranks: Vec<usize>,
        #[arg(long)]
        s: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Radii {
            file,
            s,
            depth,
            orbits,
            force,
        } => commands::cmd_radii(file, s, *depth, *orbits, *force),
        Command::BergerWang {
            file,
            s,
            depths,
            orbits,
            force,
        } => commands::cmd_berger_wang(file, *s, depths, orbits, *force),
        Command::Continuity {
            file,
            direction,
            s,
            eps,
            depth,
            orbits,
            force,
        } => commands::cmd_continuity(file, direction, *s, eps, *depth, *orbits, *force),
        Command::Orbits {
            file,
            max_period,
            s,
            primitive,
            force,
        } => commands::cmd_orbits(file, *max_period, s, *primitive, *force),
        Command::Truncate { file, ranks, s } => commands::cmd_truncate(file, ranks, *s),
    };
    match result {
        Ok(csv) => {
            print!("{csv}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
