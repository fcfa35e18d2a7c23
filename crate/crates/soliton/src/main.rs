use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use soliton::commands::{
    cmd_herglotz, cmd_kdv, cmd_potential, cmd_spectra, cmd_validate, cmd_verify, GridSpec,
    HerglotzMode, SpectraMode,
};
use soliton::report::{Level, Tolerances};
use soliton::CliError;

/// Reflectionless potentials and KdV solitons from spectral data.
///
/// Exit codes: 0 success, 1 verification failure, 2 invalid data or
/// arguments, 3 missing file, 4 parse error, 5 write error.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
#[command(allow_negative_numbers = true)]
struct Grid {
    #[arg(long, default_value_t = -10.0)]
    xmin: f64,
    #[arg(long, default_value_t = 10.0)]
    xmax: f64,
    /// Number of samples, including both ends.
    #[arg(short, long, default_value_t = 401)]
    n: usize,
}

impl From<&Grid> for GridSpec {
    fn from(g: &Grid) -> Self {
        GridSpec {
            xmin: g.xmin,
            xmax: g.xmax,
            n: g.n,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a spectral record.
    Validate { file: PathBuf },
    /// Sample Q and q on a grid.
    #[command(allow_negative_numbers = true)]
    Potential {
        file: PathBuf,
        #[command(flatten)]
        grid: Grid,
        /// Output file; stdout when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check the data against closed-form identities and, at level full,
    /// the scattering oracle.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Level::Full)]
        level: Level,
        #[command(flatten)]
        tol: Tolerances,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Write KdV frames frame_0000.csv, … with rows x,u.
    #[command(allow_negative_numbers = true)]
    Kdv {
        file: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        t0: f64,
        #[arg(long, default_value_t = 1.0)]
        t1: f64,
        #[arg(long, default_value_t = 11)]
        frames: usize,
        #[command(flatten)]
        grid: Grid,
        #[arg(long, default_value = "frames")]
        outdir: PathBuf,
    },
    /// Convert between norming constants and signed Dirichlet parameters.
    Spectra {
        #[arg(value_enum)]
        mode: SpectraMode,
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Convert between a Herglotz measure and its zeros and poles.
    Herglotz {
        #[arg(value_enum)]
        mode: HerglotzMode,
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Validate { file } => {
            let r = cmd_validate(&file)?;
            println!("{}: valid, {} bound states", file.display(), r.kappa.len());
        }
        Command::Potential { file, grid, out } => {
            cmd_potential(&file, (&grid).into(), out.as_deref())?;
        }
        Command::Verify {
            file,
            level,
            tol,
            out,
        } => {
            cmd_verify(&file, level, &tol, out.as_deref())?;
        }
        Command::Kdv {
            file,
            t0,
            t1,
            frames,
            grid,
            outdir,
        } => {
            let written = cmd_kdv(&file, t0, t1, frames, (&grid).into(), &outdir)?;
            println!("wrote {} frames to {}", written.len(), outdir.display());
        }
        Command::Spectra { mode, file, out } => {
            cmd_spectra(mode, &file, out.as_deref())?;
        }
        Command::Herglotz { mode, file, out } => {
            cmd_herglotz(mode, &file, out.as_deref())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
