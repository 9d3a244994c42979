//! `dirac-su11`: spectra, wavefunctions, coherent states, matrix elements,
//! uncertainty reports and verification from a JSON configuration.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid configuration or
//! arguments, 3 numerical degeneracy (ω̄ = 0, non-convergence, unresolved grid).

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dirac_su11::Error;

use crate::output::Format;

#[derive(Parser, Debug)]
#[command(name = "dirac-su11", version, about = "su(1,1) Dirac oscillator toolkit")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Configuration JSON, or a run manifest whose config is reused.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: Format,
    /// Output file; the manifest goes to OUT.manifest.json. Defaults to stdout
    /// with the manifest on stderr.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, env = "SU11_GRID_POINTS", default_value_t = 2048)]
    pub grid_points: usize,
    /// Multiplies the default outer radius.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub rmax_scale: f64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Closed-form energies E± for n_r = 0..=n_max.
    Spectrum {
        #[arg(long, default_value_t = 5)]
        n_max: usize,
        #[arg(long, value_enum, default_value = "both")]
        branch: commands::BranchFilter,
    },
    /// Energies over a grid of Aharonov–Casher phases with periodicity checks.
    SweepPhase {
        #[arg(long, default_value_t = 0)]
        n_r: usize,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        phi_min: f64,
        #[arg(long, default_value_t = 4.0 * std::f64::consts::PI, allow_negative_numbers = true)]
        phi_max: f64,
        #[arg(long, default_value_t = 41)]
        points: usize,
    },
    /// Sturmian radial function φ_{n_r}(ρ) on the grid.
    Wavefunction {
        #[arg(long, default_value_t = 0)]
        n_r: usize,
    },
    /// Perelomov coherent state φ(ρ, ξ, t).
    Coherent {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        xi_re: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        xi_im: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        time: f64,
        #[arg(long, value_enum, default_value = "closed-form")]
        method: commands::CoherentMethod,
    },
    /// Schrödinger uncertainty relation in the coherent state D(z)|k,0⟩.
    Uncertainty {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        z_re: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        z_im: f64,
    },
    /// ⟨m|ρ²|n⟩ or ⟨m|ρ d/dρ|n⟩ for m, n ≤ n_max.
    MatrixElements {
        #[arg(long, value_enum, default_value = "rho2")]
        operator: commands::MatrixOperator,
        #[arg(long, default_value_t = 7)]
        n_max: usize,
        #[arg(long, value_enum, default_value = "algebra")]
        method: commands::MatrixMethod,
    },
    /// Runs the verification suite and reports per-check residuals.
    Verify {
        #[arg(long, value_enum, default_value = "full")]
        level: commands::Level,
    },
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.is::<commands::VerificationFailed>() {
        return 1;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::DegenerateFrequency { .. }) | Some(Error::NonConvergence(_)) | Some(Error::GridResolution(_)) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args: Vec<String> = std::env::args().skip(1).collect();
    match commands::run(&cli.common, &cli.command, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
