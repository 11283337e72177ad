//! Argument definitions and dispatch.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands;
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "sqr", version, about = "Squeezed light in coupled microring add-drop filters")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Through and drop response of a netlist over a wavelength sweep.
    Spectrum(SpectrumArgs),
    /// Quadrature variances and photon statistics of D(α)S(ξ)|0⟩.
    Squeeze(SqueezeArgs),
    /// Gaussian wave-packet density over a displacement grid.
    Wavepacket(WavepacketArgs),
    /// Wigner function of D(α)S(ξ)|0⟩ on a phase-space grid.
    Wigner(WignerArgs),
    /// Squeezing at every resonance of a netlist.
    Report(ReportArgs),
    /// Run the built-in invariant checks.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Sink {
    Through,
    Drop,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// First wavelength, µm.
    #[arg(long, default_value_t = 1.54)]
    pub start: f64,
    /// Last wavelength, µm.
    #[arg(long, default_value_t = 1.56)]
    pub stop: f64,
    #[arg(long, default_value_t = 2000)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct FrameArgs {
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    /// Oscillator angular frequency; ignored when --wavelength-um is given.
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// Set ω = 2πc/λ from a wavelength in µm.
    #[arg(long)]
    pub wavelength_um: Option<f64>,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    /// Real part of the displacement α.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha_im: f64,
    /// Squeeze magnitude r.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub r: f64,
    /// Squeeze angle φ, rad.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi: f64,
    /// Fock dimension; defaults to the smallest that meets the truncation rule.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Proceed even when the dimension is below the truncation rule.
    #[arg(long)]
    pub force: bool,
    #[command(flatten)]
    pub frame: FrameArgs,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    pub netlist: PathBuf,
    #[command(flatten)]
    pub sweep: SweepArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Instead of sweeping, dump the Mason decomposition at this wavelength.
    #[arg(long, value_name = "LAMBDA_UM")]
    pub dump_sfg: Option<f64>,
    /// Output port for --dump-sfg.
    #[arg(long, value_enum, default_value_t = Sink::Through)]
    pub sink: Sink,
}

#[derive(Debug, Args)]
pub struct SqueezeArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct WavepacketArgs {
    /// Amplitude C.
    #[arg(long, default_value_t = 5.0)]
    pub c: f64,
    /// Centre, µm.
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    pub x0: f64,
    /// Width, µm.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub w0: f64,
    /// Carrier wavenumber, µm⁻¹.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub p0: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub x_min: f64,
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    pub x_max: f64,
    #[arg(long, default_value_t = 1001)]
    pub points: usize,
    /// Replace C by the value that makes ∫|Ψ|² dx = 1.
    #[arg(long)]
    pub normalize: bool,
    /// Narrow the width by e^{-r}.
    #[arg(long, allow_negative_numbers = true)]
    pub squeeze_r: Option<f64>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct WignerArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long, default_value_t = 161)]
    pub nx: usize,
    #[arg(long, default_value_t = 161)]
    pub np: usize,
    /// Half-width of the default grid in standard deviations of each quadrature.
    #[arg(long, default_value_t = 6.0)]
    pub sigmas: f64,
    /// Explicit grid bounds; all four replace the default grid.
    #[arg(long, allow_negative_numbers = true, requires_all = ["x_max", "p_min", "p_max"])]
    pub x_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub x_max: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub p_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub p_max: Option<f64>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    pub netlist: PathBuf,
    #[command(flatten)]
    pub sweep: SweepArgs,
    /// Pump power, W.
    #[arg(long, default_value_t = 0.05)]
    pub pump_power: f64,
    /// Nonlinear parameter γ, W⁻¹ m⁻¹.
    #[arg(long, default_value_t = 100.0)]
    pub gamma: f64,
    #[command(flatten)]
    pub frame: FrameArgs,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Random graphs in the Mason check.
    #[arg(long, default_value_t = 1000)]
    pub seeds: u64,
}

/// Runs one command. Primary output goes to `--output` or `out`;
/// diagnostics go to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Spectrum(a) => commands::spectrum(&a, out, err),
        Command::Squeeze(a) => commands::squeeze(&a, out),
        Command::Wavepacket(a) => commands::wavepacket(&a, out),
        Command::Wigner(a) => commands::wigner(&a, out, err),
        Command::Report(a) => commands::report(&a, out, err),
        Command::Verify(a) => commands::verify(&a, out),
    }
}
