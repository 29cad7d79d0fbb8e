use std::ffi::OsString;

use clap::{Args, Parser, Subcommand};

use crate::config::{default_points, Command, RunConfig};

#[derive(Debug, Parser)]
#[command(
    name = "qsl",
    version,
    about = "Speed limits and non-Markovianity of a driven qubit in a Lorentzian reservoir",
    long_about = "Speed limits and non-Markovianity of a driven qubit in a Lorentzian reservoir.\n\n\
        Every command writes CSV: a `# config:` line echoing the resolved configuration, \
        a header row, then data. Numbers carry 12 significant digits.\n\n\
        Exit status: 0 success, 2 usage or validation error, 3 numerical failure, \
        1 if the output cannot be written.\n\
        QSL_THREADS sets the worker thread count for parallel sweeps."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Amplitude on [0, --t-end]. Columns: t,eps_re,eps_im,population,sigma
    Evolve(Options),
    /// Speed-limit bounds over [0, --tau-d] for the |+> start.
    /// Columns: quantity,value
    Qslt(Options),
    /// BLP measure of the optimal pair and the best of --samples random pairs
    /// drawn with --seed. Columns: quantity,value
    Nonmarkov(Options),
    /// Critical driving strength at which the dynamics inside [0, --tau-d]
    /// turns non-Markovian. Columns: quantity,value
    CriticalOmega(Options),
    /// Sweep of the driving strength over [--omega-min, --omega-max].
    /// Columns: omega,tau_qsl_ratio,blp,pop_deficit
    SweepOmega(Options),
    /// Windowed speed limit from the state at tau to the state at tau + --tau-d,
    /// for each of --omegas and each tau in [--tau-min, --tau-max].
    /// Columns: omega,tau,tau_qsl,tau_qsl_ratio,blp,population
    SweepWindow(Options),
    /// Closed form against the ODE oracle on the built-in grid, t in [0, 10].
    /// Columns: lambda,omega,max_abs_error
    Validate(Options),
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Reservoir spectral width λ
    #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
    pub lambda: f64,
    /// Classical driving strength Ω
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub drive_strength: f64,
    /// Bare qubit frequency ω₀
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub qubit_freq: f64,
    /// Reservoir center frequency ω_c
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub spectral_center: f64,
    /// Driving time τ_D
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub tau_d: f64,
    /// End of the evolve grid
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    pub t_end: f64,
    /// Grid points [default: 2000 per unit time for evolve, 400 for
    /// sweep-omega, 1601 for sweep-window]
    #[arg(long, allow_negative_numbers = true)]
    pub points: Option<usize>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub omega_min: f64,
    #[arg(long, default_value_t = 20.0, allow_negative_numbers = true)]
    pub omega_max: f64,
    /// Comma-separated driving strengths for sweep-window
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 2.0, 4.0], allow_negative_numbers = true)]
    pub omegas: Vec<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub tau_min: f64,
    #[arg(long, default_value_t = 8.0, allow_negative_numbers = true)]
    pub tau_max: f64,
    /// Random state pairs for nonmarkov
    #[arg(long, default_value_t = qsl_core::distinguishability::DEFAULT_SAMPLES, allow_negative_numbers = true)]
    pub samples: usize,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub seed: u64,
    /// Bisection resolution for critical-omega
    #[arg(long, default_value_t = qsl_core::transition::DEFAULT_RESOLUTION, allow_negative_numbers = true)]
    pub resolution: f64,
    /// Largest driving strength critical-omega will try
    #[arg(long, default_value_t = qsl_core::transition::DEFAULT_DRIVE_CAP, allow_negative_numbers = true)]
    pub cap: f64,
    /// ODE tolerance for validate
    #[arg(long, default_value_t = qsl_core::oracle::DEFAULT_TOLERANCE, allow_negative_numbers = true)]
    pub tol: f64,
    /// Output file; standard output when absent or `-`
    #[arg(long, short)]
    pub output: Option<String>,
}

impl Cli {
    pub fn into_config(self) -> RunConfig {
        let (command, o) = match self.command {
            CliCommand::Evolve(o) => (Command::Evolve, o),
            CliCommand::Qslt(o) => (Command::Qslt, o),
            CliCommand::Nonmarkov(o) => (Command::Nonmarkov, o),
            CliCommand::CriticalOmega(o) => (Command::CriticalOmega, o),
            CliCommand::SweepOmega(o) => (Command::SweepOmega, o),
            CliCommand::SweepWindow(o) => (Command::SweepWindow, o),
            CliCommand::Validate(o) => (Command::Validate, o),
        };
        RunConfig {
            command,
            lambda: o.lambda,
            drive_strength: o.drive_strength,
            qubit_freq: o.qubit_freq,
            spectral_center: o.spectral_center,
            tau_d: o.tau_d,
            t_end: o.t_end,
            points: o.points.unwrap_or_else(|| default_points(command, o.t_end)),
            omega_min: o.omega_min,
            omega_max: o.omega_max,
            omegas: o.omegas,
            tau_min: o.tau_min,
            tau_max: o.tau_max,
            samples: o.samples,
            seed: o.seed,
            resolution: o.resolution,
            cap: o.cap,
            tol: o.tol,
            output: o.output.filter(|p| p != "-"),
        }
    }
}

/// Parses argv (program name first) into a resolved, unvalidated config.
pub fn parse_args<I, T>(args: I) -> Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    Ok(Cli::try_parse_from(args)?.into_config())
}
