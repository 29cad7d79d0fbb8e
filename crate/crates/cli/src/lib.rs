//! Command-line front end for `qsl-core`: flag parsing, validation, sweep
//! orchestration and CSV output.

pub mod args;
mod commands;
pub mod config;
pub mod table;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};

use thiserror::Error;

pub use args::parse_args;
pub use commands::{VALIDATION_LAMBDAS, VALIDATION_OMEGAS, VALIDATION_THRESHOLD};
pub use config::{parse_config_line, Command, RunConfig};

/// Environment variable that sets the worker thread count.
pub const THREADS_ENV: &str = "QSL_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid value for {flag}: {message}")]
    Usage { flag: String, message: String },
    #[error("numerical failure: {0}")]
    Numerical(qsl_core::Error),
    #[error("oracle check failed: max error {max_error:e} is not below {threshold:e}")]
    ValidationFailed { max_error: f64, threshold: f64 },
    #[error("cannot write output: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage { .. } => EXIT_USAGE,
            CliError::Numerical(_) | CliError::ValidationFailed { .. } => EXIT_NUMERICAL,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<config::FlagError> for CliError {
    fn from(e: config::FlagError) -> Self {
        CliError::Usage { flag: e.flag.to_string(), message: e.message }
    }
}

impl From<qsl_core::Error> for CliError {
    fn from(e: qsl_core::Error) -> Self {
        match e {
            // Validation should have caught these; name the flag anyway.
            qsl_core::Error::InvalidParameter { name, reason } => CliError::Usage {
                flag: format!("--{}", name.replace('_', "-")),
                message: reason,
            },
            other => CliError::Numerical(other),
        }
    }
}

/// Validates `config`, runs it and writes the CSV to `out`.
///
/// Nothing is written unless the computation succeeds, except for a failing
/// `validate` run, whose table is written before the error is returned.
pub fn run<W: Write>(config: &RunConfig, out: &mut W) -> Result<(), CliError> {
    config.validate()?;
    let (table, passed) = commands::execute(config)?;
    table.write_csv(config, out)?;
    out.flush()?;
    if passed {
        Ok(())
    } else {
        let max_error = table
            .rows
            .iter()
            .filter_map(|r| match r.last() {
                Some(table::Cell::Num(x)) => Some(*x),
                _ => None,
            })
            .fold(0.0, f64::max);
        Err(CliError::ValidationFailed { max_error, threshold: VALIDATION_THRESHOLD })
    }
}

/// Runs `config` on a dedicated pool of `threads` workers (`None`: rayon's
/// default). Output does not depend on the thread count.
pub fn run_with_threads<W: Write + Send>(
    config: &RunConfig,
    threads: Option<usize>,
    out: &mut W,
) -> Result<(), CliError> {
    let Some(n) = threads else {
        return run(config, out);
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| CliError::Usage { flag: THREADS_ENV.into(), message: e.to_string() })?;
    pool.install(|| run(config, out))
}

/// Reads the thread count from `QSL_THREADS`-style text.
pub fn parse_threads(value: Option<&str>) -> Result<Option<usize>, CliError> {
    match value {
        None => Ok(None),
        Some(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Usage {
                flag: THREADS_ENV.into(),
                message: format!("expected a positive integer, got `{v}`"),
            }),
        },
    }
}

/// Whole-process behaviour: parse `args`, run, report. Returns the exit code.
pub fn main_with<I, T>(args: I, threads_env: Option<&str>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match parse_args(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{rendered}");
            } else {
                let _ = write!(stderr, "{rendered}");
            }
            return code;
        }
    };
    let result = parse_threads(threads_env).and_then(|threads| {
        config.validate()?;
        match &config.output {
            Some(path) => {
                let file = File::create(path).map_err(|e| CliError::Usage {
                    flag: "--output".into(),
                    message: format!("{path}: {e}"),
                })?;
                let mut w = BufWriter::new(file);
                run_with_threads(&config, threads, &mut w)
            }
            None => {
                let mut buf = Vec::new();
                let r = run_with_threads(&config, threads, &mut buf);
                stdout.write_all(&buf)?;
                r
            }
        }
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "qsl: {e}");
            e.exit_code()
        }
    }
}
