//! Resolved run configuration and its one-line `# config:` echo.
//!
//! The echo is `key=value` pairs separated by spaces. Values escape `\`,
//! space, tab, CR and LF with a backslash, so any output path survives.
//! Floats are written with Rust's shortest round-trip formatting, which makes
//! `parse_config_line(&config.to_config_line())` reproduce the config exactly.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub const CONFIG_PREFIX: &str = "# config: ";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Command {
    Evolve,
    Qslt,
    Nonmarkov,
    CriticalOmega,
    SweepOmega,
    SweepWindow,
    Validate,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Evolve,
        Command::Qslt,
        Command::Nonmarkov,
        Command::CriticalOmega,
        Command::SweepOmega,
        Command::SweepWindow,
        Command::Validate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Evolve => "evolve",
            Command::Qslt => "qslt",
            Command::Nonmarkov => "nonmarkov",
            Command::CriticalOmega => "critical-omega",
            Command::SweepOmega => "sweep-omega",
            Command::SweepWindow => "sweep-window",
            Command::Validate => "validate",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command `{s}`"))
    }
}

/// Everything a run depends on, with defaults already filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub lambda: f64,
    pub drive_strength: f64,
    pub qubit_freq: f64,
    pub spectral_center: f64,
    pub tau_d: f64,
    pub t_end: f64,
    pub points: usize,
    pub omega_min: f64,
    pub omega_max: f64,
    pub omegas: Vec<f64>,
    pub tau_min: f64,
    pub tau_max: f64,
    pub samples: usize,
    pub seed: u64,
    pub resolution: f64,
    pub cap: f64,
    pub tol: f64,
    /// `None` writes to standard output.
    pub output: Option<String>,
}

impl RunConfig {
    /// Defaults for `command`: resonant qubit, `λ = 3`, `τ_D = 1`.
    pub fn new(command: Command) -> Self {
        Self {
            command,
            lambda: 3.0,
            drive_strength: 0.0,
            qubit_freq: 0.0,
            spectral_center: 0.0,
            tau_d: 1.0,
            t_end: 10.0,
            points: default_points(command, 10.0),
            omega_min: 0.0,
            omega_max: 20.0,
            omegas: vec![0.0, 2.0, 4.0],
            tau_min: 0.0,
            tau_max: 8.0,
            samples: qsl_core::distinguishability::DEFAULT_SAMPLES,
            seed: 1,
            resolution: qsl_core::transition::DEFAULT_RESOLUTION,
            cap: qsl_core::transition::DEFAULT_DRIVE_CAP,
            tol: qsl_core::oracle::DEFAULT_TOLERANCE,
            output: None,
        }
    }

    /// Checks every numeric flag; the error names the offending one.
    pub fn validate(&self) -> Result<(), FlagError> {
        fn bad(flag: &'static str, message: impl Into<String>) -> Result<(), FlagError> {
            Err(FlagError { flag, message: message.into() })
        }
        let positive = |flag, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                bad(flag, format!("must be a finite number > 0, got {v}"))
            }
        };
        let non_negative = |flag, v: f64| {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                bad(flag, format!("must be a finite number >= 0, got {v}"))
            }
        };
        let finite = |flag, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                bad(flag, format!("must be finite, got {v}"))
            }
        };

        positive("--lambda", self.lambda)?;
        non_negative("--drive-strength", self.drive_strength)?;
        finite("--qubit-freq", self.qubit_freq)?;
        finite("--spectral-center", self.spectral_center)?;
        positive("--tau-d", self.tau_d)?;
        let resonant_only = matches!(
            self.command,
            Command::CriticalOmega | Command::SweepOmega | Command::SweepWindow
        );
        if resonant_only && self.qubit_freq != self.spectral_center {
            return bad(
                "--qubit-freq",
                format!("{} assumes resonance; must equal --spectral-center", self.command),
            );
        }
        positive("--t-end", self.t_end)?;
        if self.points == 0 {
            return bad("--points", "need at least one point");
        }
        if self.command == Command::Evolve && self.points < 2 {
            return bad("--points", "evolve needs at least two points");
        }
        non_negative("--omega-min", self.omega_min)?;
        non_negative("--omega-max", self.omega_max)?;
        if self.omega_max < self.omega_min {
            return bad("--omega-max", format!("must be >= --omega-min ({})", self.omega_min));
        }
        if self.omegas.is_empty() {
            return bad("--omegas", "need at least one driving strength");
        }
        for &o in &self.omegas {
            non_negative("--omegas", o)?;
        }
        non_negative("--tau-min", self.tau_min)?;
        non_negative("--tau-max", self.tau_max)?;
        if self.tau_max < self.tau_min {
            return bad("--tau-max", format!("must be >= --tau-min ({})", self.tau_min));
        }
        if self.samples == 0 {
            return bad("--samples", "need at least one sample");
        }
        positive("--resolution", self.resolution)?;
        positive("--cap", self.cap)?;
        positive("--tol", self.tol)?;
        match self.output.as_deref() {
            Some("") => return bad("--output", "empty path"),
            // `-` is how the echo spells standard output.
            Some("-") => return bad("--output", "`-` is standard output; leave the flag unset"),
            _ => {}
        }
        Ok(())
    }

    pub fn to_config_line(&self) -> String {
        let omegas: Vec<String> = self.omegas.iter().map(|&o| float(o)).collect();
        let pairs: [(&str, String); 19] = [
            ("command", self.command.to_string()),
            ("lambda", float(self.lambda)),
            ("drive_strength", float(self.drive_strength)),
            ("qubit_freq", float(self.qubit_freq)),
            ("spectral_center", float(self.spectral_center)),
            ("tau_d", float(self.tau_d)),
            ("t_end", float(self.t_end)),
            ("points", self.points.to_string()),
            ("omega_min", float(self.omega_min)),
            ("omega_max", float(self.omega_max)),
            ("omegas", omegas.join(",")),
            ("tau_min", float(self.tau_min)),
            ("tau_max", float(self.tau_max)),
            ("samples", self.samples.to_string()),
            ("seed", self.seed.to_string()),
            ("resolution", float(self.resolution)),
            ("cap", float(self.cap)),
            ("tol", float(self.tol)),
            ("output", self.output.clone().unwrap_or_else(|| "-".into())),
        ];
        let body: Vec<String> = pairs
            .iter()
            .map(|(k, v)| format!("{k}={}", escape(v)))
            .collect();
        format!("{CONFIG_PREFIX}{}", body.join(" "))
    }
}

/// Shortest exact spelling: plain or exponent form, whichever is shorter.
fn float(x: f64) -> String {
    let plain = x.to_string();
    let exp = format!("{x:e}");
    if exp.len() < plain.len() {
        exp
    } else {
        plain
    }
}

/// Point count used when `--points` is not given.
pub fn default_points(command: Command, t_end: f64) -> usize {
    match command {
        Command::Evolve => qsl_core::model::default_point_count(t_end),
        Command::SweepWindow => 1601,
        _ => 400,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid value for {flag}: {message}")]
pub struct FlagError {
    pub flag: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigLineError {
    #[error("line does not start with `{CONFIG_PREFIX}`")]
    MissingPrefix,
    #[error("dangling or unknown escape at byte {0}")]
    BadEscape(usize),
    #[error("token `{0}` is not key=value")]
    NotAPair(String),
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("key `{0}` given twice")]
    DuplicateKey(String),
    #[error("missing key `{0}`")]
    MissingKey(&'static str),
    #[error("bad value for `{key}`: {message}")]
    BadValue { key: &'static str, message: String },
    #[error(transparent)]
    Invalid(#[from] FlagError),
}

const KEYS: [&str; 19] = [
    "command",
    "lambda",
    "drive_strength",
    "qubit_freq",
    "spectral_center",
    "tau_d",
    "t_end",
    "points",
    "omega_min",
    "omega_max",
    "omegas",
    "tau_min",
    "tau_max",
    "samples",
    "seed",
    "resolution",
    "cap",
    "tol",
    "output",
];

fn escape(value: &str) -> String {
    let mut out = String::with_capacity(value.len());
    for c in value.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            ' ' => out.push_str("\\ "),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

/// Splits on unescaped spaces and resolves escapes.
fn tokenize(body: &str) -> Result<Vec<String>, ConfigLineError> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut chars = body.char_indices();
    while let Some((i, c)) = chars.next() {
        match c {
            '\\' => match chars.next() {
                Some((_, '\\')) => current.push('\\'),
                Some((_, ' ')) => current.push(' '),
                Some((_, 't')) => current.push('\t'),
                Some((_, 'n')) => current.push('\n'),
                Some((_, 'r')) => current.push('\r'),
                _ => return Err(ConfigLineError::BadEscape(i)),
            },
            ' ' => {
                if !current.is_empty() {
                    tokens.push(std::mem::take(&mut current));
                }
            }
            c => current.push(c),
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    Ok(tokens)
}

/// Reads a `# config:` line back into the configuration it was written from.
pub fn parse_config_line(line: &str) -> Result<RunConfig, ConfigLineError> {
    let body = line
        .strip_suffix('\n')
        .unwrap_or(line)
        .strip_prefix(CONFIG_PREFIX)
        .ok_or(ConfigLineError::MissingPrefix)?;
    let mut values: HashMap<&'static str, String> = HashMap::new();
    for token in tokenize(body)? {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| ConfigLineError::NotAPair(token.clone()))?;
        let key = KEYS
            .into_iter()
            .find(|k| *k == key)
            .ok_or_else(|| ConfigLineError::UnknownKey(key.to_string()))?;
        if values.insert(key, value.to_string()).is_some() {
            return Err(ConfigLineError::DuplicateKey(key.to_string()));
        }
    }

    let mut take = |key: &'static str| values.remove(key).ok_or(ConfigLineError::MissingKey(key));
    fn parsed<T: FromStr>(key: &'static str, raw: String) -> Result<T, ConfigLineError>
    where
        T::Err: fmt::Display,
    {
        raw.parse()
            .map_err(|e: T::Err| ConfigLineError::BadValue { key, message: e.to_string() })
    }

    let command = take("command")?
        .parse()
        .map_err(|message| ConfigLineError::BadValue { key: "command", message })?;
    let omegas_raw = take("omegas")?;
    let omegas = if omegas_raw.is_empty() {
        Vec::new()
    } else {
        omegas_raw
            .split(',')
            .map(|o| parsed("omegas", o.to_string()))
            .collect::<Result<_, _>>()?
    };
    let config = RunConfig {
        command,
        lambda: parsed("lambda", take("lambda")?)?,
        drive_strength: parsed("drive_strength", take("drive_strength")?)?,
        qubit_freq: parsed("qubit_freq", take("qubit_freq")?)?,
        spectral_center: parsed("spectral_center", take("spectral_center")?)?,
        tau_d: parsed("tau_d", take("tau_d")?)?,
        t_end: parsed("t_end", take("t_end")?)?,
        points: parsed("points", take("points")?)?,
        omega_min: parsed("omega_min", take("omega_min")?)?,
        omega_max: parsed("omega_max", take("omega_max")?)?,
        omegas,
        tau_min: parsed("tau_min", take("tau_min")?)?,
        tau_max: parsed("tau_max", take("tau_max")?)?,
        samples: parsed("samples", take("samples")?)?,
        seed: parsed("seed", take("seed")?)?,
        resolution: parsed("resolution", take("resolution")?)?,
        cap: parsed("cap", take("cap")?)?,
        tol: parsed("tol", take("tol")?)?,
        output: match take("output")? {
            s if s == "-" => None,
            s => Some(s),
        },
    };
    config.validate()?;
    Ok(config)
}
