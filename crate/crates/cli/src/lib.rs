//! Command-line frontend: tangle documents in, deterministic JSON or CSV out.
//!
//! [`run`] does all the work and returns the exit code with the text destined
//! for standard output and standard error, so the binary is a thin shell and
//! the tests can drive every command in-process.

pub mod commands;
pub mod dsl;
pub mod output;
pub mod scan;

use std::ffi::OsString;
use std::fmt;

use clap::{Parser, Subcommand, ValueEnum};
use tl_entangle::EvalPoint;

pub use dsl::{parse_tangle, ParseError, TangleDocument};

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitCode {
    Ok = 0,
    Usage = 1,
    Parse = 2,
    Degenerate = 3,
    Internal = 4,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliError {
    pub code: ExitCode,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { code: ExitCode::Usage, message: message.into() }
    }

    pub fn parse(message: impl Into<String>) -> Self {
        CliError { code: ExitCode::Parse, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<tl_entangle::Error> for CliError {
    fn from(e: tl_entangle::Error) -> Self {
        use tl_entangle::Error::*;
        let code = match e {
            Degenerate(_) | ZeroTensor | Undefined(_) => ExitCode::Degenerate,
            Internal(_) => ExitCode::Internal,
            Domain(_) | Parity(_) | Width(_) | Signature(_) | NotClosed(_) => ExitCode::Parse,
        };
        CliError { code, message: e.to_string() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    /// Rational functions of A.
    Exact,
    /// Complex numbers at --theta or --k.
    Numeric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// An angle in radians; `pi`/`π` multiples such as `0.5pi`, `π/8` or `-pi`
/// are accepted.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim().replace('π', "pi");
    let bad = || format!("'{}' is not an angle (radians, or a multiple of pi such as 0.5pi or pi/8)", s);
    let x = match t.find("pi") {
        None => t.parse::<f64>().map_err(|_| bad())?,
        Some(at) => {
            let coef = t[..at].trim().trim_end_matches('*').trim();
            let c = match coef {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().map_err(|_| bad())?,
            };
            let rest = t[at + 2..].trim();
            let div = match rest {
                "" => 1.0,
                r => match r.strip_prefix('/') {
                    Some(n) => n.trim().parse::<f64>().map_err(|_| bad())?,
                    None => return Err(bad()),
                },
            };
            c * std::f64::consts::PI / div
        }
    };
    if x.is_finite() {
        Ok(x)
    } else {
        Err(bad())
    }
}

#[derive(Debug, Parser)]
#[command(name = "tl-entangle", version, about = "Tangle reduction and entanglement of diagram states")]
pub struct Cli {
    /// Coefficient backend.
    #[arg(long, global = true, value_enum, default_value = "numeric")]
    pub mode: Backend,
    /// Evaluation angle θ with A = exp(iθ).
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_angle, conflicts_with = "k")]
    pub theta: Option<f64>,
    /// Evaluation level k, θ = −π/(2(k+2)).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub k: Option<i64>,
    /// Zero threshold for the 3-tangle and scan minima.
    #[arg(long, global = true, default_value_t = tl_entangle::entanglement::TANGLE_TOL)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bracket of a closed tangle.
    Bracket { file: String },
    /// Crossing-free expansion of a tangle.
    Reduce { file: String },
    /// Amplitudes of a state in the parties' orthonormal frames.
    State { file: String },
    /// Local ranks, factorisation blocks and SLOCC class of a state.
    Classify { file: String },
    /// Entanglement entropy of one party (or a comma-separated group).
    Entropy {
        file: String,
        #[arg(long)]
        party: String,
    },
    /// 3-tangle of a three-qubit state.
    Tangle3 { file: String },
    /// 3-tangle over an angle range, with refined zeros.
    #[command(name = "scan-tangle3")]
    ScanTangle3 {
        file: String,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_angle)]
        theta_min: f64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_angle)]
        theta_max: f64,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
    },
    /// Party-level adjacency matrices.
    Connectome {
        #[command(subcommand)]
        action: ConnectomeCommand,
    },
    /// SU(2) representation data.
    Rep {
        #[command(subcommand)]
        action: RepCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum ConnectomeCommand {
    /// Every connectome up to party relabelling.
    Enumerate {
        #[arg(long)]
        parties: usize,
        #[arg(long, default_value_t = 4)]
        punctures: usize,
    },
    /// Reduce and classify one connectome (inline JSON or a JSON file).
    Classify { connectome: String },
    /// Amplitudes of the canonical representative state.
    State { connectome: String },
}

#[derive(Debug, Subcommand)]
pub enum RepCommand {
    /// Highest-weight vectors of a product of spins.
    Hw {
        /// Comma-separated spins, e.g. 1/2,1/2,1/2.
        #[arg(long)]
        spins: String,
    },
}

/// Global evaluation settings shared by the commands.
#[derive(Clone, Copy, Debug)]
pub struct Settings {
    pub backend: Backend,
    pub point: Option<EvalPoint>,
    pub tol: f64,
    pub format: Format,
}

impl Settings {
    pub fn point(&self) -> Result<EvalPoint, CliError> {
        self.point.ok_or_else(|| CliError::usage("numeric evaluation needs --theta or --k"))
    }

    /// Reject `--mode exact` for commands that only exist numerically.
    pub fn numeric_only(&self, command: &str) -> Result<EvalPoint, CliError> {
        if self.backend == Backend::Exact {
            return Err(CliError::usage(format!(
                "{} is numeric only; exact output exists for bracket and reduce",
                command
            )));
        }
        self.point()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn settings(cli: &Cli) -> Result<Settings, CliError> {
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        return Err(CliError::usage(format!("--tol must be positive, got {}", cli.tol)));
    }
    let point = match (cli.theta, cli.k) {
        (Some(t), _) => Some(EvalPoint::from_theta(t)),
        (None, Some(k)) => Some(EvalPoint::from_level(k).map_err(|e| CliError::usage(e.to_string()))?),
        (None, None) => None,
    };
    Ok(Settings { backend: cli.mode, point, tol: cli.tol, format: cli.format })
}

/// Run one command line (`args[0]` is the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: ExitCode::Usage as i32, stdout: String::new(), stderr: text },
            };
        }
    };
    let result = settings(&cli).and_then(|s| commands::dispatch(&cli.command, &s).map(|r| r.render(s.format)));
    match result {
        Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
        Err(e) => Outcome { code: e.code as i32, stdout: String::new(), stderr: format!("error: {}\n", e.message) },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        let pi = std::f64::consts::PI;
        assert_eq!(parse_angle("0.25").unwrap(), 0.25);
        assert!((parse_angle("0.5π").unwrap() - pi / 2.0).abs() < 1e-15);
        assert!((parse_angle("pi/8").unwrap() - pi / 8.0).abs() < 1e-15);
        assert!((parse_angle("-2*pi").unwrap() + 2.0 * pi).abs() < 1e-15);
        assert!(parse_angle("pie").is_err());
        assert!(parse_angle("x").is_err());
    }

    #[test]
    fn core_errors_map_to_exit_codes() {
        let c = |e: tl_entangle::Error| CliError::from(e).code;
        assert_eq!(c(tl_entangle::Error::Degenerate("x".into())), ExitCode::Degenerate);
        assert_eq!(c(tl_entangle::Error::Internal("x".into())), ExitCode::Internal);
        assert_eq!(c(tl_entangle::Error::NotClosed(2)), ExitCode::Parse);
    }
}
