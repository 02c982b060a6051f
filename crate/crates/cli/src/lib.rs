//! Command-line driver for the `polarization` crate.
//!
//! Exit codes: 0 success, 1 identity violation (a reproducer is printed),
//! 2 usage or input error, 3 the requested field cannot do what was asked.

use std::fmt;
use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};

use polarization::{Error, FieldDescriptor};

pub mod bench;
pub mod expand;
pub mod files;
pub mod verify;

pub use expand::Style;
pub use verify::EngineKind;

#[derive(Debug, Parser)]
#[command(name = "polarize", version, about = "Exact polarization identities, Wick moments and inclusion-exclusion")]
pub struct Cli {
    /// Master seed for every randomized command.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a recovery identity with symbolic arguments.
    Expand {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Style::Subset)]
        style: Style,
    },
    /// Random campaign checking every engine against n! u(x1,...,xn).
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        /// `rational`, or `gf:P` for a prime P.
        #[arg(long, default_value = "rational")]
        field: String,
        /// Comma-separated engines, or `all`.
        #[arg(long = "method", value_delimiter = ',', default_value = "all")]
        methods: Vec<MethodArg>,
    },
    /// Exact Gaussian moment from a covariance file, optionally with a
    /// Monte Carlo estimate.
    Wick {
        #[arg(long)]
        cov: String,
        #[arg(long, value_delimiter = ',', required = true)]
        indices: Vec<usize>,
        /// Number of Monte Carlo samples.
        #[arg(long)]
        mc: Option<usize>,
    },
    /// Both sides of inclusion-exclusion for a set-system file.
    Inclexcl {
        #[arg(long)]
        sets: String,
    },
    /// Naive versus Gray-code subset enumeration timings.
    Bench {
        #[arg(long, default_value_t = 4)]
        n_min: usize,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
        #[arg(long, default_value_t = 4)]
        d: usize,
        #[arg(long, default_value_t = 3)]
        repetitions: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    All,
    Operator,
    Subset,
    Gray,
    Offset,
    Signed,
    Coefficient,
    Derivative,
    Recover,
}

/// Engines named by the `--method` list, deduplicated, in canonical order.
pub fn resolve_methods(args: &[MethodArg]) -> Vec<EngineKind> {
    let mut out: Vec<EngineKind> = Vec::new();
    for arg in args {
        let kinds: &[EngineKind] = match arg {
            MethodArg::All => EngineKind::DEFAULT,
            MethodArg::Operator => &[EngineKind::Operator],
            MethodArg::Subset => &[EngineKind::Subset],
            MethodArg::Gray => &[EngineKind::Gray],
            MethodArg::Offset => &[EngineKind::Offset],
            MethodArg::Signed => &[EngineKind::Signed],
            MethodArg::Coefficient => &[EngineKind::Coefficient],
            MethodArg::Derivative => &[EngineKind::Derivative],
            MethodArg::Recover => &[EngineKind::Recover],
        };
        out.extend(kinds.iter().copied().filter(|k| !out.contains(k)).collect::<Vec<_>>());
    }
    out.sort();
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Usage(String),
    Capability(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Capability(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Capability(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::CharacteristicDividesFactorial { .. } | Error::CharacteristicTwo | Error::FloatNotAllowed => {
                CliError::Capability(e.to_string())
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

/// Moduli with a compiled-in `Gf<P>`.
pub const SUPPORTED_PRIMES: [u64; 31] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 65537,
    998_244_353, 1_000_000_007, 2_147_483_647, 2_305_843_009_213_693_951,
];

/// Runs `$body` with `$F` bound to the field type matching a
/// [`FieldDescriptor`]; `$body` must evaluate to `Result<_, CliError>`.
#[macro_export]
macro_rules! with_field {
    ($field:expr, $F:ident => $body:expr) => {
        $crate::with_field!(@primes $field, $F => $body;
            2 3 5 7 11 13 17 19 23 29 31 37 41 43 47 53 59 61 67 71 73 79 83 89 97 101 65537
            998244353 1000000007 2147483647 2305843009213693951)
    };
    (@primes $field:expr, $F:ident => $body:expr; $($p:literal)*) => {
        match $field {
            ::polarization::FieldDescriptor::Rational => {
                type $F = ::polarization::Rational;
                $body
            }
            $(::polarization::FieldDescriptor::Gfp($p) => {
                type $F = ::polarization::Gf<$p>;
                $body
            })*
            other => Err($crate::unsupported_field(other)),
        }
    };
}

pub fn unsupported_field(field: FieldDescriptor) -> CliError {
    let list: Vec<String> = SUPPORTED_PRIMES.iter().map(u64::to_string).collect();
    CliError::Capability(format!("{field} is not available; supported: rational and GF(p) for p in {}", list.join(", ")))
}

pub fn parse_field(text: &str) -> Result<FieldDescriptor, CliError> {
    let field: FieldDescriptor = text.parse()?;
    if field == FieldDescriptor::Float {
        return Err(CliError::Capability("float is not an exact field".into()));
    }
    Ok(field)
}

/// What a run prints and how it exits.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    pub fn ok(stdout: String) -> Self {
        Outcome { stdout, stderr: String::new(), code: 0 }
    }
}

pub fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { stdout: String::new(), stderr: text, code: 2 }
            } else {
                Outcome::ok(text)
            };
        }
    };
    let echo: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match dispatch(&cli, &echo.join(" ")) {
        Ok(outcome) => outcome,
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: e.code() },
    }
}

fn dispatch(cli: &Cli, echo: &str) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Expand { n, style } => expand::cmd_expand(*n, *style, cli.json).map(Outcome::ok),
        Command::Verify { n, d, trials, field, methods } => {
            let cfg = verify::VerifyConfig {
                n: *n,
                d: *d,
                trials: *trials,
                field: parse_field(field)?,
                engines: resolve_methods(methods),
                seed: cli.seed,
                command: echo.to_string(),
            };
            verify::cmd_verify(&cfg, cli.json)
        }
        Command::Wick { cov, indices, mc } => files::cmd_wick(Path::new(cov), indices, *mc, cli.seed, cli.json),
        Command::Inclexcl { sets } => files::cmd_inclexcl(Path::new(sets), cli.json),
        Command::Bench { n_min, n_max, d, repetitions } => {
            bench::cmd_bench(*n_min, *n_max, *d, *repetitions, cli.seed, cli.json).map(Outcome::ok)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_lists() {
        assert_eq!(resolve_methods(&[MethodArg::All]), EngineKind::DEFAULT.to_vec());
        assert_eq!(
            resolve_methods(&[MethodArg::Gray, MethodArg::Subset, MethodArg::Gray]),
            vec![EngineKind::Subset, EngineKind::Gray]
        );
        assert!(resolve_methods(&[MethodArg::All, MethodArg::Recover]).contains(&EngineKind::Recover));
    }

    #[test]
    fn field_parsing() {
        assert_eq!(parse_field("rational"), Ok(FieldDescriptor::Rational));
        assert_eq!(parse_field("gf:7"), Ok(FieldDescriptor::Gfp(7)));
        assert_eq!(parse_field("gf:8").unwrap_err().code(), 2);
        assert_eq!(parse_field("reals").unwrap_err().code(), 2);
    }

    #[test]
    fn supported_primes_are_prime() {
        assert!(SUPPORTED_PRIMES.iter().all(|&p| polarization::scalar::is_prime(p)));
        let r: Result<u64, CliError> = with_field!(FieldDescriptor::Gfp(65537), F => Ok(<F as polarization::Field>::characteristic()));
        assert_eq!(r, Ok(65537));
        let r: Result<u64, CliError> = with_field!(FieldDescriptor::Gfp(103), F => Ok(<F as polarization::Field>::characteristic()));
        assert_eq!(r.unwrap_err().code(), 3);
    }

    #[test]
    fn usage_errors_exit_two() {
        let out = run(["polarize", "expand"]);
        assert_eq!(out.code, 2);
        assert!(out.stderr.contains("--n"));
        let out = run(["polarize", "--help"]);
        assert_eq!(out.code, 0);
        assert!(out.stdout.contains("verify"));
    }
}
