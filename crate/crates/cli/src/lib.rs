//! The `parcon` command line: argument parsing, input files, and the four
//! subcommands. [`run`] does everything except touching the process, so the
//! same code path serves the binary and in-process tests.

mod commands;
mod fuzz;
mod input;
mod oracle;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use parcon_core::connectivity::SubgroupFamily;

pub use fuzz::{FuzzFailure, FuzzSummary, LemmaFuzzSummary};
pub use oracle::OracleReport;

#[derive(Debug, Parser)]
#[command(
    name = "parcon",
    version,
    about = "Connectivity of flag stabilizers in reductive subgroups"
)]
pub struct Cli {
    /// Write the JSON result to this file instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an adapted presentation of a flag with one of the three constructors.
    Adapt(AdaptArgs),
    /// Decide connectivity for one family and one flag.
    Analyze(AnalyzeArgs),
    /// Run seeded random flags through construction, analysis and validation.
    Fuzz(FuzzArgs),
    /// Cross-check a primary computation against its exhaustive oracle.
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Lemma {
    /// Flag and a decomposition `U ⊕ W`.
    #[value(name = "1")]
    Decomposition,
    /// Flag and a symplectic form.
    #[value(name = "2")]
    Symplectic,
    /// Flag, a skew form with one-dimensional kernel and a complement `U`.
    #[value(name = "3")]
    OddSymplectic,
}

impl Lemma {
    pub fn number(self) -> u8 {
        match self {
            Lemma::Decomposition => 1,
            Lemma::Symplectic => 2,
            Lemma::OddSymplectic => 3,
        }
    }
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["input", "seed"])))]
pub struct AdaptArgs {
    #[arg(long, value_enum)]
    pub lemma: Lemma,
    /// JSON document with `flag` and the data the lemma needs (`-` for stdin).
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Random flag with coordinate data instead of an input file.
    #[arg(long, requires = "dim")]
    pub seed: Option<u64>,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Dimension of `U` for lemma 1 with a random flag.
    #[arg(long)]
    pub u_dim: Option<usize>,
}

#[derive(Debug, Args)]
#[command(group(
    clap::ArgGroup::new("source")
        .required(true)
        .args(["seed", "flag", "witness", "presentation"])
))]
pub struct AnalyzeArgs {
    /// Family name such as `SLxSL(2,1)`, `Sp(4)` or `SO(3)`.
    #[arg(long)]
    pub family: SubgroupFamily,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Flag JSON file (`-` for stdin).
    #[arg(long, value_name = "FILE")]
    pub flag: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub witness: Option<Witness>,
    /// Presentation JSON as written by `adapt`; its flag is the one analyzed.
    #[arg(long, value_name = "FILE")]
    pub presentation: Option<PathBuf>,
    /// Family data JSON; coordinate data when absent.
    #[arg(long, value_name = "FILE", conflicts_with = "witness")]
    pub data: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Witness {
    /// `S(GL_n × GL_n)` on `(e_1 + e_{n+1}, ..., e_n + e_{2n}, e_1, ..., e_n)`.
    SglglNegative,
    /// `SO(n)` on the standard flag.
    SoStandard,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("target").required(true).args(["family", "lemma"])))]
pub struct FuzzArgs {
    #[arg(long)]
    pub family: Option<SubgroupFamily>,
    /// Exercise one constructor and its validator only.
    #[arg(long, value_enum, requires = "dim")]
    pub lemma: Option<Lemma>,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Fixed `dim U` for lemma 1; drawn per trial when absent.
    #[arg(long)]
    pub u_dim: Option<usize>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Use coordinate data for every trial instead of random data.
    #[arg(long)]
    pub standard_data: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleCheck {
    SnfVsMinors,
    PointcountVsEnumeration,
    SignEnumeration,
    SpOddBruteforce,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, value_enum)]
    pub check: OracleCheck,
    /// Random instances; for `sp-odd-bruteforce`, a cap on the presentations enumerated.
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Field size; drawn from {2, 3, 5, 7} per trial when absent.
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    pub q: Option<u64>,
}

/// Failure categories, each with its own exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Parse(String),
    Precondition(String),
    Unsupported(String),
    Guard(String),
    Internal(String),
    /// A fuzz or oracle run completed and found disagreements; the report
    /// is still written.
    Mismatch(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Unsupported(_) => 4,
            CliError::Guard(_) => 5,
            CliError::Internal(_) | CliError::Mismatch(_) => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::Precondition(_) => "precondition",
            CliError::Unsupported(_) => "unsupported",
            CliError::Guard(_) => "guard",
            CliError::Internal(_) => "internal",
            CliError::Mismatch(_) => "mismatch",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m)
            | CliError::Precondition(m)
            | CliError::Unsupported(m)
            | CliError::Guard(m)
            | CliError::Internal(m)
            | CliError::Mismatch(m) => m,
        }
    }

    /// One-line JSON object for standard error.
    pub fn to_json(&self) -> String {
        serde_json::json!({
            "error": {
                "kind": self.kind(),
                "message": self.message(),
                "exit_code": self.exit_code(),
            }
        })
        .to_string()
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.kind(), self.message())
    }
}

impl std::error::Error for CliError {}

impl From<parcon_core::Error> for CliError {
    fn from(e: parcon_core::Error) -> Self {
        use parcon_core::Error as E;
        match e {
            E::Precondition(m) => CliError::Precondition(m),
            E::Unsupported(m) => CliError::Unsupported(m),
            E::Guard(m) => CliError::Guard(m),
            E::Invariant(m) => CliError::Internal(m),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// What a command produced: the JSON document (if any) and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome {
                    stdout: e.to_string(),
                    stderr: String::new(),
                    code: 0,
                };
            }
            let err = CliError::Parse(e.to_string().trim_end().to_string());
            return failure(String::new(), &err);
        }
    };
    run_cli(&cli)
}

pub fn run_cli(cli: &Cli) -> Outcome {
    let (document, result) = match &cli.command {
        Command::Adapt(a) => split(commands::adapt(a)),
        Command::Analyze(a) => split(commands::analyze(a)),
        Command::Fuzz(a) => fuzz::run(a),
        Command::Oracle(a) => oracle::run(a),
    };
    let mut stdout = String::new();
    if let Some(doc) = document {
        match &cli.output {
            Some(path) => {
                if let Err(e) = std::fs::write(path, &doc) {
                    let err = CliError::Internal(format!("cannot write {}: {e}", path.display()));
                    return failure(String::new(), &err);
                }
            }
            None => stdout = doc,
        }
    }
    match result {
        Ok(()) => Outcome {
            stdout,
            stderr: String::new(),
            code: 0,
        },
        Err(e) => failure(stdout, &e),
    }
}

fn split(r: CliResult<String>) -> (Option<String>, CliResult<()>) {
    match r {
        Ok(doc) => (Some(doc), Ok(())),
        Err(e) => (None, Err(e)),
    }
}

fn failure(stdout: String, err: &CliError) -> Outcome {
    Outcome {
        stdout,
        stderr: format!("{}\n", err.to_json()),
        code: err.exit_code(),
    }
}

/// Pretty JSON with a trailing newline. Field order follows the structs and
/// maps are ordered, so equal values always print identically.
pub(crate) fn to_document<T: Serialize>(value: &T) -> CliResult<String> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| CliError::Internal(format!("serialization failed: {e}")))
}
