//! Command implementations behind the `qhmod` binary.
//!
//! Every command returns an [`Outcome`] instead of printing, so the binary and
//! the tests share one code path.

use std::fmt;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qhmod_core::foliation::{CsConvention, FoliationError};
use qhmod_core::moduli::{ModuliError, DEFAULT_TOLERANCE};
use qhmod_core::parser::ParseError;
use qhmod_core::quasihom::QuasiHomError;
use qhmod_core::resolution::ResolutionError;

mod batch;
mod commands;
mod render;

pub use batch::{classify_batch, ClassRecord};
pub use commands::{analyze, equiv, foliation_check, resolve, AnalyzeReport, FoliationInput};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_EQUIVALENT: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_AMBIGUOUS: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Negated,
    #[value(name = "paper")]
    Residue,
}

impl From<ConventionArg> for CsConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Negated => CsConvention::Negated,
            ConventionArg::Residue => CsConvention::Residue,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Matching tolerance for moduli comparisons.
    #[arg(long, global = true, env = "QHMOD_TOLERANCE", default_value_t = DEFAULT_TOLERANCE)]
    pub tolerance: f64,
    /// Truncation order for unit series.
    #[arg(long = "order", global = true, default_value_t = 12)]
    pub series_order: usize,
    /// Sign convention for Camacho-Sad indices.
    #[arg(long, global = true, value_enum, default_value_t = ConventionArg::Negated)]
    pub cs_convention: ConventionArg,
    /// Output format; dot applies to resolve.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Worker threads for batch mode; defaults to the number of logical cores.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<std::path::PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tolerance: DEFAULT_TOLERANCE,
            series_order: 12,
            cs_convention: ConventionArg::Negated,
            format: OutputFormat::Text,
            jobs: None,
            output: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.tolerance > 0.0) || !self.tolerance.is_finite() {
            return Err(CliError::input(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.series_order < 2 {
            return Err(CliError::input(format!(
                "order must be at least 2, got {}",
                self.series_order
            )));
        }
        if self.jobs == Some(0) {
            return Err(CliError::input("jobs must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Parser)]
#[command(name = "qhmod", version, about = "Classify quasi-homogeneous plane curve germs")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normal form, stratum, fingerprint and resolution summary of one curve.
    Analyze { input: String },
    /// Decide whether two curves are analytically equivalent.
    Equiv { first: String, second: String },
    /// Export the resolution dual graph.
    Resolve { input: String },
    /// Group a file of polynomials into equivalence classes.
    ClassifyBatch { path: std::path::PathBuf },
    /// Check Camacho-Sad index sums along the resolution chain.
    FoliationCheck {
        input: Option<String>,
        /// Use the curve y^P - x^Q.
        #[arg(long, num_args = 2, value_names = ["P", "Q"], conflicts_with = "input")]
        pq: Option<Vec<u32>>,
    },
}

/// Rendered result of a command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    pub fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            stderr: String::new(),
            code: EXIT_OK,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INTERNAL,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<CliError> for Outcome {
    fn from(e: CliError) -> Self {
        Outcome {
            stdout: String::new(),
            stderr: format!("error: {}\n", e.message),
            code: e.code,
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<QuasiHomError> for CliError {
    fn from(e: QuasiHomError) -> Self {
        match e {
            QuasiHomError::RootFindingDivergence | QuasiHomError::ReExpansionMismatch { .. } => {
                CliError::internal(e.to_string())
            }
            _ => CliError::input(e.to_string()),
        }
    }
}

impl From<ResolutionError> for CliError {
    fn from(e: ResolutionError) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<ModuliError> for CliError {
    fn from(e: ModuliError) -> Self {
        match e {
            ModuliError::ToleranceAmbiguity { .. } => CliError {
                code: EXIT_AMBIGUOUS,
                message: e.to_string(),
            },
            ModuliError::DegenerateTriple => CliError::internal(e.to_string()),
        }
    }
}

impl From<FoliationError> for CliError {
    fn from(e: FoliationError) -> Self {
        CliError::internal(e.to_string())
    }
}

/// Runs a parsed command line. File output is left to the caller.
pub fn run(cli: &Cli) -> Outcome {
    if let Err(e) = cli.config.validate() {
        return e.into();
    }
    let cfg = &cli.config;
    let result = match &cli.command {
        Command::Analyze { input } => analyze(input, cfg),
        Command::Equiv { first, second } => return equiv(first, second, cfg),
        Command::Resolve { input } => resolve(input, cfg),
        Command::ClassifyBatch { path } => match std::fs::read_to_string(path) {
            Ok(text) => return classify_batch(&text, cfg),
            Err(e) => Err(CliError::input(format!("cannot read {}: {e}", path.display()))),
        },
        Command::FoliationCheck { input, pq } => {
            let src = match (input, pq) {
                (_, Some(v)) => FoliationInput::Pair(v[0], v[1]),
                (Some(text), None) => FoliationInput::Curve(text.clone()),
                (None, None) => return CliError::input("give a polynomial or --pq P Q").into(),
            };
            return foliation_check(&src, cfg);
        }
    };
    match result {
        Ok(out) => Outcome::ok(out),
        Err(e) => e.into(),
    }
}
