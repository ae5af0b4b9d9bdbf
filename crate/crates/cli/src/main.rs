//! `wordstat` command-line tool.
//!
//! Each subcommand validates its inputs, runs one computation and writes a
//! JSON document (and for tabular results a CSV file) that embeds the full
//! run configuration. Failures are reported as a JSON object on stderr with a
//! nonzero exit code.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

/// Exact statistics of nonoverlapping word occurrences.
#[derive(Parser, Debug)]
#[command(name = "wordstat", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    /// Alphabet symbols in order, e.g. `01` or `ACGT`.
    #[arg(long, default_value = "01")]
    pub alphabet: String,
    /// Letter probabilities, comma separated; decimals and fractions are read exactly.
    #[arg(long, value_delimiter = ',', conflicts_with = "fair")]
    pub probs: Option<Vec<String>>,
    /// Uniform letter probabilities (the default when --probs is absent).
    #[arg(long)]
    pub fair: bool,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Output path stem; `.json` and `.csv` files are written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Significant digits in decimal renderings.
    #[arg(long, default_value_t = 50)]
    pub digits: usize,
    /// Also print exact numerators and denominators.
    #[arg(long)]
    pub fractions: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Truncated,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Inclusion-exclusion over disjoint allocations.
    Formula,
    /// Prefix-chain law.
    Chain,
    /// Automaton dynamic programme; any pattern set.
    Automaton,
    /// Enumeration of every string; tiny n only.
    Brute,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SamplingArg {
    Sliding,
    Blockwise,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum StreamArg {
    Continuous,
    Reseed,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Ascii,
    Packed,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Joint law of the occurrence counts.
    Dist {
        #[command(flatten)]
        model: ModelArgs,
        /// Pattern; repeat for a joint law. `?` matches any letter.
        #[arg(short = 'w', long = "word", required = true)]
        words: Vec<String>,
        #[arg(short = 'n', value_parser = config::parse_count)]
        n: u64,
        #[arg(long, value_enum, default_value = "exact")]
        mode: Mode,
        /// Error budget for truncated mode.
        #[arg(long, default_value = "1e-30")]
        epsilon: String,
        #[arg(long, value_enum, default_value = "formula")]
        method: Method,
        #[arg(long, value_enum, default_value = "sliding")]
        sampling: SamplingArg,
        /// Cap on enumerated terms before giving up.
        #[arg(long, value_parser = config::parse_count)]
        budget: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Raw moments E[N^t] of a single word count.
    Moments {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(short = 'w', long = "word")]
        word: String,
        #[arg(short = 'n', value_parser = config::parse_count)]
        n: u64,
        /// Highest moment order.
        #[arg(short = 't', long = "order", default_value_t = 2)]
        order: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Power curves of the sliding and block-wise count tests.
    Power {
        /// Word probability under the null.
        #[arg(long)]
        theta_star: f64,
        /// Word length.
        #[arg(long)]
        wlen: u64,
        #[arg(short = 'n', value_parser = config::parse_count)]
        n: u64,
        /// Alternatives, comma separated; defaults to 100 evenly spaced points in (0, theta*].
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<f64>>,
        /// Rejection threshold in null standard deviations.
        #[arg(long, default_value_t = wordstat::stats::DEFAULT_SIGMA)]
        sigma: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Kolmogorov-Smirnov test of counts against the exact law.
    Kstest {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(short = 'w', long = "word")]
        word: String,
        #[arg(short = 'n', value_parser = config::parse_count)]
        n: u64,
        /// Number of samples; defaults to all full samples in the bit file.
        #[arg(short = 't', value_parser = config::parse_count)]
        t: Option<u64>,
        /// Bit file to test instead of a built-in generator.
        #[arg(long, conflicts_with = "generator")]
        bits: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "ascii")]
        format: FormatArg,
        #[arg(long)]
        generator: Option<String>,
        #[arg(long)]
        seed: Option<u32>,
        #[arg(long, default_value = "lsb")]
        extraction: String,
        #[arg(long, value_enum, default_value = "continuous")]
        stream: StreamArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Generator audit: KS test plus exact, binomial and empirical tables.
    Audit {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(short = 'w', long = "word")]
        word: String,
        #[arg(short = 'n', value_parser = config::parse_count)]
        n: u64,
        #[arg(short = 't', value_parser = config::parse_count)]
        t: u64,
        #[arg(long, default_value = "bsd_random")]
        generator: String,
        #[arg(long)]
        seed: Option<u32>,
        #[arg(long, default_value = "lsb")]
        extraction: String,
        #[arg(long, value_enum, default_value = "continuous")]
        stream: StreamArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Overlap checks for words, partial words and sets.
    Overlap {
        #[arg(long, default_value = "01")]
        alphabet: String,
        #[arg(short = 'w', long = "word", required = true)]
        words: Vec<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Partial words: the w(m) family and realization information.
    Partial {
        #[command(flatten)]
        model: ModelArgs,
        /// Generate w(m).
        #[arg(long, required_unless_present = "words")]
        family: Option<usize>,
        #[arg(short = 'w', long = "word")]
        words: Vec<String>,
        /// List realizations only up to this many wildcards.
        #[arg(long, default_value_t = 10)]
        max_wildcards: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Symbol streams from a generator, or count samples from the exact law.
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value = "mt19937")]
        generator: String,
        #[arg(long)]
        seed: Option<u32>,
        #[arg(long, default_value = "lsb")]
        extraction: String,
        /// Number of symbols to emit.
        #[arg(long, value_parser = config::parse_count, required_unless_present = "word")]
        length: Option<u64>,
        #[arg(long, value_enum, default_value = "ascii")]
        format: FormatArg,
        /// With the exact sampler: the word whose counts are drawn.
        #[arg(short = 'w', long = "word")]
        word: Option<String>,
        #[arg(short = 'n', value_parser = config::parse_count)]
        n: Option<u64>,
        #[arg(short = 't', value_parser = config::parse_count)]
        t: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Repeat the run recorded in an output file.
    Rerun {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A failure reported to the user.
#[derive(Debug)]
pub struct CliError {
    pub kind: String,
    pub message: String,
    pub code: u8,
}

impl CliError {
    pub fn new(kind: &str, message: impl Into<String>) -> Self {
        CliError {
            kind: kind.into(),
            message: message.into(),
            code: 1,
        }
    }
}

impl From<wordstat::Error> for CliError {
    fn from(e: wordstat::Error) -> Self {
        CliError::new(e.kind(), e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        let kind = if e.kind() == std::io::ErrorKind::BrokenPipe {
            "broken_pipe"
        } else {
            "io"
        };
        CliError::new(kind, e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        match e.io_error_kind() {
            Some(std::io::ErrorKind::BrokenPipe) => CliError::new("broken_pipe", e.to_string()),
            Some(_) => CliError::new("io", e.to_string()),
            None => CliError::new("json", e.to_string()),
        }
    }
}

/// Drops `--out <path>` so the recorded command line can be replayed
/// elsewhere.
fn without_out(args: &[String]) -> Vec<String> {
    let mut kept = Vec::with_capacity(args.len());
    let mut skip = false;
    for a in args {
        if skip {
            skip = false;
        } else if a == "--out" {
            skip = true;
        } else if !a.starts_with("--out=") {
            kept.push(a.clone());
        }
    }
    kept
}

fn run(args: Vec<String>) -> Result<(), CliError> {
    let cli = match Cli::try_parse_from(
        std::iter::once("wordstat".to_string()).chain(args.iter().cloned()),
    ) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            e.print()?;
            return Ok(());
        }
        Err(e) => {
            let mut err = CliError::new("usage", e.render().to_string().trim().to_string());
            err.code = 2;
            return Err(err);
        }
    };
    match cli.command {
        Command::Rerun { file, out } => {
            let text = std::fs::read_to_string(&file)?;
            let text = text
                .strip_prefix("# ")
                .map_or(text.as_str(), |t| t.lines().next().unwrap_or(""));
            let doc: serde_json::Value = serde_json::from_str(text)?;
            let recorded: config::RunConfig = serde_json::from_value(doc["config"].clone())?;
            let mut replay = recorded.args;
            if replay.first().map(String::as_str) == Some("rerun") {
                return Err(CliError::new(
                    "invalid_argument",
                    "a rerun cannot replay another rerun",
                ));
            }
            if let Some(o) = out {
                replay.push("--out".into());
                replay.push(o.display().to_string());
            }
            run(replay)
        }
        command => commands::dispatch(command, without_out(&args)),
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        // a closed pipe (`| head`) is not worth a report
        Err(e) if e.kind == "broken_pipe" => ExitCode::SUCCESS,
        Err(e) => {
            let doc = json!({
                "tool": output::TOOL,
                "version": output::VERSION,
                "error": { "kind": e.kind, "message": e.message },
            });
            eprintln!("{doc}");
            ExitCode::from(e.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn out_flag_is_not_recorded() {
        let args: Vec<String> = ["dist", "-w", "01", "--out", "x/y", "-n", "3", "--out=z"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(without_out(&args), ["dist", "-w", "01", "-n", "3"]);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
