//! Batch commands behind the `discodep` binary.
//!
//! Every command is a plain function over parsed arguments so it can be
//! driven from tests without spawning a process. Documents are processed
//! in parallel on the current rayon pool and always written in doc_id
//! order, so the worker count never changes any output byte.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

mod convert;
mod inputs;
mod split;
mod stats;
mod validate;

pub use convert::{convert_pdtb, convert_rst};
pub use split::split;
pub use stats::{correlate, metrics};
pub use validate::validate;

/// How a command finished when it did not fail outright.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    /// Data problems were found and the run was strict about them.
    Diagnostics,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::Diagnostics => 1,
        }
    }
}

/// Exit code for usage, IO and format errors.
pub const ERROR_EXIT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "discodep", version, about = "Discourse dependency conversion and distance statistics")]
pub struct Cli {
    /// Worker threads for per-document processing (0 = one per core).
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert PDTB relation files into local dependency forests.
    ConvertPdtb(ConvertPdtbArgs),
    /// Convert RST .dis trees into rooted dependency trees.
    ConvertRst(ConvertRstArgs),
    /// Compute per-document MDD and SD from dependency files.
    Metrics(MetricsArgs),
    /// Correlate a metric between two metrics files.
    Correlate(CorrelateArgs),
    /// Check dependency files for structural problems.
    Validate(ValidateArgs),
    /// Split a set of document ids into seeded train/dev/test manifests.
    Split(SplitArgs),
}

#[derive(Debug, Args)]
pub struct ConvertPdtbArgs {
    /// A relation file or a directory of `<doc_id>.pdtb` files.
    #[arg(long)]
    pub input: PathBuf,
    /// Segmentation file: doc_id, edu index, start, end (tab-separated).
    #[arg(long)]
    pub edus: PathBuf,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// Output format: conll, csv or json.
    #[arg(long, default_value = "csv")]
    pub format: String,
    /// Minimum fraction of an EDU an argument must cover.
    #[arg(long, default_value_t = discodep::align::DEFAULT_THETA)]
    pub theta: f64,
    /// Column indices: kind,conn_span,conn1,sense1,conn2,sense2,arg1,arg2.
    #[arg(long)]
    pub columns: Option<String>,
    /// Exit with status 1 if any document produced an error diagnostic.
    #[arg(long)]
    pub strict: bool,
    /// Head direction rule.
    #[arg(long, default_value = discodep::pdtb2dep::DEFAULT_HEAD_RULE)]
    pub head_rule: String,
    /// Extra per-sense directions: `sense-prefix<TAB>arg1|arg2|later`.
    #[arg(long)]
    pub head_overrides: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConvertRstArgs {
    /// A .dis file or a directory of `<doc_id>.dis` files.
    #[arg(long)]
    pub input: PathBuf,
    /// Conversion: hirao or li.
    #[arg(long, default_value = "hirao")]
    pub algo: String,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// Output format: conll, csv or json.
    #[arg(long, default_value = "csv")]
    pub format: String,
    /// Relation-to-class map: `relation<TAB>class` per line.
    #[arg(long)]
    pub label_map: Option<PathBuf>,
    /// Exit with status 1 if any output graph fails validation.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    /// A dependency file or a directory of them (.conll, .csv, .json).
    #[arg(long)]
    pub input: PathBuf,
    /// MDD normalisation: local (by arcs) or rooted (by units - 1).
    #[arg(long, default_value = "local")]
    pub mode: String,
    /// Metrics CSV to write; standard output if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CorrelateArgs {
    #[arg(long)]
    pub left: PathBuf,
    #[arg(long)]
    pub right: PathBuf,
    /// Join column.
    #[arg(long, default_value = "doc_id")]
    pub key: String,
    /// Metric to correlate: mdd or sd.
    #[arg(long, default_value = "mdd")]
    pub field: String,
    /// Correlation CSV to write; standard output if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// A dependency file or a directory of them.
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    /// A directory (ids are file stems) or a file with one id per line.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub train: usize,
    #[arg(long)]
    pub dev: usize,
    #[arg(long)]
    pub test: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Directory for train.txt, dev.txt and test.txt.
    #[arg(long)]
    pub out: PathBuf,
}

/// Run a parsed command on the current thread pool.
pub fn run(cli: &Cli) -> anyhow::Result<Status> {
    match &cli.command {
        Command::ConvertPdtb(args) => convert_pdtb(args),
        Command::ConvertRst(args) => convert_rst(args),
        Command::Metrics(args) => metrics(args),
        Command::Correlate(args) => correlate(args),
        Command::Validate(args) => validate(args),
        Command::Split(args) => split(args),
    }
}

/// Run with a dedicated pool of `cli.jobs` workers.
pub fn run_with_jobs(cli: &Cli) -> anyhow::Result<Status> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()?;
    pool.install(|| run(cli))
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn defaults() {
        let cli = Cli::try_parse_from([
            "discodep", "convert-rst", "--input", "x.dis", "--out", "o",
        ])
        .unwrap();
        assert_eq!(cli.jobs, 1);
        let Command::ConvertRst(args) = cli.command else {
            panic!("wrong subcommand")
        };
        assert_eq!(args.algo, "hirao");
        assert_eq!(args.format, "csv");
        assert!(!args.strict);
    }
}
