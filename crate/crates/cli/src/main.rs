//! toki: batch pipeline for Toki Pona corpora.
//!
//! Exit statuses: 0 success, 1 internal error, 2 unreadable input,
//! 3 malformed input record, 4 configuration error.

mod config;
mod error;
mod records;
mod stages;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::RunConfig;
use error::StageError;

#[derive(Parser)]
#[command(
    name = "toki",
    version,
    about = "Extract, parse, tag, and aggregate Toki Pona sentences from mixed-language corpora"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct StageArgs {
    /// Run configuration file (TOML); defaults apply when absent
    #[arg(long)]
    config: Option<PathBuf>,
    /// Input file for the stage
    #[arg(long)]
    input: PathBuf,
    /// Output file (filter/parse/tag/aggregate) or directory (report/all)
    #[arg(long)]
    output: PathBuf,
    /// Minimum Toki Pona score for keeping a sentence
    #[arg(long)]
    threshold: Option<f64>,
    /// Series support below this is flagged low-support
    #[arg(long)]
    min_support: Option<u64>,
    /// Ambiguity cap per sentence
    #[arg(long)]
    max_parses: Option<usize>,
    /// Restrict report series to one corpus id
    #[arg(long)]
    corpus: Option<String>,
    /// Grammar rule file overriding the embedded grammar
    #[arg(long)]
    grammar: Option<PathBuf>,
    /// Word list file overriding the embedded lexicon
    #[arg(long)]
    lexicon: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Clean, split, tokenize, and score raw messages
    Filter(StageArgs),
    /// Parse scored sentences and emit the selected reading per sentence
    Parse(StageArgs),
    /// Parse, select, and tag scored sentences
    Tag(StageArgs),
    /// Count tagged tokens by corpus, year, word, and tag
    Aggregate(StageArgs),
    /// Derive configured proportion series from aggregated counts
    Report(StageArgs),
    /// Run filter, tag, aggregate, and report into one directory
    All(StageArgs),
}

fn effective_config(args: &StageArgs) -> Result<RunConfig, StageError> {
    let mut config = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(threshold) = args.threshold {
        config.threshold = threshold;
    }
    if let Some(min_support) = args.min_support {
        config.min_support = min_support;
    }
    if let Some(max_parses) = args.max_parses {
        config.max_parses = max_parses;
    }
    if let Some(grammar) = &args.grammar {
        config.grammar_path = Some(grammar.clone());
    }
    if let Some(lexicon) = &args.lexicon {
        config.lexicon_path = Some(lexicon.clone());
    }
    config.validate()?;
    Ok(config)
}

fn dispatch(cli: Cli) -> Result<(), StageError> {
    match &cli.command {
        Command::Filter(args) => {
            let config = effective_config(args)?;
            stages::run_filter(&config, &args.input, &args.output)
        }
        Command::Parse(args) => {
            let config = effective_config(args)?;
            stages::run_parse(&config, &args.input, &args.output)
        }
        Command::Tag(args) => {
            let config = effective_config(args)?;
            stages::run_tag(&config, &args.input, &args.output)
        }
        Command::Aggregate(args) => {
            let _ = effective_config(args)?;
            stages::run_aggregate(&args.input, &args.output)
        }
        Command::Report(args) => {
            let config = effective_config(args)?;
            stages::run_report(&config, &args.input, &args.output, args.corpus.as_deref())
        }
        Command::All(args) => {
            let config = effective_config(args)?;
            stages::run_all(&config, &args.input, &args.output, args.corpus.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}
