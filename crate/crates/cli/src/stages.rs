//! The pipeline stages. Each stage reads one file, writes one output, and
//! prints a `stage: key=value ...` diagnostics line to stderr. The `all`
//! stage runs filter, tag, aggregate, and report over the same files the
//! stagewise commands would use, so the two ways of running are
//! byte-identical.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use toki_core::aggregate::{aggregate, parse_tag_set, proportion_series, UsageRecord};
use toki_core::disambiguate::{score_parse, select_with_info};
use toki_core::grammar::parse;
use toki_core::tagger::{tag_pipeline, TaggedSentence};
use toki_core::textprep::{filter_corpus, RawMessage, ScoredSentence};

use crate::config::{RunConfig, SeriesConfig};
use crate::error::StageError;
use crate::records::{
    read_jsonl, read_usage_records, write_jsonl, write_usage_records, ParsedRecord,
};

pub fn run_filter(config: &RunConfig, input: &Path, output: &Path) -> Result<(), StageError> {
    let resources = crate::config::load_resources(config)?;
    let messages: Vec<RawMessage> = read_jsonl(input)?;
    let (sentences, stats) = filter_corpus(&messages, &resources.lexicon, config.threshold);
    write_jsonl(output, &sentences)?;
    eprintln!(
        "filter: messages_in={} sentences_seen={} sentences_kept={} skipped_malformed={}",
        stats.messages, stats.sentences_seen, stats.sentences_kept, stats.skipped_malformed
    );
    Ok(())
}

pub fn run_parse(config: &RunConfig, input: &Path, output: &Path) -> Result<(), StageError> {
    let resources = crate::config::load_resources(config)?;
    let sentences: Vec<ScoredSentence> = read_jsonl(input)?;
    let mut records = Vec::new();
    let mut rejected = 0u64;
    let mut capped = 0u64;
    for sentence in &sentences {
        let forest = parse(&sentence.tokens, &resources.grammar, &resources.lexicon);
        let Some(selection) =
            select_with_info(&forest, &config.weights, config.max_parses)
        else {
            rejected += 1;
            continue;
        };
        if selection.capped {
            capped += 1;
        }
        records.push(ParsedRecord {
            tokens: sentence.tokens.clone(),
            bracketing: selection.tree.bracketing(),
            parses: selection.total_parses,
            capped: selection.capped,
            score: score_parse(&selection.tree, &config.weights).total,
            timestamp: sentence.timestamp,
            corpus_id: sentence.corpus_id.clone(),
        });
    }
    write_jsonl(output, &records)?;
    eprintln!(
        "parse: sentences_in={} parsed={} rejected={rejected} ambiguity_capped={capped}",
        sentences.len(),
        records.len()
    );
    Ok(())
}

pub fn run_tag(config: &RunConfig, input: &Path, output: &Path) -> Result<(), StageError> {
    let resources = crate::config::load_resources(config)?;
    let sentences: Vec<ScoredSentence> = read_jsonl(input)?;
    let (tagged, stats) = tag_pipeline(
        &sentences,
        &resources.grammar,
        &resources.lexicon,
        &config.weights,
        config.max_parses,
    )
    .map_err(StageError::internal)?;
    write_jsonl(output, &tagged)?;
    eprintln!(
        "tag: sentences_in={} tagged={} rejected={} ambiguity_capped={}",
        stats.sentences, stats.tagged, stats.rejected, stats.ambiguity_capped
    );
    Ok(())
}

pub fn run_aggregate(input: &Path, output: &Path) -> Result<(), StageError> {
    let tagged: Vec<TaggedSentence> = read_jsonl(input)?;
    let records = aggregate(&tagged);
    let tokens: u64 = records.iter().map(|r| r.count).sum();
    write_usage_records(output, &records)?;
    eprintln!(
        "aggregate: sentences_in={} tokens={} records_out={}",
        tagged.len(),
        tokens,
        records.len()
    );
    Ok(())
}

#[derive(Serialize)]
struct InputDigest {
    sha256: String,
    bytes: u64,
}

#[derive(Serialize)]
struct SeriesSummary {
    name: String,
    word: String,
    corpora: Vec<String>,
    rows: u64,
    low_support_rows: u64,
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool_version: &'static str,
    grammar_version: Option<String>,
    config: &'a RunConfig,
    input: InputDigest,
    series: Vec<SeriesSummary>,
}

fn digest_file(path: &Path) -> Result<InputDigest, StageError> {
    let bytes = std::fs::read(path).map_err(|source| StageError::Unreadable {
        path: path.to_path_buf(),
        source,
    })?;
    let digest = Sha256::digest(&bytes);
    let mut sha256 = String::with_capacity(64);
    for byte in digest {
        sha256.push_str(&format!("{byte:02x}"));
    }
    Ok(InputDigest {
        sha256,
        bytes: bytes.len() as u64,
    })
}

fn series_corpora(
    series: &SeriesConfig,
    corpus_flag: Option<&str>,
    records: &[UsageRecord],
) -> Vec<String> {
    if let Some(corpus) = corpus_flag {
        return vec![corpus.to_string()];
    }
    if !series.corpora.is_empty() {
        return series.corpora.clone();
    }
    let all: BTreeSet<&str> = records.iter().map(|r| r.corpus_id.as_str()).collect();
    all.into_iter().map(str::to_string).collect()
}

/// Writes one `corpus,year,proportion,support` file per configured series
/// plus a machine-readable run manifest.
pub fn run_report(
    config: &RunConfig,
    input: &Path,
    output_dir: &Path,
    corpus_flag: Option<&str>,
) -> Result<(), StageError> {
    if config.series.is_empty() {
        return Err(StageError::config("report needs at least one [[series]]"));
    }
    let resources = crate::config::load_resources(config)?;
    let records = read_usage_records(input)?;
    let digest = digest_file(input)?;
    std::fs::create_dir_all(output_dir).map_err(StageError::internal)?;

    let mut summaries = Vec::new();
    let mut total_rows = 0u64;
    let mut total_low = 0u64;
    for series in &config.series {
        let numerator = parse_tag_set(&series.numerator).map_err(StageError::internal)?;
        let denominator = parse_tag_set(&series.denominator).map_err(StageError::internal)?;
        let corpora = series_corpora(series, corpus_flag, &records);
        let mut buffer = Vec::new();
        writeln!(buffer, "corpus,year,proportion,support").unwrap();
        let mut rows = 0u64;
        let mut low_support_rows = 0u64;
        for corpus in &corpora {
            for point in
                proportion_series(&records, &series.word, &numerator, &denominator, corpus)
            {
                writeln!(
                    buffer,
                    "{},{},{},{}",
                    point.corpus_id, point.year, point.proportion, point.support
                )
                .unwrap();
                rows += 1;
                if point.support < config.min_support {
                    low_support_rows += 1;
                }
            }
        }
        let path = output_dir.join(format!("{}.csv", series.name));
        std::fs::write(&path, buffer)
            .map_err(|e| StageError::internal(format!("cannot write {}: {e}", path.display())))?;
        total_rows += rows;
        total_low += low_support_rows;
        summaries.push(SeriesSummary {
            name: series.name.clone(),
            word: series.word.clone(),
            corpora,
            rows,
            low_support_rows,
        });
    }

    let manifest = Manifest {
        tool_version: env!("CARGO_PKG_VERSION"),
        grammar_version: resources.grammar.version().map(str::to_string),
        config,
        input: digest,
        series: summaries,
    };
    let mut rendered =
        serde_json::to_string_pretty(&manifest).map_err(StageError::internal)?;
    rendered.push('\n');
    std::fs::write(output_dir.join("manifest.json"), rendered)
        .map_err(StageError::internal)?;

    eprintln!(
        "report: series={} rows={total_rows} low_support_rows={total_low}",
        config.series.len()
    );
    Ok(())
}

/// Output file names inside an `all` run directory.
pub const FILTERED_FILE: &str = "filtered.jsonl";
pub const TAGGED_FILE: &str = "tagged.jsonl";
pub const AGGREGATED_FILE: &str = "aggregated.csv";

/// Runs filter, tag, aggregate, and report stagewise into one directory.
pub fn run_all(
    config: &RunConfig,
    input: &Path,
    output_dir: &Path,
    corpus_flag: Option<&str>,
) -> Result<(), StageError> {
    if config.series.is_empty() {
        return Err(StageError::config("report needs at least one [[series]]"));
    }
    std::fs::create_dir_all(output_dir).map_err(StageError::internal)?;
    let filtered = output_dir.join(FILTERED_FILE);
    let tagged = output_dir.join(TAGGED_FILE);
    let aggregated = output_dir.join(AGGREGATED_FILE);
    run_filter(config, input, &filtered)?;
    run_tag(config, &filtered, &tagged)?;
    run_aggregate(&tagged, &aggregated)?;
    run_report(config, &aggregated, output_dir, corpus_flag)?;
    Ok(())
}

