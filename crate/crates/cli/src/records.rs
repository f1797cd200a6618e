//! Stage file formats: line-delimited JSON for sentence records, a
//! tabular text file for aggregated counts. All writers emit LF endings
//! and deterministic bytes.

use std::io::Write;
use std::path::Path;

use chrono::{DateTime, Utc};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use toki_core::aggregate::UsageRecord;
use toki_core::tagger::Tag;

use crate::error::StageError;

/// Output record of the parse stage: the selected reading and how
/// contested it was.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParsedRecord {
    pub tokens: Vec<String>,
    pub bracketing: String,
    pub parses: u64,
    pub capped: bool,
    pub score: i64,
    pub timestamp: DateTime<Utc>,
    #[serde(rename = "corpus")]
    pub corpus_id: String,
}

pub fn read_lines(path: &Path) -> Result<Vec<String>, StageError> {
    let text = std::fs::read_to_string(path).map_err(|source| StageError::Unreadable {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(text.lines().map(str::to_string).collect())
}

/// Reads one JSON record per non-empty line.
pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, StageError> {
    let mut out = Vec::new();
    for (idx, line) in read_lines(path)?.into_iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line).map_err(|e| StageError::Malformed {
            path: path.to_path_buf(),
            line: idx + 1,
            detail: e.to_string(),
        })?;
        out.push(record);
    }
    Ok(out)
}

pub fn write_jsonl<T: Serialize>(path: &Path, records: &[T]) -> Result<(), StageError> {
    let mut buffer = Vec::new();
    for record in records {
        serde_json::to_writer(&mut buffer, record).map_err(StageError::internal)?;
        buffer.push(b'\n');
    }
    std::fs::write(path, buffer)
        .map_err(|e| StageError::internal(format!("cannot write {}: {e}", path.display())))
}

pub const AGGREGATE_HEADER: &str = "corpus,year,word,tag,count";

pub fn write_usage_records(path: &Path, records: &[UsageRecord]) -> Result<(), StageError> {
    let mut buffer = Vec::new();
    writeln!(buffer, "{AGGREGATE_HEADER}").unwrap();
    for record in records {
        writeln!(
            buffer,
            "{},{},{},{},{}",
            record.corpus_id,
            record.year,
            record.word,
            record.tag.name(),
            record.count
        )
        .unwrap();
    }
    std::fs::write(path, buffer)
        .map_err(|e| StageError::internal(format!("cannot write {}: {e}", path.display())))
}

pub fn read_usage_records(path: &Path) -> Result<Vec<UsageRecord>, StageError> {
    let lines = read_lines(path)?;
    let malformed = |line: usize, detail: &str| StageError::Malformed {
        path: path.to_path_buf(),
        line,
        detail: detail.to_string(),
    };
    let mut iter = lines.iter().enumerate();
    match iter.next() {
        Some((_, header)) if header == AGGREGATE_HEADER => {}
        Some((_, header)) => {
            return Err(malformed(1, &format!("expected header {AGGREGATE_HEADER:?}, got {header:?}")))
        }
        None => return Err(malformed(1, "empty file, expected a header")),
    }
    let mut out = Vec::new();
    for (idx, line) in iter {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let [corpus, year, word, tag, count] = fields.as_slice() else {
            return Err(malformed(idx + 1, "expected 5 comma-separated fields"));
        };
        if corpus.is_empty() || word.is_empty() {
            return Err(malformed(idx + 1, "empty corpus or word"));
        }
        let year: i32 = year
            .parse()
            .map_err(|_| malformed(idx + 1, &format!("bad year {year:?}")))?;
        let tag =
            Tag::from_name(tag).ok_or_else(|| malformed(idx + 1, &format!("bad tag {tag:?}")))?;
        let count: u64 = count
            .parse()
            .map_err(|_| malformed(idx + 1, &format!("bad count {count:?}")))?;
        out.push(UsageRecord {
            corpus_id: corpus.to_string(),
            year,
            word: word.to_string(),
            tag,
            count,
        });
    }
    Ok(out)
}
