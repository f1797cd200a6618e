//! Aggregation of tagged tokens into (corpus, year, word, tag) counts and
//! the per-word proportion time series derived from them.

use std::collections::{BTreeMap, BTreeSet};

use chrono::Datelike;
use thiserror::Error;

use crate::tagger::{Tag, TaggedSentence};

/// Default minimum per-year denominator before a series point counts as
/// well supported.
pub const DEFAULT_MIN_SUPPORT: u64 = 20;

/// Exact count of one (corpus, year, word, tag) key.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct UsageRecord {
    pub corpus_id: String,
    pub year: i32,
    pub word: String,
    pub tag: Tag,
    pub count: u64,
}

/// Counts tagged tokens grouped by corpus, UTC calendar year, lowercase
/// surface word, and tag. Output is sorted by key.
pub fn aggregate(tagged: &[TaggedSentence]) -> Vec<UsageRecord> {
    let mut counts: BTreeMap<(String, i32, String, Tag), u64> = BTreeMap::new();
    for sentence in tagged {
        let year = sentence.timestamp.year();
        for token in &sentence.tokens {
            let key = (
                sentence.corpus_id.clone(),
                year,
                token.surface.to_lowercase(),
                token.tag,
            );
            *counts.entry(key).or_insert(0) += 1;
        }
    }
    counts
        .into_iter()
        .map(|((corpus_id, year, word, tag), count)| UsageRecord {
            corpus_id,
            year,
            word,
            tag,
            count,
        })
        .collect()
}

/// Sums shard aggregates into one sorted record set. Aggregating shards
/// and merging equals aggregating the whole corpus.
pub fn merge_records<I>(shards: I) -> Vec<UsageRecord>
where
    I: IntoIterator,
    I::Item: IntoIterator<Item = UsageRecord>,
{
    let mut counts: BTreeMap<(String, i32, String, Tag), u64> = BTreeMap::new();
    for shard in shards {
        for record in shard {
            let key = (record.corpus_id, record.year, record.word, record.tag);
            *counts.entry(key).or_insert(0) += record.count;
        }
    }
    counts
        .into_iter()
        .map(|((corpus_id, year, word, tag), count)| UsageRecord {
            corpus_id,
            year,
            word,
            tag,
            count,
        })
        .collect()
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("unknown tag name {0:?}")]
    UnknownTag(String),
    #[error("empty tag set")]
    EmptySet,
    #[error("numerator tags must be a subset of the denominator tags or disjoint from them")]
    MixedSets,
}

/// Parses tag-set names: the eight tags plus the derived unions CONTENT
/// and VERB.
pub fn parse_tag_set<S: AsRef<str>>(names: &[S]) -> Result<BTreeSet<Tag>, SeriesError> {
    let mut set = BTreeSet::new();
    for name in names {
        match name.as_ref() {
            "CONTENT" => set.extend([Tag::Noun, Tag::Mod, Tag::IVerb, Tag::TVerb]),
            "VERB" => set.extend([Tag::IVerb, Tag::TVerb]),
            other => {
                let tag = Tag::from_name(other)
                    .ok_or_else(|| SeriesError::UnknownTag(other.to_string()))?;
                set.insert(tag);
            }
        }
    }
    if set.is_empty() {
        return Err(SeriesError::EmptySet);
    }
    Ok(set)
}

/// Checks the numerator/denominator relationship a proportion series
/// expects.
pub fn validate_tag_sets(
    numerator: &BTreeSet<Tag>,
    denominator: &BTreeSet<Tag>,
) -> Result<(), SeriesError> {
    let subset = numerator.is_subset(denominator);
    let disjoint = numerator.is_disjoint(denominator);
    if subset || disjoint {
        Ok(())
    } else {
        Err(SeriesError::MixedSets)
    }
}

/// One year of a proportion series.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesPoint {
    pub corpus_id: String,
    pub year: i32,
    pub word: String,
    pub proportion: f64,
    /// The denominator count behind the proportion.
    pub support: u64,
}

/// Per year: the word's counts under the numerator tags divided by its
/// counts under the denominator tags. Years with a zero denominator are
/// omitted; years ascend.
pub fn proportion_series(
    records: &[UsageRecord],
    word: &str,
    numerator: &BTreeSet<Tag>,
    denominator: &BTreeSet<Tag>,
    corpus: &str,
) -> Vec<SeriesPoint> {
    let mut by_year: BTreeMap<i32, (u64, u64)> = BTreeMap::new();
    for record in records {
        if record.corpus_id != corpus || record.word != word {
            continue;
        }
        let entry = by_year.entry(record.year).or_insert((0, 0));
        if numerator.contains(&record.tag) {
            entry.0 += record.count;
        }
        if denominator.contains(&record.tag) {
            entry.1 += record.count;
        }
    }
    by_year
        .into_iter()
        .filter(|(_, (_, den))| *den > 0)
        .map(|(year, (num, den))| SeriesPoint {
            corpus_id: corpus.to_string(),
            year,
            word: word.to_string(),
            proportion: num as f64 / den as f64,
            support: den,
        })
        .collect()
}

/// A word's split across the content classes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassDistribution {
    pub noun: f64,
    pub modifier: f64,
    pub verb: f64,
}

/// For each word in the given corpus and year: its NOUN, MOD, and VERB
/// counts divided by its total content count. Words with zero content
/// usage are omitted.
pub fn distribution_snapshot(
    records: &[UsageRecord],
    corpus: &str,
    year: i32,
) -> BTreeMap<String, ClassDistribution> {
    let mut totals: BTreeMap<String, (u64, u64, u64)> = BTreeMap::new();
    for record in records {
        if record.corpus_id != corpus || record.year != year || !record.tag.is_content() {
            continue;
        }
        let entry = totals.entry(record.word.clone()).or_insert((0, 0, 0));
        match record.tag {
            Tag::Noun => entry.0 += record.count,
            Tag::Mod => entry.1 += record.count,
            _ => entry.2 += record.count,
        }
    }
    totals
        .into_iter()
        .filter(|(_, (n, m, v))| n + m + v > 0)
        .map(|(word, (n, m, v))| {
            let total = (n + m + v) as f64;
            (
                word,
                ClassDistribution {
                    noun: n as f64 / total,
                    modifier: m as f64 / total,
                    verb: v as f64 / total,
                },
            )
        })
        .collect()
}
