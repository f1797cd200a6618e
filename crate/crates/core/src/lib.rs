//! Batch toolkit for Toki Pona corpora: extracts Toki Pona sentences from
//! mixed-language text, parses them with an Earley chart parser over a
//! Toki Pona phrase structure grammar, resolves ambiguity with heuristic
//! scoring, tags parts of speech, and aggregates tagged usage into
//! per-year time series.
//!
//! The pipeline stages mirror the modules:
//!
//! 1. [`textprep`] — clean, split, tokenize, and score raw messages
//! 2. [`grammar`] — parse token sequences into packed forests
//! 3. [`disambiguate`] — pick one parse per sentence
//! 4. [`tagger`] — emit one part-of-speech tag per token
//! 5. [`aggregate`] — count (corpus, year, word, tag) and derive series
//!
//! [`lexicon`] holds the word list and phonotactics the other stages
//! share.

pub mod aggregate;
pub mod disambiguate;
pub mod grammar;
pub mod lexicon;
pub mod tagger;
pub mod textprep;

pub use aggregate::{
    aggregate, distribution_snapshot, merge_records, parse_tag_set, proportion_series,
    validate_tag_sets, ClassDistribution, SeriesError, SeriesPoint, UsageRecord,
    DEFAULT_MIN_SUPPORT,
};
pub use disambiguate::{
    score_parse, select_best, select_with_info, ParseScore, Selection, WeightTable,
    DEFAULT_AMBIGUITY_CAP,
};
pub use grammar::{
    classify_token, parse, Grammar, GrammarError, ParseForest, ParseTree, TerminalCategory,
    DEFAULT_GRAMMAR,
};
pub use lexicon::{
    is_valid_proper_name, syllabify, Lexicon, LexiconEntry, LexiconError, Syllable,
    DEFAULT_LEXICON,
};
pub use tagger::{tag, tag_pipeline, Tag, TagError, TagStats, TaggedSentence, TaggedToken};
pub use textprep::{
    clean_text, filter_corpus, score_sentence, split_sentences, tokenize, FilterStats, RawMessage,
    ScoredSentence,
};
