//! Text cleaning, sentence splitting, tokenization, and sentence scoring:
//! the path from raw mixed-language messages to scored token sequences.

use std::sync::LazyLock;

use chrono::{DateTime, Utc};
use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::lexicon::{is_valid_proper_name, Lexicon};

/// One raw input record. The timestamp stays a string until
/// [`filter_corpus`] parses it, so malformed records can be counted
/// instead of failing the whole batch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawMessage {
    pub text: String,
    pub timestamp: String,
    #[serde(rename = "corpus")]
    pub corpus_id: String,
}

/// A tokenized sentence with its Toki Pona score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredSentence {
    pub tokens: Vec<String>,
    pub score: f64,
    pub timestamp: DateTime<Utc>,
    #[serde(rename = "corpus")]
    pub corpus_id: String,
}

/// Diagnostics tally for a filtering run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FilterStats {
    pub messages: u64,
    pub sentences_seen: u64,
    pub sentences_kept: u64,
    pub skipped_malformed: u64,
}

static URL_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)\b(?:https?://|www\.)\S+").unwrap());
// Discord-style markup: user/role/channel mentions and custom emoji.
static MARKUP_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"<[^<>\s]+>|@\S+").unwrap());

const KEPT_PUNCT: [char; 4] = ['.', '!', '?', ','];

/// Removes URLs, mention markup, and symbol/emoji codepoints; collapses
/// runs of three or more identical letters to one and runs of identical
/// punctuation to one; normalizes whitespace. Newlines survive as sentence
/// boundaries for [`split_sentences`].
pub fn clean_text(raw: &str) -> String {
    let text = URL_RE.replace_all(raw, " ");
    let text = MARKUP_RE.replace_all(&text, " ");

    let mut kept = String::with_capacity(text.len());
    for c in text.chars() {
        if c.is_alphanumeric() || c.is_whitespace() || KEPT_PUNCT.contains(&c) {
            kept.push(c);
        }
    }

    let mut collapsed = String::with_capacity(kept.len());
    let mut run_char = '\0';
    let mut run_len = 0usize;
    let flush = |out: &mut String, c: char, len: usize| {
        if len == 0 {
            return;
        }
        if c.is_alphabetic() {
            // duplicated-character cleanup triggers at runs of three
            let emit = if len >= 3 { 1 } else { len };
            for _ in 0..emit {
                out.push(c);
            }
        } else if KEPT_PUNCT.contains(&c) {
            out.push(c);
        } else {
            for _ in 0..len {
                out.push(c);
            }
        }
    };
    for c in kept.chars() {
        if c == run_char {
            run_len += 1;
        } else {
            flush(&mut collapsed, run_char, run_len);
            run_char = c;
            run_len = 1;
        }
    }
    flush(&mut collapsed, run_char, run_len);

    let mut out = String::with_capacity(collapsed.len());
    let mut pending_ws: Option<char> = None;
    for c in collapsed.chars() {
        if c.is_whitespace() {
            let sep = if c == '\n' || c == '\r' || pending_ws == Some('\n') {
                '\n'
            } else {
                ' '
            };
            pending_ws = Some(sep);
        } else {
            if let Some(sep) = pending_ws.take() {
                if !out.is_empty() {
                    out.push(sep);
                }
            }
            out.push(c);
        }
    }
    out
}

/// Splits cleaned text into sentences on `.`, `!`, `?`, and newlines.
/// Terminators are dropped; empty segments are skipped.
pub fn split_sentences(text: &str) -> Vec<String> {
    text.split(|c: char| matches!(c, '.' | '!' | '?' | '\n'))
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect()
}

/// Splits a sentence on whitespace and strips leading/trailing non-letter
/// characters from each token. Capitalization is preserved for
/// proper-name detection.
pub fn tokenize(sentence: &str) -> Vec<String> {
    sentence
        .split_whitespace()
        .filter_map(|raw| {
            let token = raw.trim_matches(|c: char| !c.is_alphabetic());
            (!token.is_empty()).then(|| token.to_string())
        })
        .collect()
}

/// The ratio of tokens that are lexicon words or valid proper names to all
/// tokens. An empty sequence scores 0.
pub fn score_sentence<S: AsRef<str>>(tokens: &[S], lexicon: &Lexicon) -> f64 {
    if tokens.is_empty() {
        return 0.0;
    }
    let hits = tokens
        .iter()
        .filter(|t| {
            let t = t.as_ref();
            lexicon.contains(t) || is_valid_proper_name(t)
        })
        .count();
    hits as f64 / tokens.len() as f64
}

/// Runs clean, split, tokenize, and score over each message and keeps
/// sentences scoring at least `threshold` with at least one token.
/// Messages with unparseable timestamps are skipped and counted.
pub fn filter_corpus(
    messages: &[RawMessage],
    lexicon: &Lexicon,
    threshold: f64,
) -> (Vec<ScoredSentence>, FilterStats) {
    let mut kept = Vec::new();
    let mut stats = FilterStats::default();
    for message in messages {
        stats.messages += 1;
        let timestamp = match DateTime::parse_from_rfc3339(&message.timestamp) {
            Ok(ts) => ts.with_timezone(&Utc),
            Err(_) => {
                stats.skipped_malformed += 1;
                continue;
            }
        };
        let cleaned = clean_text(&message.text);
        for sentence in split_sentences(&cleaned) {
            stats.sentences_seen += 1;
            let tokens = tokenize(&sentence);
            if tokens.is_empty() {
                continue;
            }
            let score = score_sentence(&tokens, lexicon);
            if score >= threshold {
                stats.sentences_kept += 1;
                kept.push(ScoredSentence {
                    tokens,
                    score,
                    timestamp,
                    corpus_id: message.corpus_id.clone(),
                });
            }
        }
    }
    (kept, stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex() -> Lexicon {
        Lexicon::embedded()
    }

    fn toks(words: &[&str]) -> Vec<String> {
        words.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn clean_collapses_runs() {
        assert_eq!(clean_text("ponaaaa!!!"), "pona!");
        assert_eq!(clean_text(""), "");
        assert_eq!(clean_text("jan  li   pona"), "jan li pona");
    }

    #[test]
    fn clean_preserves_short_letter_runs() {
        assert_eq!(clean_text("aa"), "aa");
        assert_eq!(clean_text("aaa"), "a");
    }

    #[test]
    fn clean_strips_urls_mentions_and_symbols() {
        assert_eq!(clean_text("toki https://example.com/x pona"), "toki pona");
        assert_eq!(clean_text("<@12345> toki"), "toki");
        assert_eq!(clean_text("toki <:wave:9999> a"), "toki a");
        assert_eq!(clean_text("@jan toki"), "toki");
        assert_eq!(clean_text("mi \u{1F600} moku"), "mi moku");
    }

    #[test]
    fn clean_keeps_newlines_as_boundaries() {
        assert_eq!(clean_text("toki\npona"), "toki\npona");
        assert_eq!(clean_text("toki \n \n pona"), "toki\npona");
    }

    #[test]
    fn split_examples() {
        assert_eq!(
            split_sentences("mi moku. sina moku."),
            vec!["mi moku", "sina moku"]
        );
        assert_eq!(split_sentences("toki!"), vec!["toki"]);
        assert_eq!(split_sentences("a"), vec!["a"]);
        assert_eq!(split_sentences(""), Vec::<String>::new());
    }

    #[test]
    fn tokenize_examples() {
        assert_eq!(
            tokenize("jan li moku e kili"),
            toks(&["jan", "li", "moku", "e", "kili"])
        );
        assert_eq!(tokenize("jan Tani,"), toks(&["jan", "Tani"]));
        assert_eq!(tokenize(""), Vec::<String>::new());
        assert_eq!(tokenize("123 456"), Vec::<String>::new());
    }

    #[test]
    fn score_examples() {
        let lex = lex();
        assert_eq!(
            score_sentence(&toks(&["jan", "li", "moku", "e", "kili"]), &lex),
            1.0
        );
        assert_eq!(score_sentence(&toks(&["lol", "jan", "li", "pona"]), &lex), 0.75);
        assert_eq!(score_sentence(&Vec::<String>::new(), &lex), 0.0);
        // valid proper names count as Toki Pona tokens
        assert_eq!(score_sentence(&toks(&["jan", "Tani"]), &lex), 1.0);
    }

    #[test]
    fn score_extremes() {
        let lex = lex();
        assert_eq!(score_sentence(&toks(&["the", "cat"]), &lex), 0.0);
        assert_eq!(score_sentence(&toks(&["toki", "pona"]), &lex), 1.0);
    }

    fn msg(text: &str, timestamp: &str) -> RawMessage {
        RawMessage {
            text: text.to_string(),
            timestamp: timestamp.to_string(),
            corpus_id: "c".to_string(),
        }
    }

    #[test]
    fn filter_keeps_only_scoring_sentences() {
        let lex = lex();
        let messages = vec![msg("jan li pona. the cat is cute.", "2024-05-01T12:00:00Z")];
        let (kept, stats) = filter_corpus(&messages, &lex, 0.8);
        assert_eq!(kept.len(), 1);
        assert_eq!(kept[0].tokens, toks(&["jan", "li", "pona"]));
        assert_eq!(kept[0].score, 1.0);
        assert_eq!(stats.sentences_kept, 1);
        assert_eq!(stats.skipped_malformed, 0);
    }

    #[test]
    fn filter_empty_input() {
        let (kept, stats) = filter_corpus(&[], &lex(), 0.8);
        assert!(kept.is_empty());
        assert_eq!(stats.skipped_malformed, 0);
    }

    #[test]
    fn filter_single_interjection() {
        let (kept, _) = filter_corpus(&[msg("toki!", "2024-05-01T12:00:00Z")], &lex(), 0.8);
        assert_eq!(kept.len(), 1);
        assert_eq!(kept[0].tokens, toks(&["toki"]));
        assert_eq!(kept[0].score, 1.0);
    }

    #[test]
    fn filter_counts_malformed_timestamps() {
        let lex = lex();
        let messages = vec![
            msg("mi moku", "not-a-date"),
            msg("mi moku", "2024-05-01T12:00:00Z"),
        ];
        let (kept, stats) = filter_corpus(&messages, &lex, 0.8);
        assert_eq!(kept.len(), 1);
        assert_eq!(stats.skipped_malformed, 1);
    }

    #[test]
    fn filter_threshold_bounds() {
        let lex = lex();
        let messages = vec![msg("zzz qqq. jan pona.", "2024-05-01T12:00:00Z")];
        let (all, _) = filter_corpus(&messages, &lex, 0.0);
        assert_eq!(all.len(), 2, "threshold 0 keeps every non-empty sentence");
        let (none, _) = filter_corpus(&messages, &lex, 1.01);
        assert!(none.is_empty(), "threshold above 1 keeps nothing");
    }

    #[test]
    fn filter_is_deterministic() {
        let lex = lex();
        let messages = vec![
            msg("jan li pona mute. ni li musi!", "2023-01-02T03:04:05Z"),
            msg("soweli lili\nli moku", "2022-07-08T09:10:11Z"),
        ];
        let (a, sa) = filter_corpus(&messages, &lex, 0.5);
        let (b, sb) = filter_corpus(&messages, &lex, 0.5);
        assert_eq!(a, b);
        assert_eq!(sa, sb);
    }

    #[test]
    fn utc_year_boundary_is_preserved() {
        let (kept, _) = filter_corpus(
            &[msg("mi moku", "2023-12-31T23:59:59Z")],
            &lex(),
            0.8,
        );
        use chrono::Datelike;
        assert_eq!(kept[0].timestamp.year(), 2023);
    }
}
