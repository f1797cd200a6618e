//! The core word list with grammatical capability flags, plus the
//! phonotactic validator for proper names.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// Embedded copy of the shipped word list.
pub const DEFAULT_LEXICON: &str = include_str!("../data/lexicon.txt");

/// Words that can follow nanpa to form an ordinal.
pub const NUMBER_WORDS: [&str; 5] = ["wan", "tu", "luka", "mute", "ale"];

/// Words that may act as a bare subject without li.
pub const PRONOUNS: [&str; 2] = ["mi", "sina"];

const CONSONANTS: [char; 9] = ['p', 't', 'k', 's', 'm', 'n', 'l', 'j', 'w'];
const VOWELS: [char; 5] = ['a', 'e', 'i', 'o', 'u'];

/// A word plus its grammatical capability flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexiconEntry {
    pub word: String,
    pub is_particle: bool,
    pub is_preposition: bool,
    pub is_preverb: bool,
    pub is_content: bool,
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("line {line}: malformed record {record:?}, expected word,flags")]
    MalformedRecord { line: usize, record: String },
    #[error("line {line}: word {word:?} contains letters outside the Toki Pona alphabet")]
    InvalidWord { line: usize, word: String },
    #[error("line {line}: unknown flag {flag:?} in {flags:?}")]
    UnknownFlag { line: usize, flag: char, flags: String },
    #[error("line {line}: word {word:?} has no flags")]
    NoFlags { line: usize, word: String },
    #[error("line {line}: duplicate word {word:?}")]
    DuplicateWord { line: usize, word: String },
    #[error("preposition {word:?} must also be flagged as a content word")]
    PrepositionNotContent { word: String },
    #[error("preverb {word:?} must also be flagged as a content word")]
    PreverbNotContent { word: String },
    #[error("expected exactly the prepositions lon, tawa, tan, kepeken, sama; found {found:?}")]
    WrongPrepositions { found: Vec<String> },
    #[error("missing particle {word:?}")]
    MissingParticle { word: String },
}

/// The word list, immutable after load.
#[derive(Debug, Clone)]
pub struct Lexicon {
    entries: BTreeMap<String, LexiconEntry>,
}

impl Lexicon {
    /// Parses the line-delimited `word,flags` format. `#` lines and blank
    /// lines are skipped.
    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (word, flags) =
                trimmed
                    .split_once(',')
                    .ok_or_else(|| LexiconError::MalformedRecord {
                        line,
                        record: trimmed.to_string(),
                    })?;
            if word.is_empty()
                || !word
                    .chars()
                    .all(|c| CONSONANTS.contains(&c) || VOWELS.contains(&c))
            {
                return Err(LexiconError::InvalidWord {
                    line,
                    word: word.to_string(),
                });
            }
            let mut entry = LexiconEntry {
                word: word.to_string(),
                is_particle: false,
                is_preposition: false,
                is_preverb: false,
                is_content: false,
            };
            for flag in flags.chars() {
                match flag {
                    'P' => entry.is_particle = true,
                    'R' => entry.is_preposition = true,
                    'V' => entry.is_preverb = true,
                    'C' => entry.is_content = true,
                    other => {
                        return Err(LexiconError::UnknownFlag {
                            line,
                            flag: other,
                            flags: flags.to_string(),
                        })
                    }
                }
            }
            if !(entry.is_particle || entry.is_preposition || entry.is_preverb || entry.is_content)
            {
                return Err(LexiconError::NoFlags {
                    line,
                    word: word.to_string(),
                });
            }
            if entries.insert(word.to_string(), entry).is_some() {
                return Err(LexiconError::DuplicateWord {
                    line,
                    word: word.to_string(),
                });
            }
        }
        let lexicon = Lexicon { entries };
        lexicon.validate()?;
        Ok(lexicon)
    }

    /// The shipped word list.
    pub fn embedded() -> Self {
        Self::parse(DEFAULT_LEXICON).expect("embedded lexicon is valid")
    }

    fn validate(&self) -> Result<(), LexiconError> {
        for entry in self.entries.values() {
            if entry.is_preposition && !entry.is_content {
                return Err(LexiconError::PrepositionNotContent {
                    word: entry.word.clone(),
                });
            }
            if entry.is_preverb && !entry.is_content {
                return Err(LexiconError::PreverbNotContent {
                    word: entry.word.clone(),
                });
            }
        }
        let prepositions: Vec<String> = self
            .entries
            .values()
            .filter(|e| e.is_preposition)
            .map(|e| e.word.clone())
            .collect();
        let mut expected = ["kepeken", "lon", "sama", "tan", "tawa"];
        expected.sort_unstable();
        if prepositions != expected {
            return Err(LexiconError::WrongPrepositions {
                found: prepositions,
            });
        }
        for particle in ["li", "e", "la", "pi", "o", "en", "anu"] {
            if !self.lookup(particle).is_some_and(|e| e.is_particle) {
                return Err(LexiconError::MissingParticle {
                    word: particle.to_string(),
                });
            }
        }
        Ok(())
    }

    /// Case-sensitive lookup on the lowered form; capitalized tokens are
    /// never lexicon words.
    pub fn lookup(&self, word: &str) -> Option<&LexiconEntry> {
        self.entries.get(word)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains_key(word)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(|w| w.as_str())
    }

    pub fn entries(&self) -> impl Iterator<Item = &LexiconEntry> {
        self.entries.values()
    }
}

/// One (C)V(n) syllable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Syllable {
    pub onset: Option<char>,
    pub vowel: char,
    pub coda_n: bool,
}

impl Syllable {
    pub fn len(&self) -> usize {
        self.onset.is_some() as usize + 1 + self.coda_n as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for Syllable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(onset) = self.onset {
            write!(f, "{onset}")?;
        }
        write!(f, "{}", self.vowel)?;
        if self.coda_n {
            write!(f, "n")?;
        }
        Ok(())
    }
}

fn is_consonant(c: char) -> bool {
    CONSONANTS.contains(&c)
}

fn is_vowel(c: char) -> bool {
    VOWELS.contains(&c)
}

fn forbidden_pair(onset: char, vowel: char) -> bool {
    matches!((onset, vowel), ('j', 'i') | ('t', 'i') | ('w', 'u') | ('w', 'o'))
}

/// Left-greedy decomposition of a lowercase string into (C)V(n) syllables:
/// an onset is required on every non-initial syllable, ji/ti/wu/wo are
/// disallowed, and a coda n may not stand before m or n. Returns the first
/// decomposition found when longer syllables are tried first, or `None` if
/// no decomposition exists.
pub fn syllabify(body: &str) -> Option<Vec<Syllable>> {
    let chars: Vec<char> = body.chars().collect();
    if chars.is_empty() {
        return None;
    }
    let mut out = Vec::new();
    if split_from(&chars, 0, true, &mut out) {
        Some(out)
    } else {
        None
    }
}

fn split_from(chars: &[char], pos: usize, initial: bool, out: &mut Vec<Syllable>) -> bool {
    if pos == chars.len() {
        return true;
    }
    let mut candidates: Vec<Syllable> = Vec::with_capacity(2);
    if is_consonant(chars[pos]) {
        if pos + 1 < chars.len()
            && is_vowel(chars[pos + 1])
            && !forbidden_pair(chars[pos], chars[pos + 1])
        {
            let base = Syllable {
                onset: Some(chars[pos]),
                vowel: chars[pos + 1],
                coda_n: false,
            };
            if pos + 2 < chars.len() && chars[pos + 2] == 'n' {
                candidates.push(Syllable {
                    coda_n: true,
                    ..base
                });
            }
            candidates.push(base);
        }
    } else if initial && is_vowel(chars[pos]) {
        let base = Syllable {
            onset: None,
            vowel: chars[pos],
            coda_n: false,
        };
        if pos + 1 < chars.len() && chars[pos + 1] == 'n' {
            candidates.push(Syllable {
                coda_n: true,
                ..base
            });
        }
        candidates.push(base);
    }
    for syllable in candidates {
        let next = pos + syllable.len();
        if syllable.coda_n && next < chars.len() && (chars[next] == 'm' || chars[next] == 'n') {
            continue;
        }
        out.push(syllable);
        if split_from(chars, next, false, out) {
            return true;
        }
        out.pop();
    }
    false
}

/// True iff the token starts with an uppercase letter and its remainder is
/// lowercase and decomposes into legal syllables.
pub fn is_valid_proper_name(token: &str) -> bool {
    let mut chars = token.chars();
    let Some(first) = chars.next() else {
        return false;
    };
    if !first.is_ascii_uppercase() {
        return false;
    }
    if !chars.clone().all(|c| c.is_ascii_lowercase()) {
        return false;
    }
    let body: String = first
        .to_ascii_lowercase()
        .to_string()
        .chars()
        .chain(chars)
        .collect();
    syllabify(&body).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rendered(body: &str) -> Option<Vec<String>> {
        syllabify(body).map(|syls| syls.iter().map(|s| s.to_string()).collect())
    }

    #[test]
    fn lookup_prepositions_and_preverbs() {
        let lex = Lexicon::embedded();
        let tawa = lex.lookup("tawa").unwrap();
        assert!(tawa.is_preposition && tawa.is_content);
        let wile = lex.lookup("wile").unwrap();
        assert!(wile.is_preverb && wile.is_content);
        assert!(lex.lookup("xyzzy").is_none());
        assert!(lex.lookup("Tawa").is_none(), "lookup is case-sensitive");
    }

    #[test]
    fn embedded_lexicon_has_120_words() {
        assert_eq!(Lexicon::embedded().len(), 120);
    }

    #[test]
    fn every_entry_has_a_flag_and_closed_classes_are_content() {
        let lex = Lexicon::embedded();
        for entry in lex.entries() {
            assert!(
                entry.is_particle || entry.is_preposition || entry.is_preverb || entry.is_content,
                "{} has no flags",
                entry.word
            );
            if entry.is_preposition || entry.is_preverb {
                assert!(entry.is_content, "{} must double as content", entry.word);
            }
        }
    }

    #[test]
    fn nanpa_is_both_particle_and_content() {
        let lex = Lexicon::embedded();
        let nanpa = lex.lookup("nanpa").unwrap();
        assert!(nanpa.is_particle && nanpa.is_content);
    }

    #[test]
    fn proper_name_examples() {
        assert!(is_valid_proper_name("Tani"));
        assert!(is_valid_proper_name("Kanata"));
        assert!(!is_valid_proper_name("Btari"));
        assert!(!is_valid_proper_name("tani"), "names must be capitalized");
        assert!(!is_valid_proper_name(""));
    }

    #[test]
    fn syllabify_examples() {
        assert_eq!(rendered("tani"), Some(vec!["ta".into(), "ni".into()]));
        assert_eq!(rendered("a"), Some(vec!["a".into()]));
        assert_eq!(rendered("nmi"), None);
    }

    #[test]
    fn syllabify_respects_coda_constraints() {
        // coda n may not precede m or n
        assert_eq!(rendered("anna"), None);
        assert_eq!(rendered("anma"), None);
        assert_eq!(rendered("monsi"), Some(vec!["mon".into(), "si".into()]));
        // forbidden onset-vowel pairs
        assert_eq!(rendered("ti"), None);
        assert_eq!(rendered("ji"), None);
        assert_eq!(rendered("wu"), None);
        assert_eq!(rendered("wo"), None);
        // vowel-vowel adjacency: non-initial syllables need an onset
        assert_eq!(rendered("ao"), None);
    }

    #[test]
    fn no_lexicon_word_is_a_proper_name() {
        let lex = Lexicon::embedded();
        for word in lex.words() {
            assert!(
                !is_valid_proper_name(word),
                "{word} wrongly accepted as a name"
            );
        }
    }

    #[test]
    fn rejects_word_list_missing_a_particle() {
        let err = Lexicon::parse("jan,C\n").unwrap_err();
        assert!(matches!(err, LexiconError::WrongPrepositions { .. }));
    }

    #[test]
    fn rejects_bad_flags_and_bad_words() {
        let text = "lon,RC\ntawa,RC\ntan,RC\nkepeken,RC\nsama,RC\nli,P\ne,P\nla,P\npi,P\no,P\nen,P\nanu,P\n";
        assert!(Lexicon::parse(&format!("{text}jan,X\n")).is_err());
        assert!(Lexicon::parse(&format!("{text}jan,\n")).is_err());
        assert!(Lexicon::parse(&format!("{text}xyz,C\n")).is_err());
        assert!(Lexicon::parse(&format!("{text}jan,C\njan,C\n")).is_err());
        assert!(Lexicon::parse(text).is_ok());
    }
}
