//! The Toki Pona context-free grammar and the Earley parser that yields
//! every derivation of a token sequence.

mod earley;
mod forest;

pub use forest::{ParseForest, ParseTree};
pub(crate) use forest::ChildRef;

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::lexicon::{is_valid_proper_name, Lexicon, NUMBER_WORDS, PRONOUNS};

/// Embedded copy of the shipped grammar.
pub const DEFAULT_GRAMMAR: &str = include_str!("../../data/grammar.tp");

/// A terminal category a token can satisfy. Content words satisfy several
/// at once; that fluidity is where parse ambiguity comes from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TerminalCategory {
    Content,
    /// A specific particle word such as li or e.
    Particle(String),
    Preposition,
    Preverb,
    /// Bare mi or sina, which may head a sentence without li.
    Pronoun,
    /// A capitalized, phonotactically valid proper name.
    Name,
    /// A word that can follow nanpa in an ordinal.
    Number,
}

impl fmt::Display for TerminalCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TerminalCategory::Content => write!(f, "CONTENT"),
            TerminalCategory::Particle(word) => write!(f, "PARTICLE({word})"),
            TerminalCategory::Preposition => write!(f, "PREPOSITION"),
            TerminalCategory::Preverb => write!(f, "PREVERB"),
            TerminalCategory::Pronoun => write!(f, "PRONOUN"),
            TerminalCategory::Name => write!(f, "NAME"),
            TerminalCategory::Number => write!(f, "NUMBER"),
        }
    }
}

/// The categories a token can fill, precomputed once per token.
#[derive(Debug, Clone, Default)]
pub(crate) struct TokenCaps {
    content: bool,
    preposition: bool,
    preverb: bool,
    pronoun: bool,
    name: bool,
    number: bool,
    particle: Option<String>,
}

pub(crate) fn token_caps(token: &str, lexicon: &Lexicon) -> TokenCaps {
    let mut caps = TokenCaps::default();
    if let Some(entry) = lexicon.lookup(token) {
        caps.content = entry.is_content;
        caps.preposition = entry.is_preposition;
        caps.preverb = entry.is_preverb;
        if entry.is_particle {
            caps.particle = Some(token.to_string());
        }
        caps.pronoun = PRONOUNS.contains(&token);
        caps.number = entry.is_content && NUMBER_WORDS.contains(&token);
    } else if is_valid_proper_name(token) {
        caps.name = true;
    }
    caps
}

impl TerminalCategory {
    pub(crate) fn matches_caps(&self, caps: &TokenCaps) -> bool {
        match self {
            TerminalCategory::Content => caps.content,
            TerminalCategory::Particle(word) => caps.particle.as_deref() == Some(word),
            TerminalCategory::Preposition => caps.preposition,
            TerminalCategory::Preverb => caps.preverb,
            TerminalCategory::Pronoun => caps.pronoun,
            TerminalCategory::Name => caps.name,
            TerminalCategory::Number => caps.number,
        }
    }

    /// True iff the token can fill this category.
    pub fn matches(&self, token: &str, lexicon: &Lexicon) -> bool {
        self.matches_caps(&token_caps(token, lexicon))
    }
}

/// The set of terminal categories a token can fill. Lexicon flags map to
/// the word classes, capitalized phonotactically valid tokens map to NAME,
/// and unknown tokens map to the empty set.
pub fn classify_token(token: &str, lexicon: &Lexicon) -> Vec<TerminalCategory> {
    let caps = token_caps(token, lexicon);
    let mut cats = Vec::new();
    if caps.content {
        cats.push(TerminalCategory::Content);
    }
    if let Some(word) = &caps.particle {
        cats.push(TerminalCategory::Particle(word.clone()));
    }
    if caps.preposition {
        cats.push(TerminalCategory::Preposition);
    }
    if caps.preverb {
        cats.push(TerminalCategory::Preverb);
    }
    if caps.pronoun {
        cats.push(TerminalCategory::Pronoun);
    }
    if caps.name {
        cats.push(TerminalCategory::Name);
    }
    if caps.number {
        cats.push(TerminalCategory::Number);
    }
    cats
}

pub type SymbolId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GrammarSymbol {
    Nonterminal(SymbolId),
    Terminal(TerminalCategory),
}

#[derive(Debug, Clone)]
pub struct GrammarRule {
    pub lhs: SymbolId,
    pub rhs: Vec<GrammarSymbol>,
}

#[derive(Debug, Error)]
pub enum GrammarError {
    #[error("line {line}: expected `LHS -> sym ...`, got {text:?}")]
    MalformedRule { line: usize, text: String },
    #[error("line {line}: rule for {lhs} has an empty right-hand side")]
    EmptyRhs { line: usize, lhs: String },
    #[error("line {line}: undefined nonterminal {name}")]
    UndefinedNonterminal { line: usize, name: String },
    #[error("line {line}: bad terminal {text:?}")]
    BadTerminal { line: usize, text: String },
    #[error("line {line}: duplicate rule {rule}")]
    DuplicateRule { line: usize, rule: String },
    #[error("no start symbol S")]
    NoStartSymbol,
    #[error("unary rule cycle through {name}")]
    UnaryCycle { name: String },
}

/// A validated grammar: interned nonterminal names, rules in file order,
/// and the start symbol S.
#[derive(Debug, Clone)]
pub struct Grammar {
    names: Vec<String>,
    rules: Vec<GrammarRule>,
    rules_by_lhs: Vec<Vec<usize>>,
    start: SymbolId,
    version: Option<String>,
}

fn class_terminal(name: &str) -> Option<TerminalCategory> {
    match name {
        "C" | "CONTENT" => Some(TerminalCategory::Content),
        "PREP" | "PREPOSITION" => Some(TerminalCategory::Preposition),
        "PREVERB" => Some(TerminalCategory::Preverb),
        "PRON" | "PRONOUN" => Some(TerminalCategory::Pronoun),
        "NAME" => Some(TerminalCategory::Name),
        "NUM" | "NUMBER" => Some(TerminalCategory::Number),
        _ => None,
    }
}

impl Grammar {
    /// Parses the rule notation: one `LHS -> sym sym ...` per line, `#`
    /// comments. Terminals are written in angle brackets; a bare symbol
    /// with no defining rule resolves to a class terminal (`C`, `CONTENT`,
    /// `PREPOSITION`, ...) or, when lowercase, to a particle terminal.
    pub fn parse(text: &str) -> Result<Self, GrammarError> {
        let mut version = None;
        let mut raw_rules: Vec<(usize, String, Vec<String>)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(comment) = trimmed.strip_prefix('#') {
                if let Some(v) = comment.trim().strip_prefix("version:") {
                    version.get_or_insert_with(|| v.trim().to_string());
                }
                continue;
            }
            let (lhs, rhs) =
                trimmed
                    .split_once("->")
                    .ok_or_else(|| GrammarError::MalformedRule {
                        line,
                        text: trimmed.to_string(),
                    })?;
            let lhs = lhs.trim().to_string();
            if lhs.is_empty() || lhs.starts_with('<') {
                return Err(GrammarError::MalformedRule {
                    line,
                    text: trimmed.to_string(),
                });
            }
            let rhs: Vec<String> = rhs.split_whitespace().map(str::to_string).collect();
            if rhs.is_empty() {
                return Err(GrammarError::EmptyRhs { line, lhs });
            }
            raw_rules.push((line, lhs, rhs));
        }

        let mut names: Vec<String> = Vec::new();
        let mut ids: HashMap<String, SymbolId> = HashMap::new();
        for (_, lhs, _) in &raw_rules {
            if !ids.contains_key(lhs) {
                ids.insert(lhs.clone(), names.len());
                names.push(lhs.clone());
            }
        }
        let start = *ids.get("S").ok_or(GrammarError::NoStartSymbol)?;

        let mut rules: Vec<GrammarRule> = Vec::new();
        let mut seen_rules: HashSet<(SymbolId, Vec<String>)> = HashSet::new();
        for (line, lhs, rhs_syms) in &raw_rules {
            let lhs_id = ids[lhs];
            if !seen_rules.insert((lhs_id, rhs_syms.clone())) {
                return Err(GrammarError::DuplicateRule {
                    line: *line,
                    rule: format!("{} -> {}", lhs, rhs_syms.join(" ")),
                });
            }
            let mut rhs = Vec::with_capacity(rhs_syms.len());
            for sym in rhs_syms {
                if let Some(inner) = sym.strip_prefix('<') {
                    let Some(inner) = inner.strip_suffix('>') else {
                        return Err(GrammarError::BadTerminal {
                            line: *line,
                            text: sym.clone(),
                        });
                    };
                    if let Some(cat) = class_terminal(inner) {
                        rhs.push(GrammarSymbol::Terminal(cat));
                    } else if !inner.is_empty() && inner.chars().all(|c| c.is_ascii_lowercase()) {
                        rhs.push(GrammarSymbol::Terminal(TerminalCategory::Particle(
                            inner.to_string(),
                        )));
                    } else {
                        return Err(GrammarError::BadTerminal {
                            line: *line,
                            text: sym.clone(),
                        });
                    }
                } else if let Some(&id) = ids.get(sym) {
                    rhs.push(GrammarSymbol::Nonterminal(id));
                } else if let Some(cat) = class_terminal(sym) {
                    rhs.push(GrammarSymbol::Terminal(cat));
                } else if sym.chars().all(|c| c.is_ascii_lowercase()) {
                    rhs.push(GrammarSymbol::Terminal(TerminalCategory::Particle(
                        sym.clone(),
                    )));
                } else {
                    return Err(GrammarError::UndefinedNonterminal {
                        line: *line,
                        name: sym.clone(),
                    });
                }
            }
            rules.push(GrammarRule { lhs: lhs_id, rhs });
        }

        let mut rules_by_lhs: Vec<Vec<usize>> = vec![Vec::new(); names.len()];
        for (idx, rule) in rules.iter().enumerate() {
            rules_by_lhs[rule.lhs].push(idx);
        }

        let grammar = Grammar {
            names,
            rules,
            rules_by_lhs,
            start,
            version,
        };
        grammar.check_unary_cycles()?;
        Ok(grammar)
    }

    /// The shipped grammar.
    pub fn embedded() -> Self {
        Self::parse(DEFAULT_GRAMMAR).expect("embedded grammar is valid")
    }

    // A cycle of single-nonterminal rules would give sentences infinitely
    // many derivations, so it is rejected at load time.
    fn check_unary_cycles(&self) -> Result<(), GrammarError> {
        let mut edges: Vec<Vec<SymbolId>> = vec![Vec::new(); self.names.len()];
        for rule in &self.rules {
            if let [GrammarSymbol::Nonterminal(child)] = rule.rhs.as_slice() {
                edges[rule.lhs].push(*child);
            }
        }
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state = vec![0u8; self.names.len()];
        fn visit(
            node: SymbolId,
            edges: &[Vec<SymbolId>],
            state: &mut [u8],
        ) -> Result<(), SymbolId> {
            state[node] = 1;
            for &next in &edges[node] {
                match state[next] {
                    0 => visit(next, edges, state)?,
                    1 => return Err(next),
                    _ => {}
                }
            }
            state[node] = 2;
            Ok(())
        }
        for id in 0..self.names.len() {
            if state[id] == 0 {
                visit(id, &edges, &mut state).map_err(|id| GrammarError::UnaryCycle {
                    name: self.names[id].clone(),
                })?;
            }
        }
        Ok(())
    }

    pub fn start(&self) -> SymbolId {
        self.start
    }

    pub fn version(&self) -> Option<&str> {
        self.version.as_deref()
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    pub fn rules(&self) -> &[GrammarRule] {
        &self.rules
    }

    pub fn name(&self, id: SymbolId) -> &str {
        &self.names[id]
    }

    pub fn nonterminal_count(&self) -> usize {
        self.names.len()
    }

    pub(crate) fn rules_for(&self, id: SymbolId) -> &[usize] {
        &self.rules_by_lhs[id]
    }

    pub fn rule_display(&self, idx: usize) -> String {
        let rule = &self.rules[idx];
        let rhs: Vec<String> = rule
            .rhs
            .iter()
            .map(|sym| match sym {
                GrammarSymbol::Nonterminal(id) => self.names[*id].clone(),
                GrammarSymbol::Terminal(cat) => format!("<{cat}>"),
            })
            .collect();
        format!("{} -> {}", self.names[rule.lhs], rhs.join(" "))
    }
}

/// Parses a token sequence into the packed forest of all derivations. An
/// empty forest signals rejection.
pub fn parse<S: AsRef<str>>(tokens: &[S], grammar: &Grammar, lexicon: &Lexicon) -> ParseForest {
    let tokens: Vec<String> = tokens.iter().map(|t| t.as_ref().to_string()).collect();
    let caps: Vec<TokenCaps> = tokens.iter().map(|t| token_caps(t, lexicon)).collect();
    let spans = earley::recognize(&tokens, &caps, grammar);
    forest::build(tokens, &caps, grammar, &spans)
}
