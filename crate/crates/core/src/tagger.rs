//! Walks a selected parse tree and emits one part-of-speech tag per
//! token. Tags are positional: the same word is a noun, modifier, or verb
//! depending on where the parse puts it.

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::disambiguate::{select_with_info, WeightTable};
use crate::grammar::{parse, Grammar, ParseTree, TerminalCategory};
use crate::lexicon::Lexicon;
use crate::textprep::ScoredSentence;

/// The eight part-of-speech tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Tag {
    /// First or only word in a subject, direct object, or prepositional
    /// object.
    Noun,
    /// Modifier directly following a noun or verb.
    Mod,
    /// Predicate head with no direct object supplied afterwards.
    IVerb,
    /// Predicate head with a direct object supplied afterwards.
    TVerb,
    /// First word of a phrase used without a complete sentence.
    Intj,
    /// Preposition interpreted prepositionally.
    Prep,
    /// Preverb preceding the main predicate head.
    Preverb,
    /// Grammatical particles and ordinal numbers.
    Part,
}

impl Tag {
    pub const ALL: [Tag; 8] = [
        Tag::Noun,
        Tag::Mod,
        Tag::IVerb,
        Tag::TVerb,
        Tag::Intj,
        Tag::Prep,
        Tag::Preverb,
        Tag::Part,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Tag::Noun => "NOUN",
            Tag::Mod => "MOD",
            Tag::IVerb => "IVERB",
            Tag::TVerb => "TVERB",
            Tag::Intj => "INTJ",
            Tag::Prep => "PREP",
            Tag::Preverb => "PREVERB",
            Tag::Part => "PART",
        }
    }

    pub fn from_name(name: &str) -> Option<Tag> {
        Tag::ALL.into_iter().find(|t| t.name() == name)
    }

    /// IVERB and TVERB are collectively VERB.
    pub fn is_verb(self) -> bool {
        matches!(self, Tag::IVerb | Tag::TVerb)
    }

    /// NOUN, MOD, and VERB are collectively CONTENT.
    pub fn is_content(self) -> bool {
        matches!(self, Tag::Noun | Tag::Mod) || self.is_verb()
    }
}

impl std::fmt::Display for Tag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A surface token paired with its tag.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedToken {
    pub surface: String,
    pub tag: Tag,
    #[serde(skip)]
    pub position: usize,
}

/// A tagged sentence, keeping the timestamp and corpus of the scored
/// sentence that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaggedSentence {
    pub tokens: Vec<TaggedToken>,
    pub timestamp: DateTime<Utc>,
    #[serde(rename = "corpus")]
    pub corpus_id: String,
}

/// A tree shape the tagger has no rule for. Trees from the shipped
/// grammar never trigger this; it signals grammar/tagger drift.
#[derive(Debug, Error)]
pub enum TagError {
    #[error("no tagging rule for {label} node over {summary:?}")]
    UnknownShape { label: String, summary: String },
    #[error("token {position} ({surface:?}) was left untagged")]
    Untagged { position: usize, surface: String },
}

struct Slots {
    tags: Vec<Option<Tag>>,
}

impl Slots {
    fn set(&mut self, position: usize, tag: Tag) {
        self.tags[position] = Some(tag);
    }
}

fn shape_error(node: &ParseTree) -> TagError {
    let (label, summary) = match node {
        ParseTree::Branch {
            label, children, ..
        } => (
            label.clone(),
            children
                .iter()
                .map(|c| c.label().to_string())
                .collect::<Vec<_>>()
                .join(" "),
        ),
        ParseTree::Leaf {
            surface, category, ..
        } => (format!("<{category}>"), surface.clone()),
    };
    TagError::UnknownShape { label, summary }
}

fn is_particle_leaf(node: &ParseTree, word: &str) -> bool {
    matches!(node, ParseTree::Leaf { category: TerminalCategory::Particle(p), .. } if p == word)
}

fn leaf_category(node: &ParseTree) -> Option<&TerminalCategory> {
    match node {
        ParseTree::Leaf { category, .. } => Some(category),
        ParseTree::Branch { .. } => None,
    }
}

fn leaf_position(node: &ParseTree) -> Option<usize> {
    match node {
        ParseTree::Leaf { position, .. } => Some(*position),
        ParseTree::Branch { .. } => None,
    }
}

/// Tags every token of a selected parse. Each token receives exactly one
/// tag; the predicate head is transitive iff an e phrase follows in the
/// same predicate.
pub fn tag(tree: &ParseTree) -> Result<Vec<TaggedToken>, TagError> {
    let leaves = tree.leaves();
    let mut slots = Slots {
        tags: vec![None; leaves.len()],
    };
    tag_sentence(tree, &mut slots)?;
    let mut tokens = Vec::with_capacity(leaves.len());
    for (position, leaf) in leaves.iter().enumerate() {
        let ParseTree::Leaf { surface, .. } = leaf else {
            unreachable!()
        };
        match slots.tags[position] {
            Some(tag) => tokens.push(TaggedToken {
                surface: surface.clone(),
                tag,
                position,
            }),
            None => {
                return Err(TagError::Untagged {
                    position,
                    surface: surface.clone(),
                })
            }
        }
    }
    Ok(tokens)
}

// S and CL share their shapes.
fn tag_sentence(node: &ParseTree, slots: &mut Slots) -> Result<(), TagError> {
    let ParseTree::Branch {
        label, children, ..
    } = node
    else {
        return Err(shape_error(node));
    };
    if label != "S" && label != "CL" {
        return Err(shape_error(node));
    }
    match children.as_slice() {
        // interjection: a phrase without a complete sentence
        [phrase] => tag_subject_like(phrase, slots, Tag::Intj),
        // bare mi/sina subject
        [pron, predicate]
            if leaf_category(pron) == Some(&TerminalCategory::Pronoun) =>
        {
            slots.set(leaf_position(pron).unwrap(), Tag::Noun);
            tag_predicate(predicate, slots)
        }
        // o imperative
        [o, predicate] if is_particle_leaf(o, "o") => {
            slots.set(leaf_position(o).unwrap(), Tag::Part);
            tag_predicate(predicate, slots)
        }
        // bare vocative
        [subject, o] if is_particle_leaf(o, "o") => {
            tag_subject_like(subject, slots, Tag::Noun)?;
            slots.set(leaf_position(o).unwrap(), Tag::Part);
            Ok(())
        }
        // subject li predicate, possibly chained through CL
        [subject, li, predicate] if is_particle_leaf(li, "li") => {
            match subject {
                ParseTree::Branch { label, .. } if label == "CL" => {
                    tag_sentence(subject, slots)?
                }
                _ => tag_subject_like(subject, slots, Tag::Noun)?,
            }
            slots.set(leaf_position(li).unwrap(), Tag::Part);
            tag_predicate(predicate, slots)
        }
        // subject o predicate
        [subject, o, predicate] if is_particle_leaf(o, "o") => {
            tag_subject_like(subject, slots, Tag::Noun)?;
            slots.set(leaf_position(o).unwrap(), Tag::Part);
            tag_predicate(predicate, slots)
        }
        // context la sentence
        [context, la, sentence] if is_particle_leaf(la, "la") => {
            tag_context_node(context, slots)?;
            slots.set(leaf_position(la).unwrap(), Tag::Part);
            tag_sentence(sentence, slots)
        }
        _ => Err(shape_error(node)),
    }
}

// P, CSUB, or ALT in a subject-like position.
fn tag_subject_like(node: &ParseTree, slots: &mut Slots, first_role: Tag) -> Result<(), TagError> {
    match node {
        ParseTree::Branch { label, .. } if label == "P" => tag_phrase(node, slots, first_role),
        ParseTree::Branch { label, .. } if label == "CSUB" => tag_csub(node, slots, first_role),
        ParseTree::Branch { label, .. } if label == "ALT" => tag_alt(node, slots, first_role),
        _ => Err(shape_error(node)),
    }
}

fn tag_context_node(node: &ParseTree, slots: &mut Slots) -> Result<(), TagError> {
    let ParseTree::Branch {
        label, children, ..
    } = node
    else {
        return Err(shape_error(node));
    };
    if label != "CTX" || children.len() != 1 {
        return Err(shape_error(node));
    }
    let inner = &children[0];
    match inner {
        ParseTree::Branch { label, .. } if label == "S" => tag_sentence(inner, slots),
        _ => tag_phrase(inner, slots, Tag::Noun),
    }
}

fn tag_predicate(node: &ParseTree, slots: &mut Slots) -> Result<(), TagError> {
    match node {
        ParseTree::Branch { label, .. } if label == "P" => tag_phrase(node, slots, Tag::IVerb),
        ParseTree::Branch { label, .. } if label == "ALT" => tag_alt(node, slots, Tag::IVerb),
        ParseTree::Branch {
            label, children, ..
        } if label == "PRED" => {
            let has_object = children.iter().any(
                |child| matches!(child, ParseTree::Branch { label, .. } if label == "ETAIL"),
            );
            for child in children {
                match child {
                    ParseTree::Branch { label, .. } if label == "PVCH" => {
                        tag_preverb_chain(child, slots)?
                    }
                    ParseTree::Branch { label, .. } if label == "P" => {
                        let head_role = if has_object { Tag::TVerb } else { Tag::IVerb };
                        tag_phrase(child, slots, head_role)?
                    }
                    ParseTree::Branch { label, .. } if label == "PP" => tag_pp(child, slots)?,
                    ParseTree::Branch { label, .. } if label == "ETAIL" => {
                        tag_etail(child, slots)?
                    }
                    ParseTree::Branch { label, .. } if label == "PTAIL" => {
                        tag_ptail(child, slots)?
                    }
                    _ => return Err(shape_error(node)),
                }
            }
            Ok(())
        }
        _ => Err(shape_error(node)),
    }
}

fn tag_preverb_chain(node: &ParseTree, slots: &mut Slots) -> Result<(), TagError> {
    let ParseTree::Branch { children, .. } = node else {
        return Err(shape_error(node));
    };
    for child in children {
        match child {
            ParseTree::Leaf {
                category: TerminalCategory::Preverb,
                position,
                ..
            } => slots.set(*position, Tag::Preverb),
            ParseTree::Branch { label, .. } if label == "PVCH" => {
                tag_preverb_chain(child, slots)?
            }
            _ => return Err(shape_error(node)),
        }
    }
    Ok(())
}

fn tag_phrase(node: &ParseTree, slots: &mut Slots, first_role: Tag) -> Result<(), TagError> {
    let ParseTree::Branch {
        label, children, ..
    } = node
    else {
        return Err(shape_error(node));
    };
    if label != "P" {
        return Err(shape_error(node));
    }
    match children.as_slice() {
        [content] => tag_content(content, slots, first_role),
        [head, tail] => {
            tag_phrase(head, slots, first_role)?;
            match tail {
                ParseTree::Branch { label, .. } if label == "C" => {
                    tag_content(tail, slots, Tag::Mod)
                }
                ParseTree::Branch { label, .. } if label == "ORD" => tag_ordinal(tail, slots),
                ParseTree::Branch { label, .. } if label == "PI" => tag_pi(tail, slots),
                ParseTree::Leaf {
                    category: TerminalCategory::Name,
                    position,
                    ..
                } => {
                    // names must be adjectives
                    slots.set(*position, Tag::Mod);
                    Ok(())
                }
                _ => Err(shape_error(node)),
            }
        }
        _ => Err(shape_error(node)),
    }
}

fn tag_content(node: &ParseTree, slots: &mut Slots, role: Tag) -> Result<(), TagError> {
    let ParseTree::Branch {
        label, children, ..
    } = node
    else {
        return Err(shape_error(node));
    };
    if label != "C" {
        return Err(shape_error(node));
    }
    match children.as_slice() {
        [ParseTree::Leaf { position, .. }] => {
            slots.set(*position, role);
            Ok(())
        }
        _ => Err(shape_error(node)),
    }
}

// Everything inside a pi group modifies the head phrase.
fn tag_pi(node: &ParseTree, slots: &mut Slots) -> Result<(), TagError> {
    let ParseTree::Branch {
        label, children, ..
    } = node
    else {
        return Err(shape_error(node));
    };
    if label != "PI" {
        return Err(shape_error(node));
    }
    for child in children {
        match child {
            leaf if is_particle_leaf(leaf, "pi") => {
                slots.set(leaf_position(leaf).unwrap(), Tag::Part)
            }
            ParseTree::Branch { label, .. } if label == "P" => {
                tag_phrase(child, slots, Tag::Mod)?
            }
            ParseTree::Branch { label, .. } if label == "C" => {
                tag_content(child, slots, Tag::Mod)?
            }
            ParseTree::Branch { label, .. } if label == "PI" => tag_pi(child, slots)?,
            ParseTree::Branch { label, .. } if label == "ORD" => tag_ordinal(child, slots)?,
            ParseTree::Leaf {
                category: TerminalCategory::Name,
                position,
                ..
            } => slots.set(*position, Tag::Mod),
            _ => return Err(shape_error(node)),
        }
    }
    Ok(())
}

// Ordinal words group with the particles.
fn tag_ordinal(node: &ParseTree, slots: &mut Slots) -> Result<(), TagError> {
    let ParseTree::Branch {
        label, children, ..
    } = node
    else {
        return Err(shape_error(node));
    };
    if label != "ORD" {
        return Err(shape_error(node));
    }
    for child in children {
        match child {
            ParseTree::Leaf { position, .. } => slots.set(*position, Tag::Part),
            ParseTree::Branch { label, .. } if label == "ORD" => tag_ordinal(child, slots)?,
            _ => return Err(shape_error(node)),
        }
    }
    Ok(())
}

fn tag_pp(node: &ParseTree, slots: &mut Slots) -> Result<(), TagError> {
    let ParseTree::Branch {
        label, children, ..
    } = node
    else {
        return Err(shape_error(node));
    };
    if label != "PP" {
        return Err(shape_error(node));
    }
    match children.as_slice() {
        [ParseTree::Leaf {
            category: TerminalCategory::Preposition,
            position,
            ..
        }, object] => {
            slots.set(*position, Tag::Prep);
            tag_phrase(object, slots, Tag::Noun)
        }
        _ => Err(shape_error(node)),
    }
}

fn tag_etail(node: &ParseTree, slots: &mut Slots) -> Result<(), TagError> {
    let ParseTree::Branch {
        label, children, ..
    } = node
    else {
        return Err(shape_error(node));
    };
    if label != "ETAIL" {
        return Err(shape_error(node));
    }
    for child in children {
        match child {
            ParseTree::Branch { label, .. } if label == "ETAIL" => tag_etail(child, slots)?,
            ParseTree::Branch { label, .. } if label == "EP" => tag_ep(child, slots)?,
            _ => return Err(shape_error(node)),
        }
    }
    Ok(())
}

fn tag_ep(node: &ParseTree, slots: &mut Slots) -> Result<(), TagError> {
    let ParseTree::Branch {
        label, children, ..
    } = node
    else {
        return Err(shape_error(node));
    };
    if label != "EP" {
        return Err(shape_error(node));
    }
    match children.as_slice() {
        [e, object] if is_particle_leaf(e, "e") => {
            slots.set(leaf_position(e).unwrap(), Tag::Part);
            match object {
                ParseTree::Branch { label, .. } if label == "ALT" => {
                    tag_alt(object, slots, Tag::Noun)
                }
                _ => tag_phrase(object, slots, Tag::Noun),
            }
        }
        _ => Err(shape_error(node)),
    }
}

fn tag_ptail(node: &ParseTree, slots: &mut Slots) -> Result<(), TagError> {
    let ParseTree::Branch {
        label, children, ..
    } = node
    else {
        return Err(shape_error(node));
    };
    if label != "PTAIL" {
        return Err(shape_error(node));
    }
    for child in children {
        match child {
            ParseTree::Branch { label, .. } if label == "PTAIL" => tag_ptail(child, slots)?,
            ParseTree::Branch { label, .. } if label == "PP" => tag_pp(child, slots)?,
            _ => return Err(shape_error(node)),
        }
    }
    Ok(())
}

fn tag_csub(node: &ParseTree, slots: &mut Slots, role: Tag) -> Result<(), TagError> {
    let ParseTree::Branch {
        label, children, ..
    } = node
    else {
        return Err(shape_error(node));
    };
    if label != "CSUB" {
        return Err(shape_error(node));
    }
    match children.as_slice() {
        [left, en, right] if is_particle_leaf(en, "en") => {
            match left {
                ParseTree::Branch { label, .. } if label == "CSUB" => {
                    tag_csub(left, slots, role)?
                }
                _ => tag_phrase(left, slots, role)?,
            }
            slots.set(leaf_position(en).unwrap(), Tag::Part);
            tag_phrase(right, slots, role)
        }
        _ => Err(shape_error(node)),
    }
}

fn tag_alt(node: &ParseTree, slots: &mut Slots, role: Tag) -> Result<(), TagError> {
    let ParseTree::Branch {
        label, children, ..
    } = node
    else {
        return Err(shape_error(node));
    };
    if label != "ALT" {
        return Err(shape_error(node));
    }
    match children.as_slice() {
        [left, anu, right] if is_particle_leaf(anu, "anu") => {
            match left {
                ParseTree::Branch { label, .. } if label == "ALT" => {
                    tag_alt(left, slots, role)?
                }
                _ => tag_phrase(left, slots, role)?,
            }
            slots.set(leaf_position(anu).unwrap(), Tag::Part);
            tag_phrase(right, slots, role)
        }
        _ => Err(shape_error(node)),
    }
}

/// Pipeline tally.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TagStats {
    pub sentences: u64,
    pub tagged: u64,
    /// Sentences the grammar rejected (empty forest).
    pub rejected: u64,
    /// Sentences whose forest exceeded the ambiguity cap.
    pub ambiguity_capped: u64,
}

/// Parses, selects, and tags each sentence; rejected sentences are
/// counted and excluded. Output preserves input order.
pub fn tag_pipeline(
    sentences: &[ScoredSentence],
    grammar: &Grammar,
    lexicon: &Lexicon,
    weights: &WeightTable,
    cap: usize,
) -> Result<(Vec<TaggedSentence>, TagStats), TagError> {
    let mut out = Vec::new();
    let mut stats = TagStats::default();
    for sentence in sentences {
        stats.sentences += 1;
        let forest = parse(&sentence.tokens, grammar, lexicon);
        let Some(selection) = select_with_info(&forest, weights, cap) else {
            stats.rejected += 1;
            continue;
        };
        if selection.capped {
            stats.ambiguity_capped += 1;
        }
        let tokens = tag(&selection.tree)?;
        stats.tagged += 1;
        out.push(TaggedSentence {
            tokens,
            timestamp: sentence.timestamp,
            corpus_id: sentence.corpus_id.clone(),
        });
    }
    Ok((out, stats))
}
