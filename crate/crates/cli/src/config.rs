//! Run configuration: a declarative TOML file, every value overridable by
//! a flag of the same name.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use toki_core::aggregate::{parse_tag_set, validate_tag_sets, DEFAULT_MIN_SUPPORT};
use toki_core::disambiguate::{WeightTable, DEFAULT_AMBIGUITY_CAP};
use toki_core::grammar::Grammar;
use toki_core::lexicon::Lexicon;

use crate::error::StageError;

pub const DEFAULT_THRESHOLD: f64 = 0.8;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Minimum Toki Pona score for a sentence to be kept.
    pub threshold: f64,
    /// Series support below this is flagged low-support.
    pub min_support: u64,
    /// Ambiguity cap: forests with more parses are scored packed.
    pub max_parses: usize,
    /// Grammar rule file; the embedded grammar when absent.
    pub grammar_path: Option<PathBuf>,
    /// Word list file; the embedded lexicon when absent.
    pub lexicon_path: Option<PathBuf>,
    pub weights: WeightTable,
    pub series: Vec<SeriesConfig>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            threshold: DEFAULT_THRESHOLD,
            min_support: DEFAULT_MIN_SUPPORT,
            max_parses: DEFAULT_AMBIGUITY_CAP,
            grammar_path: None,
            lexicon_path: None,
            weights: WeightTable::default(),
            series: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesConfig {
    pub name: String,
    pub word: String,
    pub numerator: Vec<String>,
    pub denominator: Vec<String>,
    /// Corpora to report on; every corpus in the input when empty.
    #[serde(default)]
    pub corpora: Vec<String>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, StageError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| StageError::config(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| StageError::config(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), StageError> {
        if !(0.0..=1.0).contains(&self.threshold) {
            return Err(StageError::config(format!(
                "threshold {} outside [0, 1]",
                self.threshold
            )));
        }
        if self.max_parses == 0 {
            return Err(StageError::config("max_parses must be at least 1"));
        }
        let mut names = std::collections::BTreeSet::new();
        for series in &self.series {
            if series.name.is_empty()
                || !series
                    .name
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
            {
                return Err(StageError::config(format!(
                    "series name {:?} must be a non-empty [A-Za-z0-9_-]+ slug",
                    series.name
                )));
            }
            if !names.insert(&series.name) {
                return Err(StageError::config(format!(
                    "duplicate series name {:?}",
                    series.name
                )));
            }
            if series.word.is_empty() {
                return Err(StageError::config(format!(
                    "series {:?} has an empty word",
                    series.name
                )));
            }
            let numerator = parse_tag_set(&series.numerator)
                .map_err(|e| StageError::config(format!("series {:?}: {e}", series.name)))?;
            let denominator = parse_tag_set(&series.denominator)
                .map_err(|e| StageError::config(format!("series {:?}: {e}", series.name)))?;
            validate_tag_sets(&numerator, &denominator)
                .map_err(|e| StageError::config(format!("series {:?}: {e}", series.name)))?;
        }
        Ok(())
    }
}

/// The grammar and lexicon a run works with.
pub struct Resources {
    pub grammar: Grammar,
    pub lexicon: Lexicon,
}

pub fn load_resources(config: &RunConfig) -> Result<Resources, StageError> {
    let grammar = match &config.grammar_path {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                StageError::config(format!("cannot read grammar {}: {e}", path.display()))
            })?;
            Grammar::parse(&text)
                .map_err(|e| StageError::config(format!("{}: {e}", path.display())))?
        }
        None => Grammar::embedded(),
    };
    let lexicon = match &config.lexicon_path {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                StageError::config(format!("cannot read lexicon {}: {e}", path.display()))
            })?;
            Lexicon::parse(&text)
                .map_err(|e| StageError::config(format!("{}: {e}", path.display())))?
        }
        None => Lexicon::embedded(),
    };
    Ok(Resources { grammar, lexicon })
}
