//! Heuristic scoring of candidate parses and deterministic selection of
//! one parse per sentence. The preferred reading of an ambiguous sentence
//! is the one using closed-class words in their closed-class role.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::grammar::{ChildRef, ParseForest, ParseTree, TerminalCategory};

/// Default cap on enumerated parses per sentence. Forests past the cap
/// are still selected from exactly, via scoring over the packed forest.
pub const DEFAULT_AMBIGUITY_CAP: usize = 64;

/// Weights for the scored features. The relative order
/// (preposition > preverb > pi) encodes closed class beats open class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct WeightTable {
    pub preposition: i64,
    pub preverb: i64,
    pub pi: i64,
}

impl Default for WeightTable {
    fn default() -> Self {
        WeightTable {
            preposition: 10,
            preverb: 8,
            pi: 4,
        }
    }
}

impl WeightTable {
    fn of_category(&self, category: &TerminalCategory) -> i64 {
        match category {
            TerminalCategory::Preposition => self.preposition,
            TerminalCategory::Preverb => self.preverb,
            TerminalCategory::Particle(word) if word == "pi" => self.pi,
            _ => 0,
        }
    }
}

/// A scored parse: the weighted total and the per-feature counts behind
/// it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseScore {
    pub total: i64,
    pub feature_counts: BTreeMap<String, u64>,
}

/// Sums feature weights over the tree: a token consumed prepositionally,
/// as a preverb, or as the pi of a regrouped phrase each count once.
pub fn score_parse(tree: &ParseTree, weights: &WeightTable) -> ParseScore {
    let mut prepositions = 0u64;
    let mut preverbs = 0u64;
    let mut pi_groups = 0u64;
    for leaf in tree.leaves() {
        if let ParseTree::Leaf { category, .. } = leaf {
            match category {
                TerminalCategory::Preposition => prepositions += 1,
                TerminalCategory::Preverb => preverbs += 1,
                TerminalCategory::Particle(word) if word == "pi" => pi_groups += 1,
                _ => {}
            }
        }
    }
    let total = weights.preposition * prepositions as i64
        + weights.preverb * preverbs as i64
        + weights.pi * pi_groups as i64;
    let mut feature_counts = BTreeMap::new();
    feature_counts.insert("preposition".to_string(), prepositions);
    feature_counts.insert("preverb".to_string(), preverbs);
    feature_counts.insert("pi".to_string(), pi_groups);
    ParseScore {
        total,
        feature_counts,
    }
}

/// Outcome of selecting from a forest.
#[derive(Debug, Clone)]
pub struct Selection {
    pub tree: ParseTree,
    pub score: i64,
    /// Distinct derivations in the forest (saturating).
    pub total_parses: u64,
    /// True when the forest exceeded the cap and forest-level scoring
    /// selected the parse.
    pub capped: bool,
}

/// Enumerates (up to `cap`), scores, and returns the maximum-score tree;
/// ties break toward the canonically first tree. Forests larger than the
/// cap are scored over the packed representation instead, which selects
/// the same argmax without enumerating.
pub fn select_best(forest: &ParseForest, weights: &WeightTable, cap: usize) -> Option<ParseTree> {
    select_with_info(forest, weights, cap).map(|selection| selection.tree)
}

pub fn select_with_info(
    forest: &ParseForest,
    weights: &WeightTable,
    cap: usize,
) -> Option<Selection> {
    if forest.is_empty() {
        return None;
    }
    let total_parses = forest.tree_count();
    if total_parses <= cap as u64 {
        let mut best: Option<(i64, ParseTree)> = None;
        for tree in forest.enumerate(cap) {
            let score = score_parse(&tree, weights).total;
            match &best {
                Some((best_score, _)) if *best_score >= score => {}
                _ => best = Some((score, tree)),
            }
        }
        best.map(|(score, tree)| Selection {
            tree,
            score,
            total_parses,
            capped: false,
        })
    } else {
        forest_best(forest, weights).map(|(score, tree)| Selection {
            tree,
            score,
            total_parses,
            capped: true,
        })
    }
}

/// Exact argmax over the packed forest without enumerating. Feature
/// weights are local to leaves, so the best derivation decomposes over
/// packed alternatives; ties break toward earlier alternatives, matching
/// enumeration order.
pub fn forest_best(forest: &ParseForest, weights: &WeightTable) -> Option<(i64, ParseTree)> {
    let root = forest.root?;
    let mut scores: Vec<Option<i64>> = vec![None; forest.nodes.len()];
    let best = best_score(forest, root, weights, &mut scores);
    Some((best, rebuild(forest, root, weights, &scores)))
}

fn best_score(
    forest: &ParseForest,
    id: usize,
    weights: &WeightTable,
    memo: &mut Vec<Option<i64>>,
) -> i64 {
    if let Some(score) = memo[id] {
        return score;
    }
    let mut best = i64::MIN;
    for alt in &forest.nodes[id].alts {
        let mut score = 0i64;
        for child in &alt.children {
            score += match child {
                ChildRef::Leaf { category, .. } => weights.of_category(category),
                ChildRef::Node(node) => best_score(forest, *node, weights, memo),
            };
        }
        best = best.max(score);
    }
    memo[id] = Some(best);
    best
}

fn rebuild(
    forest: &ParseForest,
    id: usize,
    weights: &WeightTable,
    scores: &[Option<i64>],
) -> ParseTree {
    let node = &forest.nodes[id];
    let target = scores[id].expect("score computed before rebuild");
    for alt in &node.alts {
        let score: i64 = alt
            .children
            .iter()
            .map(|child| match child {
                ChildRef::Leaf { category, .. } => weights.of_category(category),
                ChildRef::Node(node) => scores[*node].expect("child scored"),
            })
            .sum();
        if score == target {
            let children = alt
                .children
                .iter()
                .map(|child| match child {
                    ChildRef::Leaf { position, category } => ParseTree::Leaf {
                        surface: forest.tokens()[*position].clone(),
                        category: category.clone(),
                        position: *position,
                    },
                    ChildRef::Node(node) => rebuild(forest, *node, weights, scores),
                })
                .collect();
            return ParseTree::Branch {
                label: node.label.clone(),
                rule: alt.rule,
                children,
            };
        }
    }
    unreachable!("some alternative achieves the node's best score")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{parse, Grammar};
    use crate::lexicon::Lexicon;

    fn setup() -> (Grammar, Lexicon) {
        (Grammar::embedded(), Lexicon::embedded())
    }

    fn forest_of(tokens: &[&str]) -> ParseForest {
        let (g, lex) = setup();
        parse(tokens, &g, &lex)
    }

    #[test]
    fn prepositional_reading_outscores_content_reading() {
        let forest = forest_of(&["jan", "li", "tawa", "sike"]);
        let weights = WeightTable::default();
        let trees = forest.enumerate(10);
        assert_eq!(trees.len(), 2);
        let scores: Vec<i64> = trees
            .iter()
            .map(|t| score_parse(t, &weights).total)
            .collect();
        assert_eq!(scores, vec![0, 10]);
        let best = select_best(&forest, &weights, DEFAULT_AMBIGUITY_CAP).unwrap();
        assert_eq!(score_parse(&best, &weights).total, 10);
        assert!(best.bracketing().contains("[PP tawa"));
    }

    #[test]
    fn featureless_tree_scores_zero() {
        let forest = forest_of(&["jan", "li", "moku", "e", "kili"]);
        let trees = forest.enumerate(10);
        assert_eq!(trees.len(), 1);
        let score = score_parse(&trees[0], &WeightTable::default());
        assert_eq!(score.total, 0);
        assert_eq!(score.feature_counts["preposition"], 0);
        assert_eq!(score.feature_counts["preverb"], 0);
        assert_eq!(score.feature_counts["pi"], 0);
    }

    #[test]
    fn preverb_reading_outscores_head_verb_reading() {
        let forest = forest_of(&["jan", "li", "wile", "moku"]);
        let weights = WeightTable::default();
        let trees = forest.enumerate(10);
        assert_eq!(trees.len(), 2);
        let best = select_best(&forest, &weights, DEFAULT_AMBIGUITY_CAP).unwrap();
        let score = score_parse(&best, &weights);
        assert_eq!(score.total, 8);
        assert_eq!(score.feature_counts["preverb"], 1);
    }

    #[test]
    fn single_parse_is_returned_regardless_of_weights() {
        let forest = forest_of(&["moku", "ni", "li", "suwi"]);
        assert_eq!(forest.tree_count(), 1);
        let zero = WeightTable {
            preposition: 0,
            preverb: 0,
            pi: 0,
        };
        let tree = select_best(&forest, &zero, DEFAULT_AMBIGUITY_CAP).unwrap();
        assert_eq!(tree.leaf_surfaces(), ["moku", "ni", "li", "suwi"]);
    }

    #[test]
    fn argmax_is_invariant_under_positive_scaling() {
        let weights = WeightTable::default();
        for tokens in [
            &["jan", "li", "tawa", "sike"][..],
            &["mi", "wile", "moku", "e", "kili"][..],
            &["tomo", "pi", "jan", "pona", "li", "suli"][..],
        ] {
            let forest = forest_of(tokens);
            let base = select_best(&forest, &weights, DEFAULT_AMBIGUITY_CAP).unwrap();
            for scale in [2, 7, 100] {
                let scaled = WeightTable {
                    preposition: weights.preposition * scale,
                    preverb: weights.preverb * scale,
                    pi: weights.pi * scale,
                };
                let tree = select_best(&forest, &scaled, DEFAULT_AMBIGUITY_CAP).unwrap();
                assert_eq!(tree, base, "scale {scale} changed selection for {tokens:?}");
            }
        }
    }

    #[test]
    fn selection_is_deterministic() {
        let forest = forest_of(&["mi", "moku"]);
        let weights = WeightTable::default();
        let a = select_best(&forest, &weights, DEFAULT_AMBIGUITY_CAP).unwrap();
        let b = select_best(&forest, &weights, DEFAULT_AMBIGUITY_CAP).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn empty_forest_selects_nothing() {
        let forest = forest_of(&["li"]);
        assert!(select_best(&forest, &WeightTable::default(), DEFAULT_AMBIGUITY_CAP).is_none());
    }

    #[test]
    fn forest_scoring_agrees_with_enumerated_scoring() {
        let weights = WeightTable::default();
        for tokens in [
            &["jan", "li", "tawa", "sike"][..],
            &["mi", "wile", "moku", "e", "kili", "lon", "tomo"][..],
            &["jan", "pona", "li", "moku", "pona"][..],
            &["tomo", "pi", "jan", "pona", "li", "suli"][..],
            &["mi", "moku"][..],
        ] {
            let forest = forest_of(tokens);
            let enumerated = select_with_info(&forest, &weights, usize::MAX).unwrap();
            let (dp_score, dp_tree) = forest_best(&forest, &weights).unwrap();
            assert_eq!(dp_score, enumerated.score, "score mismatch for {tokens:?}");
            assert_eq!(dp_tree, enumerated.tree, "tree mismatch for {tokens:?}");
        }
    }

    #[test]
    fn capped_selection_still_picks_the_argmax() {
        let forest = forest_of(&["jan", "li", "tawa", "sike"]);
        let weights = WeightTable::default();
        let info = select_with_info(&forest, &weights, 1).unwrap();
        assert!(info.capped);
        assert_eq!(info.score, 10);
        assert_eq!(info.total_parses, 2);
        assert!(info.tree.bracketing().contains("[PP tawa"));
    }
}
