//! Earley chart recognition. The chart records which nonterminals derive
//! which spans; the forest module turns those facts into derivations.

use std::collections::{HashMap, HashSet};

use super::{Grammar, GrammarSymbol, SymbolId, TokenCaps};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Item {
    rule: u32,
    dot: u16,
    origin: u32,
}

/// Completed spans: every (nonterminal, start, end) the chart proved.
#[derive(Debug, Default)]
pub(crate) struct CompletedSpans {
    by_start: HashMap<(SymbolId, usize), Vec<usize>>,
}

impl CompletedSpans {
    fn record(&mut self, symbol: SymbolId, start: usize, end: usize) {
        let ends = self.by_start.entry((symbol, start)).or_default();
        if let Err(pos) = ends.binary_search(&end) {
            ends.insert(pos, end);
        }
    }

    pub(crate) fn contains(&self, symbol: SymbolId, start: usize, end: usize) -> bool {
        self.by_start
            .get(&(symbol, start))
            .is_some_and(|ends| ends.binary_search(&end).is_ok())
    }

    /// Ascending end positions for derivations of `symbol` starting at
    /// `start`.
    pub(crate) fn ends(&self, symbol: SymbolId, start: usize) -> &[usize] {
        self.by_start
            .get(&(symbol, start))
            .map_or(&[], Vec::as_slice)
    }
}

/// Runs the chart over the tokens. Handles left recursion; stops early
/// when a column empties out (no parse can span the input).
pub(crate) fn recognize(
    tokens: &[String],
    caps: &[TokenCaps],
    grammar: &Grammar,
) -> CompletedSpans {
    let n = tokens.len();
    let mut spans = CompletedSpans::default();
    if n == 0 {
        return spans;
    }

    let mut columns: Vec<Vec<Item>> = vec![Vec::new(); n + 1];
    let mut seen: Vec<HashSet<Item>> = vec![HashSet::new(); n + 1];
    let mut completed_here: HashSet<(SymbolId, u32, usize)> = HashSet::new();

    let push = |columns: &mut Vec<Vec<Item>>,
                    seen: &mut Vec<HashSet<Item>>,
                    col: usize,
                    item: Item| {
        if seen[col].insert(item) {
            columns[col].push(item);
        }
    };

    for &rule in grammar.rules_for(grammar.start()) {
        push(
            &mut columns,
            &mut seen,
            0,
            Item {
                rule: rule as u32,
                dot: 0,
                origin: 0,
            },
        );
    }

    for col in 0..=n {
        let mut i = 0;
        while i < columns[col].len() {
            let item = columns[col][i];
            i += 1;
            let rule = &grammar.rules()[item.rule as usize];
            match rule.rhs.get(item.dot as usize) {
                Some(GrammarSymbol::Nonterminal(id)) => {
                    for &next in grammar.rules_for(*id) {
                        push(
                            &mut columns,
                            &mut seen,
                            col,
                            Item {
                                rule: next as u32,
                                dot: 0,
                                origin: col as u32,
                            },
                        );
                    }
                }
                Some(GrammarSymbol::Terminal(cat)) => {
                    if col < n && cat.matches_caps(&caps[col]) {
                        push(
                            &mut columns,
                            &mut seen,
                            col + 1,
                            Item {
                                dot: item.dot + 1,
                                ..item
                            },
                        );
                    }
                }
                None => {
                    // No epsilon rules, so origin < col and the origin
                    // column is never the one being extended.
                    if !completed_here.insert((rule.lhs, item.origin, col)) {
                        continue;
                    }
                    spans.record(rule.lhs, item.origin as usize, col);
                    let mut advanced = Vec::new();
                    for waiting in &columns[item.origin as usize] {
                        let wrule = &grammar.rules()[waiting.rule as usize];
                        if wrule.rhs.get(waiting.dot as usize)
                            == Some(&GrammarSymbol::Nonterminal(rule.lhs))
                        {
                            advanced.push(Item {
                                dot: waiting.dot + 1,
                                ..*waiting
                            });
                        }
                    }
                    for item in advanced {
                        push(&mut columns, &mut seen, col, item);
                    }
                }
            }
        }
        // Scans out of this column are the only way the next column gets
        // seeded; if none happened the input cannot be spanned.
        if col < n && columns[col + 1].is_empty() {
            break;
        }
    }
    spans
}
