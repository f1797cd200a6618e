//! The shared packed parse forest: every derivation of the input, with
//! common subtrees stored once. Enumeration order is canonical — packed
//! alternatives are ordered by (rule index, split points) and child
//! choices vary rightmost-first — so ties elsewhere break reproducibly.

use std::collections::HashMap;

use super::earley::CompletedSpans;
use super::{Grammar, GrammarSymbol, SymbolId, TerminalCategory, TokenCaps};

type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum ChildRef {
    Node(NodeId),
    Leaf {
        position: usize,
        category: TerminalCategory,
    },
}

#[derive(Debug, Clone)]
pub(crate) struct PackedAlt {
    pub(crate) rule: usize,
    pub(crate) children: Vec<ChildRef>,
}

#[derive(Debug, Clone)]
pub(crate) struct ForestNode {
    pub(crate) label: String,
    pub(crate) alts: Vec<PackedAlt>,
}

/// All derivations of one token sequence. Empty when the sequence was
/// rejected.
#[derive(Debug, Clone)]
pub struct ParseForest {
    tokens: Vec<String>,
    pub(crate) nodes: Vec<ForestNode>,
    pub(crate) root: Option<NodeId>,
}

/// One derivation. Leaves carry the terminal category that matched, which
/// is what scoring and tagging read.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseTree {
    Branch {
        label: String,
        rule: usize,
        children: Vec<ParseTree>,
    },
    Leaf {
        surface: String,
        category: TerminalCategory,
        position: usize,
    },
}

impl ParseTree {
    /// Canonical bracketing: `[Label child child ...]` with bare leaf
    /// surfaces.
    pub fn bracketing(&self) -> String {
        match self {
            ParseTree::Leaf { surface, .. } => surface.clone(),
            ParseTree::Branch {
                label, children, ..
            } => {
                let inner: Vec<String> = children.iter().map(ParseTree::bracketing).collect();
                format!("[{} {}]", label, inner.join(" "))
            }
        }
    }

    /// Leaves in surface order.
    pub fn leaves(&self) -> Vec<&ParseTree> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a ParseTree>) {
        match self {
            ParseTree::Leaf { .. } => out.push(self),
            ParseTree::Branch { children, .. } => {
                for child in children {
                    child.collect_leaves(out);
                }
            }
        }
    }

    pub fn leaf_surfaces(&self) -> Vec<String> {
        self.leaves()
            .iter()
            .map(|leaf| match leaf {
                ParseTree::Leaf { surface, .. } => surface.clone(),
                ParseTree::Branch { .. } => unreachable!(),
            })
            .collect()
    }

    pub fn label(&self) -> &str {
        match self {
            ParseTree::Branch { label, .. } => label,
            ParseTree::Leaf { surface, .. } => surface,
        }
    }
}

pub(crate) fn build(
    tokens: Vec<String>,
    caps: &[TokenCaps],
    grammar: &Grammar,
    spans: &CompletedSpans,
) -> ParseForest {
    let n = tokens.len();
    if n == 0 || !spans.contains(grammar.start(), 0, n) {
        return ParseForest {
            tokens,
            nodes: Vec::new(),
            root: None,
        };
    }
    let mut builder = Builder {
        caps,
        grammar,
        spans,
        nodes: Vec::new(),
        memo: HashMap::new(),
    };
    let root = builder.node(grammar.start(), 0, n);
    ParseForest {
        tokens,
        nodes: builder.nodes,
        root: Some(root),
    }
}

struct Builder<'a> {
    caps: &'a [TokenCaps],
    grammar: &'a Grammar,
    spans: &'a CompletedSpans,
    nodes: Vec<ForestNode>,
    memo: HashMap<(SymbolId, usize, usize), NodeId>,
}

impl Builder<'_> {
    /// Requires that (symbol, start, end) is a completed span.
    fn node(&mut self, symbol: SymbolId, start: usize, end: usize) -> NodeId {
        if let Some(&id) = self.memo.get(&(symbol, start, end)) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(ForestNode {
            label: self.grammar.name(symbol).to_string(),
            alts: Vec::new(),
        });
        self.memo.insert((symbol, start, end), id);

        let mut alts = Vec::new();
        for &rule_idx in self.grammar.rules_for(symbol) {
            let rhs = &self.grammar.rules()[rule_idx].rhs;
            let mut splits = Vec::new();
            self.splits(rhs, 0, start, end, &mut Vec::new(), &mut splits);
            for children in splits {
                alts.push(PackedAlt {
                    rule: rule_idx,
                    children,
                });
            }
        }
        self.nodes[id].alts = alts;
        id
    }

    /// Enumerates, in ascending split-point order, every way the rule tail
    /// `rhs[sym_idx..]` can cover `[pos, end)`.
    fn splits(
        &mut self,
        rhs: &[GrammarSymbol],
        sym_idx: usize,
        pos: usize,
        end: usize,
        acc: &mut Vec<ChildRef>,
        out: &mut Vec<Vec<ChildRef>>,
    ) {
        if sym_idx == rhs.len() {
            if pos == end {
                out.push(acc.clone());
            }
            return;
        }
        let remaining_min = rhs.len() - sym_idx - 1;
        match &rhs[sym_idx] {
            GrammarSymbol::Terminal(cat) => {
                if pos < end && pos + 1 + remaining_min <= end && cat.matches_caps(&self.caps[pos])
                {
                    acc.push(ChildRef::Leaf {
                        position: pos,
                        category: cat.clone(),
                    });
                    self.splits(rhs, sym_idx + 1, pos + 1, end, acc, out);
                    acc.pop();
                }
            }
            GrammarSymbol::Nonterminal(id) => {
                let ends: Vec<usize> = self
                    .spans
                    .ends(*id, pos)
                    .iter()
                    .copied()
                    .filter(|&e| e + remaining_min <= end)
                    .collect();
                for sub_end in ends {
                    let child = self.node(*id, pos, sub_end);
                    acc.push(ChildRef::Node(child));
                    self.splits(rhs, sym_idx + 1, sub_end, end, acc, out);
                    acc.pop();
                }
            }
        }
    }
}

impl ParseForest {
    pub fn is_empty(&self) -> bool {
        self.root.is_none()
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    /// Number of distinct derivations, saturating at `u64::MAX`.
    pub fn tree_count(&self) -> u64 {
        let Some(root) = self.root else {
            return 0;
        };
        let mut memo: Vec<Option<u64>> = vec![None; self.nodes.len()];
        self.count_node(root, &mut memo)
    }

    fn count_node(&self, id: NodeId, memo: &mut Vec<Option<u64>>) -> u64 {
        if let Some(count) = memo[id] {
            return count;
        }
        let mut total: u64 = 0;
        for alt in &self.nodes[id].alts {
            let mut product: u64 = 1;
            for child in &alt.children {
                if let ChildRef::Node(node) = child {
                    product = product.saturating_mul(self.count_node(*node, memo));
                }
            }
            total = total.saturating_add(product);
        }
        memo[id] = Some(total);
        total
    }

    /// Up to `limit` distinct derivations in canonical order.
    pub fn enumerate(&self, limit: usize) -> Vec<ParseTree> {
        let Some(root) = self.root else {
            return Vec::new();
        };
        if limit == 0 {
            return Vec::new();
        }
        let mut memo: HashMap<NodeId, Vec<ParseTree>> = HashMap::new();
        self.trees_of(root, limit, &mut memo);
        memo.remove(&root).unwrap_or_default()
    }

    fn trees_of(&self, id: NodeId, limit: usize, memo: &mut HashMap<NodeId, Vec<ParseTree>>) {
        if memo.contains_key(&id) {
            return;
        }
        // Pre-insert so unary chains cannot recurse back in; the grammar
        // loader rejects unary cycles, so this is just a guard.
        memo.insert(id, Vec::new());
        let node = &self.nodes[id];
        let mut trees: Vec<ParseTree> = Vec::new();
        for alt in &node.alts {
            if trees.len() >= limit {
                break;
            }
            let child_lists: Vec<Vec<ParseTree>> = alt
                .children
                .iter()
                .map(|child| match child {
                    ChildRef::Leaf { position, category } => vec![ParseTree::Leaf {
                        surface: self.tokens[*position].clone(),
                        category: category.clone(),
                        position: *position,
                    }],
                    ChildRef::Node(node) => {
                        self.trees_of(*node, limit, memo);
                        memo[node].clone()
                    }
                })
                .collect();
            if child_lists.iter().any(Vec::is_empty) {
                continue;
            }
            // Odometer over child choices, rightmost child fastest.
            let mut indices = vec![0usize; child_lists.len()];
            'outer: loop {
                let children: Vec<ParseTree> = indices
                    .iter()
                    .zip(&child_lists)
                    .map(|(&i, list)| list[i].clone())
                    .collect();
                trees.push(ParseTree::Branch {
                    label: node.label.clone(),
                    rule: alt.rule,
                    children,
                });
                if trees.len() >= limit {
                    break;
                }
                let mut slot = child_lists.len();
                loop {
                    if slot == 0 {
                        break 'outer;
                    }
                    slot -= 1;
                    indices[slot] += 1;
                    if indices[slot] < child_lists[slot].len() {
                        break;
                    }
                    indices[slot] = 0;
                }
            }
        }
        memo.insert(id, trees);
    }
}
