//! Backtracking sub-graph isomorphism between a pattern and a target, which
//! may be a perception graph (predicate satisfaction) or another pattern
//! (predicate implication, giving a subsumption check).

use std::collections::BTreeMap;

use super::graph::{EdgeKind, GraphNode, PerceptionGraph};
use super::pattern::{ColorBox, EdgePredicate, NodePredicate, PerceptionGraphPattern};
use crate::perception::PerceivedProperty;

/// Anything a pattern can be matched against.
pub trait MatchTarget {
    fn node_count(&self) -> usize;
    fn node_ok(&self, predicate: &NodePredicate, node: usize) -> bool;
    fn edge_ok(&self, predicate: &EdgePredicate, from: usize, to: usize) -> bool;
    /// Color boxes of color nodes attached to `object` via a property edge,
    /// in node order; used when relaxing color predicates.
    fn colors_attached(&self, object: usize) -> Vec<ColorBox>;
}

impl MatchTarget for PerceptionGraph {
    fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn node_ok(&self, predicate: &NodePredicate, node: usize) -> bool {
        predicate.satisfies(&self.nodes[node])
    }

    fn edge_ok(&self, predicate: &EdgePredicate, from: usize, to: usize) -> bool {
        self.edges.iter().any(|e| {
            e.from == from
                && e.to == to
                && e.kind == predicate.kind
                && e.scopes.contains(predicate.required_scopes)
        })
    }

    fn colors_attached(&self, object: usize) -> Vec<ColorBox> {
        let mut out = Vec::new();
        for e in self.out_edges(object) {
            if e.kind == EdgeKind::HasProperty {
                if let GraphNode::Property(PerceivedProperty::Color { r, g, b }) = &self.nodes[e.to]
                {
                    out.push(ColorBox::point(*r, *g, *b));
                }
            }
        }
        out
    }
}

/// Matching a pattern against another pattern checks that the first is at
/// least as general: each of its predicates must imply the aligned one.
impl MatchTarget for PerceptionGraphPattern {
    fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn node_ok(&self, predicate: &NodePredicate, node: usize) -> bool {
        predicate.implies(&self.nodes[node])
    }

    fn edge_ok(&self, predicate: &EdgePredicate, from: usize, to: usize) -> bool {
        self.edges
            .iter()
            .any(|e| e.from == from && e.to == to && predicate.implies(&e.predicate))
    }

    fn colors_attached(&self, object: usize) -> Vec<ColorBox> {
        let mut out = Vec::new();
        for e in self.out_edges(object) {
            if e.predicate.kind == EdgeKind::HasProperty {
                match &self.nodes[e.to] {
                    NodePredicate::PropertyEquals(PerceivedProperty::Color { r, g, b }) => {
                        out.push(ColorBox::point(*r, *g, *b));
                    }
                    NodePredicate::ColorInRange(range) => out.push(*range),
                    _ => {}
                }
            }
        }
        out
    }
}

/// Alignment from pattern node index to target node index.
pub type Alignment = BTreeMap<usize, usize>;

/// The deepest alignment reached when no full match exists, and the pattern
/// node that could not be placed — the natural relaxation point.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PartialMatch {
    pub alignment: Alignment,
    pub blocking: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MatchResult {
    pub alignments: Vec<Alignment>,
    pub best_partial: PartialMatch,
}

impl MatchResult {
    pub fn is_full(&self) -> bool {
        !self.alignments.is_empty()
    }

    pub fn first(&self) -> Option<&Alignment> {
        self.alignments.first()
    }

    /// Fraction of pattern nodes aligned by the best attempt; 1.0 on a full
    /// match.
    pub fn match_ratio(&self, pattern: &PerceptionGraphPattern) -> f64 {
        if pattern.nodes.is_empty() || self.is_full() {
            return 1.0;
        }
        self.best_partial.alignment.len() as f64 / pattern.nodes.len() as f64
    }
}

#[derive(Debug, Clone, Copy)]
pub struct MatchOptions {
    /// Stop at the first full alignment found.
    pub first_only: bool,
    /// Hard cap on collected alignments regardless of `first_only`.
    pub max_alignments: usize,
}

impl Default for MatchOptions {
    fn default() -> MatchOptions {
        MatchOptions {
            first_only: true,
            max_alignments: 64,
        }
    }
}

/// Deterministic pattern-node visit order: start with the most selective
/// predicate, then greedily extend by connectivity to already-placed nodes so
/// edge constraints prune early.
fn visit_order(pattern: &PerceptionGraphPattern) -> Vec<usize> {
    let n = pattern.nodes.len();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let neighbor_count = |node: usize, placed: &[bool]| {
        pattern
            .edges
            .iter()
            .filter(|e| (e.from == node && placed[e.to]) || (e.to == node && placed[e.from]))
            .count()
    };
    for _ in 0..n {
        let next = (0..n)
            .filter(|i| !placed[*i])
            .min_by_key(|&i| {
                let connectivity = neighbor_count(i, &placed);
                // Most connected first (negated), then most selective, then
                // lowest index for determinism.
                (usize::MAX - connectivity, pattern.nodes[i].selectivity(), i)
            })
            .expect("unplaced node remains");
        placed[next] = true;
        order.push(next);
    }
    order
}

struct Search<'a, T: MatchTarget> {
    pattern: &'a PerceptionGraphPattern,
    target: &'a T,
    order: Vec<usize>,
    options: MatchOptions,
    assignment: Vec<Option<usize>>,
    used: Vec<bool>,
    result: MatchResult,
    best_depth: usize,
}

impl<'a, T: MatchTarget> Search<'a, T> {
    fn edges_consistent(&self, pattern_node: usize, target_node: usize) -> bool {
        for e in &self.pattern.edges {
            if e.from == pattern_node {
                if let Some(other) = self.assignment[e.to] {
                    if !self.target.edge_ok(&e.predicate, target_node, other) {
                        return false;
                    }
                }
            }
            if e.to == pattern_node {
                if let Some(other) = self.assignment[e.from] {
                    if !self.target.edge_ok(&e.predicate, other, target_node) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn current_alignment(&self) -> Alignment {
        self.assignment
            .iter()
            .enumerate()
            .filter_map(|(p, t)| t.map(|t| (p, t)))
            .collect()
    }

    /// Returns true when enough alignments were collected to stop.
    fn recurse(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            self.result.alignments.push(self.current_alignment());
            return self.options.first_only
                || self.result.alignments.len() >= self.options.max_alignments;
        }
        let pattern_node = self.order[depth];
        let predicate = &self.pattern.nodes[pattern_node];
        let mut any_candidate = false;
        for t in 0..self.target.node_count() {
            if self.used[t]
                || !self.target.node_ok(predicate, t)
                || !self.edges_consistent(pattern_node, t)
            {
                continue;
            }
            any_candidate = true;
            self.assignment[pattern_node] = Some(t);
            self.used[t] = true;
            let done = self.recurse(depth + 1);
            self.used[t] = false;
            self.assignment[pattern_node] = None;
            if done {
                return true;
            }
        }
        if !any_candidate && depth >= self.best_depth {
            self.best_depth = depth;
            self.result.best_partial = PartialMatch {
                alignment: self.current_alignment(),
                blocking: Some(pattern_node),
            };
        }
        false
    }
}

/// Match `pattern` against `target`. An empty pattern matches anything with
/// one empty alignment.
pub fn match_pattern<T: MatchTarget>(
    pattern: &PerceptionGraphPattern,
    target: &T,
    options: MatchOptions,
) -> MatchResult {
    if pattern.nodes.is_empty() {
        return MatchResult {
            alignments: vec![Alignment::new()],
            best_partial: PartialMatch::default(),
        };
    }
    let mut search = Search {
        pattern,
        target,
        order: visit_order(pattern),
        options,
        assignment: vec![None; pattern.nodes.len()],
        used: vec![false; target.node_count()],
        result: MatchResult::default(),
        best_depth: 0,
    };
    search.recurse(0);
    search.result
}

/// Does the pattern fully match the perception graph?
pub fn matches_graph(pattern: &PerceptionGraphPattern, graph: &PerceptionGraph) -> bool {
    match_pattern(pattern, graph, MatchOptions::default()).is_full()
}

/// `general` subsumes `specific` when every graph `specific` matches,
/// `general` also matches: each node and edge of `general` embeds into
/// `specific` under predicate implication.
pub fn subsumes(general: &PerceptionGraphPattern, specific: &PerceptionGraphPattern) -> bool {
    match_pattern(general, specific, MatchOptions::default()).is_full()
}
