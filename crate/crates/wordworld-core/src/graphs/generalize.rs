//! Greedy pattern relaxation: when a pattern fails to match, weaken it at the
//! blocking predicate — widening color ranges where an observed color is
//! available, deleting the predicate otherwise — until it matches or becomes
//! useless. Pattern intersection reuses the same loop with a pattern as the
//! match target.

use std::collections::BTreeSet;

use crate::perception::PerceivedProperty;

use super::graph::{EdgeKind, PerceptionGraph};
use super::matching::{match_pattern, MatchOptions, MatchTarget};
use super::pattern::{ColorBox, NodePredicate, PerceptionGraphPattern, SlotId};

/// The color box a predicate currently covers, if it is a color predicate.
fn color_box_of(predicate: &NodePredicate) -> Option<ColorBox> {
    match predicate {
        NodePredicate::PropertyEquals(PerceivedProperty::Color { r, g, b }) => {
            Some(ColorBox::point(*r, *g, *b))
        }
        NodePredicate::ColorInRange(range) => Some(*range),
        _ => None,
    }
}

/// The object pattern node owning a color node via a property edge.
fn property_owner(pattern: &PerceptionGraphPattern, color_node: usize) -> Option<usize> {
    pattern
        .in_edges(color_node)
        .find(|e| e.predicate.kind == EdgeKind::HasProperty)
        .map(|e| e.from)
}

/// Remove `node` and everything that should fall with it: sub-part
/// descendants, then any weakly-connected fragment that no longer carries a
/// slot (or, for slot-free patterns, is separated from the first surviving
/// object node). Returns `None` if a slot was lost or nothing survives.
fn delete_node(
    pattern: &PerceptionGraphPattern,
    node: usize,
    required_slots: &BTreeSet<SlotId>,
) -> Option<PerceptionGraphPattern> {
    let mut remove = BTreeSet::new();
    let mut stack = vec![node];
    while let Some(n) = stack.pop() {
        if !remove.insert(n) {
            continue;
        }
        for e in pattern.out_edges(n) {
            if e.predicate.kind == EdgeKind::SubPart {
                stack.push(e.to);
            }
        }
    }
    let keep: BTreeSet<usize> = (0..pattern.nodes.len())
        .filter(|n| !remove.contains(n))
        .collect();
    if keep.is_empty() {
        return None;
    }
    let (restricted, _) = pattern.restricted_to(&keep);

    // Fragment cleanup on the reindexed pattern.
    let components = restricted.components();
    let survivors: BTreeSet<usize> = if required_slots.is_empty() {
        // Keep the component containing the first object-like node.
        let anchor = restricted.nodes.iter().position(|p| {
            matches!(
                p,
                NodePredicate::AnyObject | NodePredicate::MatchedConceptIs(_)
            )
        })?;
        components.into_iter().find(|c| c.contains(&anchor))?
    } else {
        let mut keep = BTreeSet::new();
        for component in components {
            let has_slot = component
                .iter()
                .any(|&n| matches!(restricted.nodes[n], NodePredicate::Slot(_)));
            if has_slot {
                keep.extend(component);
            }
        }
        keep
    };
    if survivors.is_empty() {
        return None;
    }
    let (result, _) = restricted.restricted_to(&survivors);
    if &result.slots().keys().cloned().collect::<BTreeSet<_>>() != required_slots {
        return None;
    }
    Some(result)
}

/// Relax `pattern` until it fully matches `target`, or give up. Slots are
/// sacred: a relaxation that would drop one fails instead. Each surviving
/// predicate is the original or a widening of it, so the result subsumes the
/// input pattern.
fn generalize_against<T: MatchTarget>(
    pattern: &PerceptionGraphPattern,
    target: &T,
) -> Option<PerceptionGraphPattern> {
    let required_slots: BTreeSet<SlotId> = pattern.slots().keys().cloned().collect();
    let mut current = pattern.clone();
    // Track color nodes already widened once, by predicate value, so a widen
    // that does not unblock falls through to deletion instead of looping.
    let mut widened: BTreeSet<NodePredicate> = BTreeSet::new();
    let max_steps = pattern.nodes.len() * 3 + 10;
    for _ in 0..max_steps {
        let result = match_pattern(&current, target, MatchOptions::default());
        if result.is_full() {
            return Some(current);
        }
        let blocking = result.best_partial.blocking?;
        let predicate = current.nodes[blocking].clone();
        if matches!(predicate, NodePredicate::Slot(_)) {
            return None;
        }
        // A concept mismatch (e.g. Mom vs Dad as possessor) relaxes to "any
        // object" before falling back to deletion.
        if matches!(predicate, NodePredicate::MatchedConceptIs(_)) {
            current.nodes[blocking] = NodePredicate::AnyObject;
            continue;
        }
        let mut deleted = false;
        if let Some(range) = color_box_of(&predicate) {
            let observed = property_owner(&current, blocking)
                .and_then(|owner| result.best_partial.alignment.get(&owner).copied())
                .map(|aligned| target.colors_attached(aligned))
                .unwrap_or_default();
            let to_include = observed.iter().find(|c| !range.contains_box(c));
            match to_include {
                Some(color) if !widened.contains(&predicate) => {
                    let wide = NodePredicate::ColorInRange(range.union(color));
                    widened.insert(wide.clone());
                    current.nodes[blocking] = wide;
                }
                _ => deleted = true,
            }
        } else {
            deleted = true;
        }
        if deleted {
            current = delete_node(&current, blocking, &required_slots)?;
        }
        if current.nodes.is_empty() {
            return None;
        }
    }
    None
}

/// Relax a pattern until it matches a perception graph.
pub fn generalize_to_match(
    pattern: &PerceptionGraphPattern,
    graph: &PerceptionGraph,
) -> Option<PerceptionGraphPattern> {
    generalize_against(pattern, graph)
}

/// Intersection of two patterns: the relaxation of `a` that matches `b`.
/// By construction the result subsumes both inputs.
pub fn intersect(
    a: &PerceptionGraphPattern,
    b: &PerceptionGraphPattern,
) -> Option<PerceptionGraphPattern> {
    generalize_against(a, b)
}
