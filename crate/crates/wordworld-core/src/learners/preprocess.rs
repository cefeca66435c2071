//! Graph preprocessing that runs before the sub-learners: collapsing
//! recognized objects to single concept nodes, and attaching count nodes for
//! repeated objects of the same kind.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::graphs::{CountValue, EdgeKind, GraphNode, PerceptionGraph, ScopeSet};

/// One recognized object: which concept matched, at which object root, and
/// which graph nodes its pattern covered.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recognition {
    pub concept: String,
    pub root: usize,
    pub matched: BTreeSet<usize>,
}

/// Result of collapsing recognitions into concept nodes.
#[derive(Debug, Clone)]
pub struct CollapsedGraph {
    pub graph: PerceptionGraph,
    /// Recognitions that survived overlap resolution, with `root` updated to
    /// the concept node's index in the new graph.
    pub recognitions: Vec<Recognition>,
    /// Old node index → new node index (removed nodes map to their concept
    /// node).
    pub node_map: BTreeMap<usize, usize>,
}

/// Drop recognitions whose matched sets overlap a larger recognition's.
/// Ties resolve toward the lower root index for determinism.
fn resolve_overlaps(graph: &PerceptionGraph, recognitions: &[Recognition]) -> Vec<Recognition> {
    let mut ordered: Vec<&Recognition> = recognitions.iter().collect();
    ordered.sort_by_key(|r| (usize::MAX - r.matched.len(), r.root));
    let mut claimed: BTreeSet<usize> = BTreeSet::new();
    let mut kept = Vec::new();
    for r in ordered {
        if r.root >= graph.nodes.len() || !graph.nodes[r.root].is_object_like() {
            continue;
        }
        if r.matched.iter().any(|n| claimed.contains(n)) {
            continue;
        }
        claimed.extend(r.matched.iter().copied());
        kept.push(r.clone());
    }
    kept.sort_by_key(|r| r.root);
    kept
}

/// Replace each recognized object's matched sub-graph with a single concept
/// node. Satellite structure of the object that the pattern did not cover
/// (for example a color the learned pattern omits) survives, re-attached to
/// the concept node; edges from the rest of the graph are re-routed to it.
pub fn preprocess_recognized_objects(
    graph: &PerceptionGraph,
    recognitions: &[Recognition],
) -> CollapsedGraph {
    let kept = resolve_overlaps(graph, recognitions);

    // Which old nodes disappear into which recognition.
    let mut owner: BTreeMap<usize, usize> = BTreeMap::new(); // old node → kept index
    for (i, r) in kept.iter().enumerate() {
        let boundary = graph.object_boundary(r.root);
        for &n in r.matched.intersection(&boundary) {
            owner.insert(n, i);
        }
        owner.insert(r.root, i);
    }

    let mut out = PerceptionGraph {
        dynamic: graph.dynamic,
        ..Default::default()
    };
    let mut node_map: BTreeMap<usize, usize> = BTreeMap::new();
    let mut concept_node: BTreeMap<usize, usize> = BTreeMap::new(); // kept index → new node
    for (old, node) in graph.nodes.iter().enumerate() {
        match owner.get(&old) {
            None => {
                let new = out.add_node(node.clone());
                node_map.insert(old, new);
            }
            Some(&i) if kept[i].root == old => {
                let debug = match node {
                    GraphNode::Object { debug } | GraphNode::MatchedConcept { debug, .. } => {
                        debug.clone()
                    }
                    _ => String::new(),
                };
                let new = out.add_node(GraphNode::MatchedConcept {
                    concept: kept[i].concept.clone(),
                    debug,
                });
                concept_node.insert(i, new);
                node_map.insert(old, new);
            }
            Some(_) => {} // non-root matched node: mapped below
        }
    }
    for (&old, &i) in &owner {
        node_map.entry(old).or_insert_with(|| concept_node[&i]);
    }

    for e in &graph.edges {
        let from = node_map[&e.from];
        let to = node_map[&e.to];
        if from == to {
            continue; // edge internal to a collapsed sub-graph
        }
        out.add_edge(from, to, e.kind, e.scopes);
    }

    let recognitions = kept
        .into_iter()
        .enumerate()
        .map(|(i, mut r)| {
            r.root = concept_node[&i];
            r.matched = [concept_node[&i]].into();
            r
        })
        .collect();
    CollapsedGraph {
        graph: out,
        recognitions,
        node_map,
    }
}

fn count_value(n: usize) -> CountValue {
    match n {
        2 => CountValue::Two,
        3 => CountValue::Three,
        _ => CountValue::Many,
    }
}

/// When two or more concept nodes share a concept, attach a count node to
/// each so the attribute machinery can learn number words.
pub fn plural_preprocess(graph: &PerceptionGraph) -> PerceptionGraph {
    let mut groups: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, node) in graph.nodes.iter().enumerate() {
        if let GraphNode::MatchedConcept { concept, .. } = node {
            groups.entry(concept).or_default().push(i);
        }
    }
    let mut out = graph.clone();
    let scope = if graph.dynamic {
        ScopeSet::BOTH
    } else {
        ScopeSet::BEFORE
    };
    for members in groups.values() {
        if members.len() < 2 {
            continue;
        }
        let value = count_value(members.len());
        for &m in members {
            let count = out.add_node(GraphNode::Count(value));
            out.add_edge(m, count, EdgeKind::HasCount, scope);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::testfix::graph_of;
    use crate::graphs::{matches_graph, NodePredicate, PerceptionGraphPattern};
    use crate::perception::PerceivedProperty;
    use crate::situation::{Phase, Region, SituationBuilder};

    fn ball_on_ground() -> PerceptionGraph {
        graph_of(
            &SituationBuilder::new()
                .object_with("ball_0", "ball", &["red"], true)
                .in_region("ball_0", Region::on("ground"), Phase::Before)
                .build(),
        )
    }

    fn recognize_root(graph: &PerceptionGraph, with_color: bool) -> Recognition {
        let root = graph
            .object_roots()
            .into_iter()
            .find(|&r| {
                graph.out_edges(r).any(|e| {
                    matches!(
                        graph.nodes[e.to],
                        GraphNode::Property(PerceivedProperty::Color { .. })
                    )
                })
            })
            .unwrap();
        let mut matched = graph.object_boundary(root);
        if !with_color {
            matched.retain(|&n| {
                !matches!(
                    graph.nodes[n],
                    GraphNode::Property(PerceivedProperty::Color { .. })
                )
            });
        }
        Recognition {
            concept: "ball".into(),
            root,
            matched,
        }
    }

    #[test]
    fn no_recognitions_leaves_graph_unchanged() {
        let g = ball_on_ground();
        let collapsed = preprocess_recognized_objects(&g, &[]);
        assert_eq!(collapsed.graph, g);
        assert!(collapsed.recognitions.is_empty());
    }

    #[test]
    fn collapse_replaces_boundary_with_concept_node() {
        let g = ball_on_ground();
        let rec = recognize_root(&g, true);
        let collapsed = preprocess_recognized_objects(&g, &[rec.clone()]);
        assert_eq!(
            collapsed.graph.nodes.len(),
            g.nodes.len() - rec.matched.len() + 1
        );
        let concept_nodes: Vec<&GraphNode> = collapsed
            .graph
            .nodes
            .iter()
            .filter(|n| matches!(n, GraphNode::MatchedConcept { .. }))
            .collect();
        assert_eq!(concept_nodes.len(), 1);
        // The on-ground region survived, re-routed to the concept node.
        let new_root = collapsed.recognitions[0].root;
        assert!(collapsed
            .graph
            .out_edges(new_root)
            .any(|e| e.kind == EdgeKind::InRegion));
        // A concept-matching pattern still matches the collapsed graph.
        let mut p = PerceptionGraphPattern::default();
        p.nodes.push(NodePredicate::MatchedConceptIs("ball".into()));
        assert!(matches_graph(&p, &collapsed.graph));
    }

    #[test]
    fn uncovered_satellites_reattach_to_concept_node() {
        let g = ball_on_ground();
        let rec = recognize_root(&g, false); // pattern did not cover the color
        let collapsed = preprocess_recognized_objects(&g, &[rec]);
        let new_root = collapsed.recognitions[0].root;
        let has_color = collapsed.graph.out_edges(new_root).any(|e| {
            e.kind == EdgeKind::HasProperty
                && matches!(
                    collapsed.graph.nodes[e.to],
                    GraphNode::Property(PerceivedProperty::Color { .. })
                )
        });
        assert!(has_color);
    }

    #[test]
    fn overlapping_recognitions_keep_the_larger() {
        let g = ball_on_ground();
        let big = recognize_root(&g, true);
        let small = Recognition {
            concept: "marble".into(),
            ..recognize_root(&g, false)
        };
        let collapsed = preprocess_recognized_objects(&g, &[small, big.clone()]);
        assert_eq!(collapsed.recognitions.len(), 1);
        assert_eq!(collapsed.recognitions[0].concept, big.concept);
    }

    #[test]
    fn plural_counts_attach_per_group_size() {
        let mut g = PerceptionGraph::default();
        for i in 0..4 {
            g.add_node(GraphNode::MatchedConcept {
                concept: "ball".into(),
                debug: format!("ball_{i}"),
            });
        }
        g.add_node(GraphNode::MatchedConcept {
            concept: "cup".into(),
            debug: "cup_0".into(),
        });
        let out = plural_preprocess(&g);
        let counts: Vec<&GraphNode> = out
            .nodes
            .iter()
            .filter(|n| matches!(n, GraphNode::Count(_)))
            .collect();
        assert_eq!(counts.len(), 4);
        assert!(counts
            .iter()
            .all(|n| matches!(n, GraphNode::Count(CountValue::Many))));
        // The singleton cup got no count node.
        assert!(!out.out_edges(4).any(|e| e.kind == EdgeKind::HasCount));
    }

    #[test]
    fn two_of_a_kind_get_count_two() {
        let mut g = PerceptionGraph::default();
        for i in 0..2 {
            g.add_node(GraphNode::MatchedConcept {
                concept: "ball".into(),
                debug: format!("ball_{i}"),
            });
        }
        let out = plural_preprocess(&g);
        assert!(out
            .nodes
            .iter()
            .any(|n| matches!(n, GraphNode::Count(CountValue::Two))));
    }
}
