//! Candidate generation: which surface templates an utterance suggests for
//! each concept kind, and which meaning patterns a perception graph offers
//! for a given template.

use std::collections::{BTreeMap, BTreeSet};

use crate::graphs::{
    property_kind, EdgeKind, GraphNode, PerceptionGraph, PerceptionGraphPattern, PropertyKind,
    SlotId,
};

use super::types::{
    ConceptKind, JointAlignment, PerceptionGraphTemplate, SurfaceTemplate, TemplateElement,
};

/// Tokens that carry no concept content and are handled by determiner logic.
pub const DETERMINERS: [&str; 2] = ["a", "the"];

fn is_determiner(token: &str) -> bool {
    DETERMINERS.contains(&token)
}

/// Aligned object spans in utterance order.
fn aligned_spans(alignment: &JointAlignment) -> Vec<(String, (usize, usize))> {
    let mut spans: Vec<(String, (usize, usize))> = alignment
        .language
        .spans
        .iter()
        .map(|(c, &s)| (c.clone(), s))
        .collect();
    spans.sort_by_key(|(_, s)| *s);
    spans
}

/// Surface templates an utterance suggests for one concept kind, given what
/// is already aligned.
pub fn extract_candidate_templates(
    kind: ConceptKind,
    tokens: &[String],
    alignment: &JointAlignment,
) -> BTreeSet<SurfaceTemplate> {
    match kind {
        ConceptKind::Object => object_candidates(tokens, alignment),
        ConceptKind::Attribute => attribute_candidates(tokens, alignment),
        ConceptKind::Relation => relation_candidates(tokens, alignment),
        ConceptKind::Action => action_candidates(tokens, alignment),
    }
}

/// Any unaligned non-determiner token could name an object.
fn object_candidates(tokens: &[String], alignment: &JointAlignment) -> BTreeSet<SurfaceTemplate> {
    tokens
        .iter()
        .enumerate()
        .filter(|(i, t)| !alignment.language.is_token_aligned(*i) && !is_determiner(t))
        .map(|(_, t)| SurfaceTemplate {
            elements: vec![TemplateElement::Token(t.clone())],
        })
        .collect()
}

/// An unaligned token directly before or after an aligned object span could
/// be an attribute of that object.
fn attribute_candidates(
    tokens: &[String],
    alignment: &JointAlignment,
) -> BTreeSet<SurfaceTemplate> {
    let mut out = BTreeSet::new();
    for (_, (start, end)) in aligned_spans(alignment) {
        if start > 0 {
            let i = start - 1;
            if !alignment.language.is_token_aligned(i) && !is_determiner(&tokens[i]) {
                out.insert(SurfaceTemplate {
                    elements: vec![
                        TemplateElement::Token(tokens[i].clone()),
                        TemplateElement::Slot("ARG1".into()),
                    ],
                });
            }
        }
        if end < tokens.len() {
            let i = end;
            if !alignment.language.is_token_aligned(i) && !is_determiner(&tokens[i]) {
                out.insert(SurfaceTemplate {
                    elements: vec![
                        TemplateElement::Slot("ARG1".into()),
                        TemplateElement::Token(tokens[i].clone()),
                    ],
                });
            }
        }
    }
    out
}

/// Two aligned objects with at most two unaligned tokens between them could
/// stand in a named relation.
fn relation_candidates(tokens: &[String], alignment: &JointAlignment) -> BTreeSet<SurfaceTemplate> {
    let spans = aligned_spans(alignment);
    let mut out = BTreeSet::new();
    for pair in spans.windows(2) {
        let (_, (_, first_end)) = &pair[0];
        let (_, (second_start, _)) = &pair[1];
        let between = &tokens[*first_end..*second_start];
        if between.is_empty() || between.len() > 2 {
            continue;
        }
        if (*first_end..*second_start).any(|i| alignment.language.is_token_aligned(i)) {
            continue;
        }
        // A lone determiner between the spans is noun-phrase structure, not
        // a relation word.
        if between.iter().all(|t| is_determiner(t)) {
            continue;
        }
        let mut elements = vec![TemplateElement::Slot("ARG1".into())];
        elements.extend(between.iter().map(|t| TemplateElement::Token(t.clone())));
        elements.push(TemplateElement::Slot("ARG2".into()));
        out.insert(SurfaceTemplate { elements });
    }
    out
}

/// Verb templates: the utterance skeleton with aligned object spans replaced
/// by argument slots, in word order, plus variants without the leading and
/// trailing unaligned runs. Every surviving unaligned run must have length
/// ≤ 3. This family is a stand-in for arbitrary verb patterns and is wide
/// enough to cover different argument orders.
fn action_candidates(tokens: &[String], alignment: &JointAlignment) -> BTreeSet<SurfaceTemplate> {
    let spans = aligned_spans(alignment);
    if spans.is_empty() {
        return BTreeSet::new();
    }
    let mut skeleton: Vec<TemplateElement> = Vec::new();
    let mut i = 0usize;
    while i < tokens.len() {
        if let Some((j, (_, span))) = spans
            .iter()
            .enumerate()
            .find(|(_, (_, (start, _)))| *start == i)
        {
            skeleton.push(TemplateElement::Slot(format!("ARG{}", j + 1)));
            i = span.1;
        } else {
            skeleton.push(TemplateElement::Token(tokens[i].clone()));
            i += 1;
        }
    }

    let span_lengths_ok = |elements: &[TemplateElement]| {
        let mut run = 0usize;
        for e in elements {
            match e {
                TemplateElement::Token(_) => run += 1,
                TemplateElement::Slot(_) => run = 0,
            }
            if run > 3 {
                return false;
            }
        }
        true
    };
    // Determiners are noun-phrase plumbing; a verb template must carry at
    // least one content token.
    let has_token = |elements: &[TemplateElement]| {
        elements
            .iter()
            .any(|e| matches!(e, TemplateElement::Token(t) if !is_determiner(t)))
    };

    let mut variants: Vec<Vec<TemplateElement>> = vec![skeleton.clone()];
    let leading_tokens = skeleton
        .iter()
        .take_while(|e| matches!(e, TemplateElement::Token(_)))
        .count();
    let trailing_tokens = skeleton
        .iter()
        .rev()
        .take_while(|e| matches!(e, TemplateElement::Token(_)))
        .count();
    if leading_tokens > 0 {
        variants.push(skeleton[leading_tokens..].to_vec());
    }
    if trailing_tokens > 0 && trailing_tokens < skeleton.len() {
        variants.push(skeleton[..skeleton.len() - trailing_tokens].to_vec());
    }
    if leading_tokens > 0
        && trailing_tokens > 0
        && leading_tokens + trailing_tokens < skeleton.len()
    {
        variants.push(skeleton[leading_tokens..skeleton.len() - trailing_tokens].to_vec());
    }

    variants
        .into_iter()
        .filter(|v| !v.is_empty() && has_token(v) && span_lengths_ok(v))
        .map(|elements| SurfaceTemplate { elements })
        .filter(|t| t.is_valid())
        .collect()
}

/// Which concept node (or object root) realizes each template slot, when
/// building hypotheses for a slotted template. Derived from the utterance:
/// ARGn corresponds to the n-th aligned object span used by the template.
pub fn slot_bindings(
    template: &SurfaceTemplate,
    alignment: &JointAlignment,
) -> Option<BTreeMap<String, usize>> {
    let spans = aligned_spans(alignment);
    let mut bindings = BTreeMap::new();
    for name in template.slot_names() {
        let index: usize = name.strip_prefix("ARG")?.parse().ok()?;
        let (concept, _) = spans.get(index - 1)?;
        let nodes = alignment.perception.node_sets.get(concept)?;
        bindings.insert(name, *nodes.iter().next()?);
    }
    Some(bindings)
}

/// Initial meaning hypotheses a graph offers for one surface template.
pub fn initial_hypotheses(
    kind: ConceptKind,
    template: &SurfaceTemplate,
    graph: &PerceptionGraph,
    alignment: &JointAlignment,
) -> Vec<PerceptionGraphTemplate> {
    match kind {
        ConceptKind::Object => object_hypotheses(graph, alignment),
        ConceptKind::Attribute => attribute_hypotheses(template, graph, alignment),
        ConceptKind::Relation => relation_hypotheses(template, graph, alignment),
        ConceptKind::Action => action_hypotheses(template, graph, alignment),
    }
}

/// Every unaligned object root's boundary is a candidate object meaning.
/// The ground is excluded: it is a known particular present in every scene,
/// so a ground hypothesis would fit any word and never be disconfirmed.
pub fn object_hypotheses(
    graph: &PerceptionGraph,
    alignment: &JointAlignment,
) -> Vec<PerceptionGraphTemplate> {
    graph
        .object_roots()
        .into_iter()
        .filter(|root| !alignment.perception.is_node_aligned(*root))
        .filter(|root| !matches!(graph.nodes[*root], GraphNode::MatchedConcept { .. }))
        .filter(|root| {
            !graph.object_boundary(*root).iter().any(|&n| {
                matches!(
                    graph.nodes[n],
                    GraphNode::Property(
                        crate::perception::PerceivedProperty::RecognizedParticular(
                            crate::perception::Particular::IsGround
                        )
                    )
                )
            })
        })
        .map(|root| {
            let members = graph.object_boundary(root);
            PerceptionGraphTemplate::without_slots(PerceptionGraphPattern::from_subgraph(
                graph,
                &members,
                &BTreeMap::new(),
            ))
        })
        .collect()
}

/// Single property (or count) nodes attached to the argument object, plus —
/// for possessed arguments — the possessor's identifying properties, so
/// possessives like "my" are learnable.
fn attribute_hypotheses(
    template: &SurfaceTemplate,
    graph: &PerceptionGraph,
    alignment: &JointAlignment,
) -> Vec<PerceptionGraphTemplate> {
    let Some(bindings) = slot_bindings(template, alignment) else {
        return Vec::new();
    };
    let Some(&arg) = bindings.get("ARG1") else {
        return Vec::new();
    };
    let slot = SlotId::new("ARG1");
    let slot_map: BTreeMap<usize, SlotId> = [(arg, slot.clone())].into();
    let alignment_map: BTreeMap<SlotId, String> = [(slot, "ARG1".to_owned())].into();
    let mut out = Vec::new();
    for e in graph.out_edges(arg) {
        if matches!(e.kind, EdgeKind::HasProperty | EdgeKind::HasCount) {
            let members: BTreeSet<usize> = [arg, e.to].into();
            out.push(PerceptionGraphTemplate {
                pattern: PerceptionGraphPattern::from_subgraph(graph, &members, &slot_map),
                slot_alignment: alignment_map.clone(),
            });
        }
    }
    // Possession structure: the possessor object with its identifying marker
    // properties (speaker markers, recognized particulars). Intersection over
    // scenes with different possessors then isolates what the possessors
    // share — e.g. "my" converges on the speaker marker.
    for e in graph.in_edges(arg) {
        if e.kind != EdgeKind::Possession {
            continue;
        }
        let possessor = e.from;
        let mut members: BTreeSet<usize> = [arg, possessor].into();
        for pe in graph.out_edges(possessor) {
            if pe.kind != EdgeKind::HasProperty {
                continue;
            }
            if let GraphNode::Property(p) = &graph.nodes[pe.to] {
                if matches!(
                    property_kind(p),
                    PropertyKind::SpeakerMarker | PropertyKind::RecognizedParticular
                ) {
                    members.insert(pe.to);
                }
            }
        }
        if members.len() > 2 {
            out.push(PerceptionGraphTemplate {
                pattern: PerceptionGraphPattern::from_subgraph(graph, &members, &slot_map),
                slot_alignment: alignment_map.clone(),
            });
        }
    }
    out
}

/// Undirected breadth-first distances from a node.
fn bfs_distances(graph: &PerceptionGraph, from: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; graph.nodes.len()];
    dist[from] = Some(0);
    let mut queue = std::collections::VecDeque::from([from]);
    while let Some(n) = queue.pop_front() {
        let d = dist[n].unwrap();
        for e in &graph.edges {
            for next in [(e.from == n).then_some(e.to), (e.to == n).then_some(e.from)]
                .into_iter()
                .flatten()
            {
                if dist[next].is_none() {
                    dist[next] = Some(d + 1);
                    queue.push_back(next);
                }
            }
        }
    }
    dist
}

/// The union of all shortest paths between the two arguments, plus nodes one
/// hop off that union, as a single hypothesis.
fn relation_hypotheses(
    template: &SurfaceTemplate,
    graph: &PerceptionGraph,
    alignment: &JointAlignment,
) -> Vec<PerceptionGraphTemplate> {
    let Some(bindings) = slot_bindings(template, alignment) else {
        return Vec::new();
    };
    let (Some(&a), Some(&b)) = (bindings.get("ARG1"), bindings.get("ARG2")) else {
        return Vec::new();
    };
    let from_a = bfs_distances(graph, a);
    let from_b = bfs_distances(graph, b);
    let Some(total) = from_a[b] else {
        return Vec::new();
    };
    let mut members: BTreeSet<usize> = (0..graph.nodes.len())
        .filter(|&n| matches!((from_a[n], from_b[n]), (Some(x), Some(y)) if x + y == total))
        .collect();
    // One hop off the path union, but never onto other object-like nodes —
    // those belong to different concepts.
    let fringe: BTreeSet<usize> = graph
        .edges
        .iter()
        .flat_map(|e| {
            [
                (members.contains(&e.from), e.to),
                (members.contains(&e.to), e.from),
            ]
        })
        .filter(|(on_path, n)| *on_path && !graph.nodes[*n].is_object_like())
        .map(|(_, n)| n)
        .collect();
    members.extend(fringe);
    let slots: BTreeMap<usize, SlotId> =
        [(a, SlotId::new("ARG1")), (b, SlotId::new("ARG2"))].into();
    let slot_alignment: BTreeMap<SlotId, String> = [
        (SlotId::new("ARG1"), "ARG1".to_owned()),
        (SlotId::new("ARG2"), "ARG2".to_owned()),
    ]
    .into();
    vec![PerceptionGraphTemplate {
        pattern: PerceptionGraphPattern::from_subgraph(graph, &members, &slots),
        slot_alignment,
    }]
}

/// The whole graph with slots at the argument nodes.
fn action_hypotheses(
    template: &SurfaceTemplate,
    graph: &PerceptionGraph,
    alignment: &JointAlignment,
) -> Vec<PerceptionGraphTemplate> {
    let Some(bindings) = slot_bindings(template, alignment) else {
        return Vec::new();
    };
    if bindings.len() != template.slot_names().len() {
        return Vec::new();
    }
    let members: BTreeSet<usize> = (0..graph.nodes.len()).collect();
    let slots: BTreeMap<usize, SlotId> = bindings
        .iter()
        .map(|(name, &node)| (node, SlotId::new(name)))
        .collect();
    if slots.len() != bindings.len() {
        return Vec::new(); // two slots bound to one node
    }
    let slot_alignment: BTreeMap<SlotId, String> = bindings
        .keys()
        .map(|name| (SlotId::new(name), name.clone()))
        .collect();
    vec![PerceptionGraphTemplate {
        pattern: PerceptionGraphPattern::from_subgraph(graph, &members, &slots),
        slot_alignment,
    }]
}
