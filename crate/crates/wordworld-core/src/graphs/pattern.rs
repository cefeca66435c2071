//! Perception graph patterns: DAGs of node and edge predicates, matched
//! against perception graphs (or other patterns) to represent learned
//! meanings. SLOT nodes are wildcards standing for the arguments of the
//! attribute, relation or action a pattern encodes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ontology::CrossSectionSize;
use crate::perception::PerceivedProperty;
use crate::spatial::{Direction, Distance, PathOperator};

use super::graph::{CountValue, EdgeKind, GraphNode, PerceptionGraph, ScopeSet};

/// Name of a pattern slot (ARG1, ARG2, …).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SlotId(pub String);

impl SlotId {
    pub fn new(s: &str) -> SlotId {
        SlotId(s.to_owned())
    }
}

impl fmt::Display for SlotId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for SlotId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "${}", self.0)
    }
}

/// Category a perceived property falls into, for kind-level predicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PropertyKind {
    Color,
    Gaze,
    SpeakerMarker,
    ProtoRole,
    RecognizedParticular,
    Basic,
}

pub fn property_kind(p: &PerceivedProperty) -> PropertyKind {
    match p {
        PerceivedProperty::Color { .. } => PropertyKind::Color,
        PerceivedProperty::GazedAt => PropertyKind::Gaze,
        PerceivedProperty::IsSpeaker | PerceivedProperty::IsAddressee => {
            PropertyKind::SpeakerMarker
        }
        PerceivedProperty::ProtoRole(_) => PropertyKind::ProtoRole,
        PerceivedProperty::RecognizedParticular(_) => PropertyKind::RecognizedParticular,
        _ => PropertyKind::Basic,
    }
}

/// Inclusive RGB bounding box for color-range predicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ColorBox {
    pub r: (u8, u8),
    pub g: (u8, u8),
    pub b: (u8, u8),
}

impl ColorBox {
    pub fn point(r: u8, g: u8, b: u8) -> ColorBox {
        ColorBox {
            r: (r, r),
            g: (g, g),
            b: (b, b),
        }
    }

    pub fn contains(&self, r: u8, g: u8, b: u8) -> bool {
        (self.r.0..=self.r.1).contains(&r)
            && (self.g.0..=self.g.1).contains(&g)
            && (self.b.0..=self.b.1).contains(&b)
    }

    pub fn contains_box(&self, other: &ColorBox) -> bool {
        self.r.0 <= other.r.0
            && self.r.1 >= other.r.1
            && self.g.0 <= other.g.0
            && self.g.1 >= other.g.1
            && self.b.0 <= other.b.0
            && self.b.1 >= other.b.1
    }

    pub fn widened_to(&self, r: u8, g: u8, b: u8) -> ColorBox {
        ColorBox {
            r: (self.r.0.min(r), self.r.1.max(r)),
            g: (self.g.0.min(g), self.g.1.max(g)),
            b: (self.b.0.min(b), self.b.1.max(b)),
        }
    }

    pub fn union(&self, other: &ColorBox) -> ColorBox {
        ColorBox {
            r: (self.r.0.min(other.r.0), self.r.1.max(other.r.1)),
            g: (self.g.0.min(other.g.0), self.g.1.max(other.g.1)),
            b: (self.b.0.min(other.b.0), self.b.1.max(other.b.1)),
        }
    }
}

/// Predicate accepting (or rejecting) one perception graph node.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NodePredicate {
    /// Any object perception or collapsed concept node.
    AnyObject,
    /// Argument wildcard; matches like `AnyObject` but binds the argument.
    Slot(SlotId),
    /// A collapsed node for the given object concept.
    MatchedConceptIs(String),
    PropertyEquals(PerceivedProperty),
    PropertyOfKind(PropertyKind),
    ColorInRange(ColorBox),
    AnyGeon,
    CrossSectionIs {
        curved: Option<bool>,
        reflective_symmetry: Option<bool>,
        rotational_symmetry: Option<bool>,
    },
    CrossSectionSizeIs(CrossSectionSize),
    AnyRegion,
    RegionIs {
        distance: Option<Distance>,
        direction: Option<Direction>,
    },
    AxisIs {
        curved: Option<bool>,
        directed: Option<bool>,
        aligned_to_gravity: Option<bool>,
    },
    PathIs {
        operator: Option<PathOperator>,
        orientation_changes: bool,
    },
    CountIs(CountValue),
}

impl NodePredicate {
    /// Does this predicate accept the given graph node? Debug labels play no
    /// part.
    pub fn satisfies(&self, node: &GraphNode) -> bool {
        match (self, node) {
            (NodePredicate::AnyObject, n) => n.is_object_like(),
            (NodePredicate::Slot(_), n) => n.is_object_like(),
            (NodePredicate::MatchedConceptIs(c), GraphNode::MatchedConcept { concept, .. }) => {
                c == concept
            }
            (NodePredicate::PropertyEquals(p), GraphNode::Property(q)) => p == q,
            (NodePredicate::PropertyOfKind(k), GraphNode::Property(q)) => property_kind(q) == *k,
            (
                NodePredicate::ColorInRange(range),
                GraphNode::Property(PerceivedProperty::Color { r, g, b }),
            ) => range.contains(*r, *g, *b),
            (NodePredicate::AnyGeon, GraphNode::Geon) => true,
            (
                NodePredicate::CrossSectionIs {
                    curved,
                    reflective_symmetry,
                    rotational_symmetry,
                },
                GraphNode::CrossSection(cs),
            ) => {
                curved.map_or(true, |v| v == cs.curved)
                    && reflective_symmetry.map_or(true, |v| v == cs.reflective_symmetry)
                    && rotational_symmetry.map_or(true, |v| v == cs.rotational_symmetry)
            }
            (NodePredicate::CrossSectionSizeIs(s), GraphNode::CrossSectionSize(t)) => s == t,
            (NodePredicate::AnyRegion, GraphNode::Region { .. }) => true,
            (
                NodePredicate::RegionIs {
                    distance,
                    direction,
                },
                GraphNode::Region {
                    distance: d,
                    direction: dir,
                },
            ) => distance == d && direction == dir,
            (
                NodePredicate::AxisIs {
                    curved,
                    directed,
                    aligned_to_gravity,
                },
                GraphNode::Axis {
                    curved: c,
                    directed: d,
                    aligned_to_gravity: g,
                    ..
                },
            ) => {
                curved.map_or(true, |v| v == *c)
                    && directed.map_or(true, |v| v == *d)
                    && aligned_to_gravity.map_or(true, |v| v == *g)
            }
            (
                NodePredicate::PathIs {
                    operator,
                    orientation_changes,
                },
                GraphNode::Path {
                    operator: op,
                    orientation_changes: oc,
                },
            ) => operator == op && orientation_changes == oc,
            (NodePredicate::CountIs(c), GraphNode::Count(d)) => c == d,
            _ => false,
        }
    }

    /// Predicate partial order: `self ⊒ other` iff every graph node `other`
    /// accepts, `self` accepts.
    pub fn implies(&self, other: &NodePredicate) -> bool {
        use NodePredicate::*;
        let object_like =
            |p: &NodePredicate| matches!(p, AnyObject | Slot(_) | MatchedConceptIs(_));
        match (self, other) {
            (AnyObject, o) => object_like(o),
            // A slot accepts what AnyObject accepts, but implication also has
            // to preserve argument bindings: a slot may stand in for the same
            // slot or for a concrete concept, never for a bare AnyObject.
            (Slot(a), Slot(b)) => a == b,
            (Slot(_), MatchedConceptIs(_)) => true,
            (MatchedConceptIs(a), MatchedConceptIs(b)) => a == b,
            (PropertyEquals(a), PropertyEquals(b)) => a == b,
            (PropertyEquals(PerceivedProperty::Color { r, g, b }), ColorInRange(range)) => {
                *range == ColorBox::point(*r, *g, *b)
            }
            (PropertyOfKind(k), PropertyEquals(p)) => property_kind(p) == *k,
            (PropertyOfKind(a), PropertyOfKind(b)) => a == b,
            (PropertyOfKind(PropertyKind::Color), ColorInRange(_)) => true,
            (ColorInRange(a), ColorInRange(b)) => a.contains_box(b),
            (ColorInRange(range), PropertyEquals(PerceivedProperty::Color { r, g, b })) => {
                range.contains(*r, *g, *b)
            }
            (AnyGeon, AnyGeon) => true,
            (
                CrossSectionIs {
                    curved: c1,
                    reflective_symmetry: f1,
                    rotational_symmetry: r1,
                },
                CrossSectionIs {
                    curved: c2,
                    reflective_symmetry: f2,
                    rotational_symmetry: r2,
                },
            ) => {
                let field = |a: &Option<bool>, b: &Option<bool>| match (a, b) {
                    (None, _) => true,
                    (Some(x), Some(y)) => x == y,
                    (Some(_), None) => false,
                };
                field(c1, c2) && field(f1, f2) && field(r1, r2)
            }
            (CrossSectionSizeIs(a), CrossSectionSizeIs(b)) => a == b,
            (AnyRegion, AnyRegion | RegionIs { .. }) => true,
            (
                RegionIs {
                    distance: d1,
                    direction: r1,
                },
                RegionIs {
                    distance: d2,
                    direction: r2,
                },
            ) => d1 == d2 && r1 == r2,
            (
                AxisIs {
                    curved: c1,
                    directed: d1,
                    aligned_to_gravity: g1,
                },
                AxisIs {
                    curved: c2,
                    directed: d2,
                    aligned_to_gravity: g2,
                },
            ) => {
                let field = |a: &Option<bool>, b: &Option<bool>| match (a, b) {
                    (None, _) => true,
                    (Some(x), Some(y)) => x == y,
                    (Some(_), None) => false,
                };
                field(c1, c2) && field(d1, d2) && field(g1, g2)
            }
            (
                PathIs {
                    operator: o1,
                    orientation_changes: c1,
                },
                PathIs {
                    operator: o2,
                    orientation_changes: c2,
                },
            ) => o1 == o2 && c1 == c2,
            (CountIs(a), CountIs(b)) => a == b,
            _ => false,
        }
    }

    /// Selectivity rank used to order the search: low = most constrained.
    pub fn selectivity(&self) -> u8 {
        use NodePredicate::*;
        match self {
            PropertyEquals(_) | CountIs(_) | CrossSectionSizeIs(_) | MatchedConceptIs(_) => 0,
            ColorInRange(_) | RegionIs { .. } | PathIs { .. } | CrossSectionIs { .. } => 1,
            PropertyOfKind(_) | AxisIs { .. } => 2,
            AnyGeon | AnyRegion => 3,
            Slot(_) => 4,
            AnyObject => 5,
        }
    }

    /// Kind rank of graph nodes this predicate could possibly accept, used
    /// for candidate pre-filtering; `None` means several kinds (object-like).
    pub fn target_kind_rank(&self) -> Option<u8> {
        use NodePredicate::*;
        match self {
            AnyObject | Slot(_) => None,
            MatchedConceptIs(_) => Some(1),
            PropertyEquals(_) | PropertyOfKind(_) | ColorInRange(_) => Some(5),
            AnyGeon => Some(2),
            CrossSectionIs { .. } => Some(3),
            CrossSectionSizeIs(_) => Some(4),
            AnyRegion | RegionIs { .. } => Some(6),
            AxisIs { .. } => Some(7),
            PathIs { .. } => Some(8),
            CountIs(_) => Some(9),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgePredicate {
    pub kind: EdgeKind,
    /// Satisfied when the graph edge's scope set is a superset of this.
    pub required_scopes: ScopeSet,
}

impl EdgePredicate {
    /// `self ⊒ other`: every graph edge `other` accepts, `self` accepts.
    pub fn implies(&self, other: &EdgePredicate) -> bool {
        self.kind == other.kind && other.required_scopes.contains(self.required_scopes)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PatternEdge {
    pub from: usize,
    pub to: usize,
    pub predicate: EdgePredicate,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerceptionGraphPattern {
    pub nodes: Vec<NodePredicate>,
    pub edges: Vec<PatternEdge>,
}

impl PerceptionGraphPattern {
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn slots(&self) -> BTreeMap<SlotId, usize> {
        self.nodes
            .iter()
            .enumerate()
            .filter_map(|(i, n)| match n {
                NodePredicate::Slot(id) => Some((id.clone(), i)),
                _ => None,
            })
            .collect()
    }

    pub fn out_edges(&self, node: usize) -> impl Iterator<Item = &PatternEdge> {
        self.edges.iter().filter(move |e| e.from == node)
    }

    pub fn in_edges(&self, node: usize) -> impl Iterator<Item = &PatternEdge> {
        self.edges.iter().filter(move |e| e.to == node)
    }

    /// Extract a pattern from a sub-graph of a perception graph. Each graph
    /// node becomes the most specific predicate describing it; nodes listed
    /// in `slots` become slot wildcards instead. Edges internal to the
    /// sub-graph become edge predicates requiring the edge's full scope set.
    pub fn from_subgraph(
        graph: &PerceptionGraph,
        members: &BTreeSet<usize>,
        slots: &BTreeMap<usize, SlotId>,
    ) -> PerceptionGraphPattern {
        let mut index: BTreeMap<usize, usize> = BTreeMap::new();
        let mut pattern = PerceptionGraphPattern::default();
        for &m in members {
            let predicate = match slots.get(&m) {
                Some(slot) => NodePredicate::Slot(slot.clone()),
                None => node_to_predicate(&graph.nodes[m]),
            };
            index.insert(m, pattern.nodes.len());
            pattern.nodes.push(predicate);
        }
        for e in &graph.edges {
            if let (Some(&from), Some(&to)) = (index.get(&e.from), index.get(&e.to)) {
                pattern.edges.push(PatternEdge {
                    from,
                    to,
                    predicate: EdgePredicate {
                        kind: e.kind,
                        required_scopes: e.scopes,
                    },
                });
            }
        }
        pattern
    }

    /// Retain only the listed nodes, reindexing edges. Returns the old→new
    /// index map.
    pub fn restricted_to(
        &self,
        keep: &BTreeSet<usize>,
    ) -> (PerceptionGraphPattern, BTreeMap<usize, usize>) {
        let mut index = BTreeMap::new();
        let mut out = PerceptionGraphPattern::default();
        for &n in keep {
            index.insert(n, out.nodes.len());
            out.nodes.push(self.nodes[n].clone());
        }
        for e in &self.edges {
            if let (Some(&from), Some(&to)) = (index.get(&e.from), index.get(&e.to)) {
                out.edges.push(PatternEdge {
                    from,
                    to,
                    predicate: e.predicate,
                });
            }
        }
        (out, index)
    }

    /// Weakly connected components, as sets of node indices.
    pub fn components(&self) -> Vec<BTreeSet<usize>> {
        let n = self.nodes.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let root = find(parent, parent[x]);
                parent[x] = root;
            }
            parent[x]
        }
        for e in &self.edges {
            let a = find(&mut parent, e.from);
            let b = find(&mut parent, e.to);
            parent[a] = b;
        }
        let mut comps: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for i in 0..n {
            let root = find(&mut parent, i);
            comps.entry(root).or_default().insert(i);
        }
        comps.into_values().collect()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph pattern {\n  rankdir=TB;\n");
        for (i, node) in self.nodes.iter().enumerate() {
            out.push_str(&format!("  n{i} [label=\"{node:?}\"];\n"));
        }
        for e in &self.edges {
            out.push_str(&format!(
                "  n{} -> n{} [label=\"{:?} [{}]\"];\n",
                e.from, e.to, e.predicate.kind, e.predicate.required_scopes
            ));
        }
        out.push_str("}\n");
        out
    }
}

/// The most specific predicate accepting exactly nodes like this one.
pub fn node_to_predicate(node: &GraphNode) -> NodePredicate {
    match node {
        GraphNode::Object { .. } => NodePredicate::AnyObject,
        GraphNode::MatchedConcept { concept, .. } => {
            NodePredicate::MatchedConceptIs(concept.clone())
        }
        GraphNode::Geon => NodePredicate::AnyGeon,
        GraphNode::CrossSection(cs) => NodePredicate::CrossSectionIs {
            curved: Some(cs.curved),
            reflective_symmetry: Some(cs.reflective_symmetry),
            rotational_symmetry: Some(cs.rotational_symmetry),
        },
        GraphNode::CrossSectionSize(s) => NodePredicate::CrossSectionSizeIs(*s),
        GraphNode::Property(p) => NodePredicate::PropertyEquals(*p),
        GraphNode::Region {
            distance,
            direction,
        } => NodePredicate::RegionIs {
            distance: *distance,
            direction: *direction,
        },
        GraphNode::Axis {
            curved,
            directed,
            aligned_to_gravity,
            ..
        } => NodePredicate::AxisIs {
            curved: Some(*curved),
            directed: Some(*directed),
            aligned_to_gravity: Some(*aligned_to_gravity),
        },
        GraphNode::Path {
            operator,
            orientation_changes,
        } => NodePredicate::PathIs {
            operator: *operator,
            orientation_changes: *orientation_changes,
        },
        GraphNode::Count(c) => NodePredicate::CountIs(*c),
    }
}

#[cfg(test)]
mod tests {
    use super::super::testfix::graph_of;
    use super::*;
    use crate::perception::Particular;
    use crate::situation::SituationBuilder;

    fn predicate_pool() -> Vec<NodePredicate> {
        use NodePredicate::*;
        vec![
            AnyObject,
            Slot(SlotId::new("ARG1")),
            Slot(SlotId::new("ARG2")),
            MatchedConceptIs("ball".into()),
            PropertyEquals(PerceivedProperty::Animate),
            PropertyEquals(PerceivedProperty::Hollow),
            PropertyEquals(PerceivedProperty::GazedAt),
            PropertyEquals(PerceivedProperty::RecognizedParticular(Particular::IsMom)),
            PropertyEquals(PerceivedProperty::Color {
                r: 232,
                g: 36,
                b: 36,
            }),
            PropertyOfKind(PropertyKind::Color),
            PropertyOfKind(PropertyKind::Basic),
            PropertyOfKind(PropertyKind::RecognizedParticular),
            ColorInRange(ColorBox {
                r: (0, 255),
                g: (0, 100),
                b: (0, 100),
            }),
            ColorInRange(ColorBox::point(232, 36, 36)),
            ColorInRange(ColorBox {
                r: (200, 255),
                g: (0, 50),
                b: (0, 50),
            }),
            AnyGeon,
            CrossSectionIs {
                curved: Some(true),
                reflective_symmetry: None,
                rotational_symmetry: None,
            },
            CrossSectionIs {
                curved: Some(true),
                reflective_symmetry: Some(true),
                rotational_symmetry: Some(true),
            },
            CrossSectionSizeIs(CrossSectionSize::Constant),
            AnyRegion,
            RegionIs {
                distance: Some(Distance::ExteriorButInContact),
                direction: Some(Direction::ABOVE),
            },
            AxisIs {
                curved: None,
                directed: Some(true),
                aligned_to_gravity: None,
            },
            CountIs(CountValue::Two),
        ]
    }

    fn node_pool() -> Vec<GraphNode> {
        use crate::ontology::CrossSection;
        vec![
            GraphNode::Object { debug: "x".into() },
            GraphNode::MatchedConcept {
                concept: "ball".into(),
                debug: "b".into(),
            },
            GraphNode::Property(PerceivedProperty::Animate),
            GraphNode::Property(PerceivedProperty::Hollow),
            GraphNode::Property(PerceivedProperty::Color {
                r: 232,
                g: 36,
                b: 36,
            }),
            GraphNode::Property(PerceivedProperty::Color {
                r: 36,
                g: 180,
                b: 72,
            }),
            GraphNode::Property(PerceivedProperty::RecognizedParticular(Particular::IsMom)),
            GraphNode::Geon,
            GraphNode::CrossSection(CrossSection::CIRCULAR),
            GraphNode::CrossSection(CrossSection::SQUARE),
            GraphNode::CrossSectionSize(CrossSectionSize::Constant),
            GraphNode::Region {
                distance: Some(Distance::ExteriorButInContact),
                direction: Some(Direction::ABOVE),
            },
            GraphNode::Region {
                distance: Some(Distance::Distal),
                direction: None,
            },
            GraphNode::Axis {
                debug: "a".into(),
                curved: false,
                directed: true,
                aligned_to_gravity: true,
            },
            GraphNode::Path {
                operator: Some(PathOperator::To),
                orientation_changes: false,
            },
            GraphNode::Count(CountValue::Two),
            GraphNode::Count(CountValue::Many),
        ]
    }

    /// Soundness oracle for the predicate partial order: whenever
    /// `general.implies(specific)`, every node the specific predicate accepts
    /// must also be accepted by the general one.
    #[test]
    fn implication_is_sound_over_pools() {
        let predicates = predicate_pool();
        let nodes = node_pool();
        for general in &predicates {
            for specific in &predicates {
                if !general.implies(specific) {
                    continue;
                }
                for node in &nodes {
                    if specific.satisfies(node) {
                        assert!(
                            general.satisfies(node),
                            "{general:?} implies {specific:?} but rejects {node:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn implication_is_reflexive_and_transitive() {
        let predicates = predicate_pool();
        for p in &predicates {
            assert!(p.implies(p), "{p:?} not reflexive");
        }
        for a in &predicates {
            for b in &predicates {
                for c in &predicates {
                    if a.implies(b) && b.implies(c) {
                        assert!(a.implies(c), "{a:?} -> {b:?} -> {c:?} not transitive");
                    }
                }
            }
        }
    }

    #[test]
    fn implication_spot_checks() {
        use NodePredicate::*;
        assert!(AnyObject.implies(&MatchedConceptIs("ball".into())));
        assert!(!MatchedConceptIs("ball".into()).implies(&AnyObject));
        assert!(PropertyOfKind(PropertyKind::Color).implies(&PropertyEquals(
            PerceivedProperty::Color { r: 1, g: 2, b: 3 }
        )));
        assert!(!PropertyOfKind(PropertyKind::Basic)
            .implies(&PropertyEquals(PerceivedProperty::GazedAt)));
        let wide = ColorInRange(ColorBox {
            r: (0, 255),
            g: (0, 255),
            b: (0, 255),
        });
        let narrow = ColorInRange(ColorBox::point(10, 20, 30));
        assert!(wide.implies(&narrow));
        assert!(!narrow.implies(&wide));
        // A wildcard cross-section field generalizes a fixed one, not the
        // other way round.
        let loose = CrossSectionIs {
            curved: Some(true),
            reflective_symmetry: None,
            rotational_symmetry: None,
        };
        let tight = CrossSectionIs {
            curved: Some(true),
            reflective_symmetry: Some(true),
            rotational_symmetry: Some(false),
        };
        assert!(loose.implies(&tight));
        assert!(!tight.implies(&loose));
        assert!(!Slot(SlotId::new("ARG1")).implies(&Slot(SlotId::new("ARG2"))));
    }

    #[test]
    fn extracted_predicates_accept_their_source_nodes() {
        let s = SituationBuilder::new()
            .object_with("ball_0", "ball", &["red"], true)
            .build();
        let g = graph_of(&s);
        let members: BTreeSet<usize> = (0..g.nodes.len()).collect();
        let pattern = PerceptionGraphPattern::from_subgraph(&g, &members, &BTreeMap::new());
        assert_eq!(pattern.nodes.len(), g.nodes.len());
        for (i, predicate) in pattern.nodes.iter().enumerate() {
            assert!(predicate.satisfies(&g.nodes[i]));
        }
        assert_eq!(pattern.edges.len(), g.edges.len());
    }

    #[test]
    fn slot_extraction_replaces_object_nodes() {
        let s = SituationBuilder::new().object("ball_0", "ball").build();
        let g = graph_of(&s);
        let root = g
            .object_roots()
            .into_iter()
            .find(|&r| {
                g.out_edges(r)
                    .any(|e| matches!(g.nodes[e.to], GraphNode::Geon))
            })
            .unwrap();
        let members = g.object_boundary(root);
        let slots: BTreeMap<usize, SlotId> = [(root, SlotId::new("ARG1"))].into();
        let pattern = PerceptionGraphPattern::from_subgraph(&g, &members, &slots);
        let slot_map = pattern.slots();
        assert_eq!(slot_map.len(), 1);
        assert!(matches!(
            pattern.nodes[slot_map[&SlotId::new("ARG1")]],
            NodePredicate::Slot(_)
        ));
    }

    #[test]
    fn components_split_disconnected_pieces() {
        let mut pattern = PerceptionGraphPattern::default();
        pattern.nodes.push(NodePredicate::AnyObject);
        pattern.nodes.push(NodePredicate::AnyGeon);
        pattern.nodes.push(NodePredicate::AnyObject);
        pattern.edges.push(PatternEdge {
            from: 0,
            to: 1,
            predicate: EdgePredicate {
                kind: EdgeKind::HasGeon,
                required_scopes: ScopeSet::BEFORE,
            },
        });
        let comps = pattern.components();
        assert_eq!(comps.len(), 2);
        assert!(comps.contains(&[0usize, 1].into()));
        assert!(comps.contains(&[2usize].into()));
    }
}
