//! The perception graph: a temporal-scoped typed DAG encoding one or two
//! perception frames, built from a [`PerceptualRepresentation`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ontology::{CrossSection, CrossSectionSize};
use crate::perception::{
    ObjectPerceptionId, PerceivedPath, PerceivedPathTarget, PerceivedProperty, PerceivedRegion,
    PerceivedRelation, PerceptualRepresentation, RelationInstance,
};
use crate::spatial::{Direction, Distance, PathOperator};

/// Set of temporal scopes an edge holds in, as a small bit set.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct ScopeSet(pub u8);

impl ScopeSet {
    pub const EMPTY: ScopeSet = ScopeSet(0);
    pub const BEFORE: ScopeSet = ScopeSet(1);
    pub const AFTER: ScopeSet = ScopeSet(2);
    pub const BOTH: ScopeSet = ScopeSet(3);
    pub const DURING_CONTINUOUS: ScopeSet = ScopeSet(4);
    pub const DURING_SOMETIME: ScopeSet = ScopeSet(8);

    pub fn union(self, other: ScopeSet) -> ScopeSet {
        ScopeSet(self.0 | other.0)
    }

    pub fn contains(self, other: ScopeSet) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn has_frame_scope(self) -> bool {
        self.0 & Self::BOTH.0 != 0
    }

    pub fn is_during_only(self) -> bool {
        !self.is_empty() && !self.has_frame_scope()
    }
}

impl fmt::Display for ScopeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.contains(ScopeSet::BEFORE) {
            parts.push("before");
        }
        if self.contains(ScopeSet::AFTER) {
            parts.push("after");
        }
        if self.contains(ScopeSet::DURING_CONTINUOUS) {
            parts.push("during");
        }
        if self.contains(ScopeSet::DURING_SOMETIME) {
            parts.push("during-sometime");
        }
        write!(f, "{}", parts.join("+"))
    }
}

/// Count attribute attached by the plural preprocessor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CountValue {
    Two,
    Three,
    Many,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GraphNode {
    /// An object perception. The label is debug-only and excluded from all
    /// matching semantics.
    Object {
        debug: String,
    },
    /// A recognized object collapsed to its concept by preprocessing.
    MatchedConcept {
        concept: String,
        debug: String,
    },
    Geon,
    CrossSection(CrossSection),
    CrossSectionSize(CrossSectionSize),
    Property(PerceivedProperty),
    Region {
        distance: Option<Distance>,
        direction: Option<Direction>,
    },
    Axis {
        debug: String,
        curved: bool,
        directed: bool,
        aligned_to_gravity: bool,
    },
    Path {
        operator: Option<PathOperator>,
        orientation_changes: bool,
    },
    Count(CountValue),
}

impl GraphNode {
    pub fn is_object_like(&self) -> bool {
        matches!(
            self,
            GraphNode::Object { .. } | GraphNode::MatchedConcept { .. }
        )
    }

    /// Kind discriminant used for deterministic ordering and candidate
    /// pre-filtering; debug labels deliberately excluded.
    pub fn kind_rank(&self) -> u8 {
        match self {
            GraphNode::Object { .. } => 0,
            GraphNode::MatchedConcept { .. } => 1,
            GraphNode::Geon => 2,
            GraphNode::CrossSection(_) => 3,
            GraphNode::CrossSectionSize(_) => 4,
            GraphNode::Property(_) => 5,
            GraphNode::Region { .. } => 6,
            GraphNode::Axis { .. } => 7,
            GraphNode::Path { .. } => 8,
            GraphNode::Count(_) => 9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeKind {
    SubPart,
    HasProperty,
    HasAxis,
    PrimaryAxis,
    HasGeon,
    HasCrossSection,
    HasCrossSectionSize,
    GeneratingAxis,
    InRegion,
    ReferenceObject,
    BiggerThan,
    SmallerThan,
    MuchBiggerThan,
    MuchSmallerThan,
    Possession,
    HasPath,
    PathSource,
    PathDestination,
    HasCount,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GraphEdge {
    pub from: usize,
    pub to: usize,
    pub kind: EdgeKind,
    pub scopes: ScopeSet,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerceptionGraph {
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<GraphEdge>,
    /// Whether the source representation had two frames.
    pub dynamic: bool,
}

impl PerceptionGraph {
    pub fn add_node(&mut self, node: GraphNode) -> usize {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    /// Add an edge, merging scopes with any existing edge of the same kind
    /// between the same nodes.
    pub fn add_edge(&mut self, from: usize, to: usize, kind: EdgeKind, scopes: ScopeSet) {
        for e in &mut self.edges {
            if e.from == from && e.to == to && e.kind == kind {
                e.scopes = e.scopes.union(scopes);
                return;
            }
        }
        self.edges.push(GraphEdge {
            from,
            to,
            kind,
            scopes,
        });
    }

    pub fn out_edges(&self, node: usize) -> impl Iterator<Item = &GraphEdge> {
        self.edges.iter().filter(move |e| e.from == node)
    }

    pub fn in_edges(&self, node: usize) -> impl Iterator<Item = &GraphEdge> {
        self.edges.iter().filter(move |e| e.to == node)
    }

    pub fn degree(&self, node: usize) -> usize {
        self.edges
            .iter()
            .filter(|e| e.from == node || e.to == node)
            .count()
    }

    /// Whether an edge kind expresses ownership of satellite structure
    /// (parts, properties, axes, geons, counts, paths) rather than a relation
    /// between peers. Only ownership edges are required to be acyclic:
    /// mutual relations like `A smaller-than B` plus `B possesses A` are
    /// legitimate cycles.
    pub fn is_ownership_edge(kind: EdgeKind) -> bool {
        matches!(
            kind,
            EdgeKind::SubPart
                | EdgeKind::HasProperty
                | EdgeKind::HasAxis
                | EdgeKind::PrimaryAxis
                | EdgeKind::HasGeon
                | EdgeKind::HasCrossSection
                | EdgeKind::HasCrossSectionSize
                | EdgeKind::GeneratingAxis
                | EdgeKind::HasCount
                | EdgeKind::HasPath
        )
    }

    /// Acyclicity over the ownership edges only.
    pub fn is_structurally_acyclic(&self) -> bool {
        // Kahn's algorithm.
        let mut indeg = vec![0usize; self.nodes.len()];
        for e in self
            .edges
            .iter()
            .filter(|e| Self::is_ownership_edge(e.kind))
        {
            indeg[e.to] += 1;
        }
        let mut queue: Vec<usize> = (0..self.nodes.len()).filter(|n| indeg[*n] == 0).collect();
        let mut seen = 0;
        while let Some(n) = queue.pop() {
            seen += 1;
            for e in self
                .out_edges(n)
                .filter(|e| Self::is_ownership_edge(e.kind))
            {
                indeg[e.to] -= 1;
                if indeg[e.to] == 0 {
                    queue.push(e.to);
                }
            }
        }
        seen == self.nodes.len()
    }

    /// Root object nodes: object-like nodes with no incoming SubPart edge.
    pub fn object_roots(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|n| {
                self.nodes[*n].is_object_like()
                    && !self.in_edges(*n).any(|e| e.kind == EdgeKind::SubPart)
            })
            .collect()
    }

    /// The sub-graph "belonging" to one object root: the root, its SubPart
    /// descendants, and all satellite structure (properties, geons, axes,
    /// counts) hanging off them. Regions and other objects are not included.
    pub fn object_boundary(&self, root: usize) -> BTreeSet<usize> {
        let mut members = BTreeSet::new();
        let mut stack = vec![root];
        while let Some(n) = stack.pop() {
            if !members.insert(n) {
                continue;
            }
            for e in self.out_edges(n) {
                let include = match e.kind {
                    EdgeKind::SubPart
                    | EdgeKind::HasProperty
                    | EdgeKind::HasAxis
                    | EdgeKind::PrimaryAxis
                    | EdgeKind::HasGeon
                    | EdgeKind::HasCrossSection
                    | EdgeKind::HasCrossSectionSize
                    | EdgeKind::GeneratingAxis
                    | EdgeKind::HasCount => true,
                    _ => false,
                };
                if include {
                    stack.push(e.to);
                }
            }
        }
        members
    }

    /// Export in DOT format for visualization; debug labels included since
    /// DOT output is for developers.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph perception {\n  rankdir=TB;\n");
        for (i, node) in self.nodes.iter().enumerate() {
            let label = match node {
                GraphNode::Object { debug } => format!("object\\n{debug}"),
                GraphNode::MatchedConcept { concept, debug } => {
                    format!("concept:{concept}\\n{debug}")
                }
                GraphNode::Geon => "geon".to_owned(),
                GraphNode::CrossSection(c) => format!(
                    "cross-section\\ncurved={} refl={} rot={}",
                    c.curved, c.reflective_symmetry, c.rotational_symmetry
                ),
                GraphNode::CrossSectionSize(s) => format!("{s:?}"),
                GraphNode::Property(p) => format!("{p:?}"),
                GraphNode::Region {
                    distance,
                    direction,
                } => format!("region\\n{distance:?} {direction:?}"),
                GraphNode::Axis { debug, .. } => format!("axis\\n{debug}"),
                GraphNode::Path { operator, .. } => format!("path\\n{operator:?}"),
                GraphNode::Count(c) => format!("count:{c:?}"),
            };
            out.push_str(&format!("  n{i} [label=\"{label}\"];\n"));
        }
        for e in &self.edges {
            out.push_str(&format!(
                "  n{} -> n{} [label=\"{:?} [{}]\"];\n",
                e.from, e.to, e.kind, e.scopes
            ));
        }
        out.push_str("}\n");
        out
    }
}

fn relation_edge_kind(relation: &PerceivedRelation) -> (EdgeKind, Option<PerceivedRegion>) {
    match relation {
        PerceivedRelation::PartOf => (EdgeKind::SubPart, None),
        PerceivedRelation::BiggerThan => (EdgeKind::BiggerThan, None),
        PerceivedRelation::SmallerThan => (EdgeKind::SmallerThan, None),
        PerceivedRelation::MuchBiggerThan => (EdgeKind::MuchBiggerThan, None),
        PerceivedRelation::MuchSmallerThan => (EdgeKind::MuchSmallerThan, None),
        PerceivedRelation::Possession => (EdgeKind::Possession, None),
        PerceivedRelation::InRegion(r) => (EdgeKind::InRegion, Some(*r)),
    }
}

struct GraphAssembler {
    graph: PerceptionGraph,
    object_node: Vec<usize>,
    property_nodes: BTreeMap<(usize, PerceivedProperty), usize>,
    region_nodes: BTreeMap<(usize, PerceivedRegion, usize), usize>,
}

impl GraphAssembler {
    fn property_node(&mut self, object: usize, prop: PerceivedProperty) -> usize {
        if let Some(&n) = self.property_nodes.get(&(object, prop)) {
            return n;
        }
        let n = self.graph.add_node(GraphNode::Property(prop));
        self.property_nodes.insert((object, prop), n);
        n
    }

    fn add_relation(&mut self, rel: &RelationInstance, scope: ScopeSet) {
        let first = self.object_node[rel.first.0];
        let second = self.object_node[rel.second.0];
        let (kind, region) = relation_edge_kind(&rel.relation);
        match region {
            None => {
                // PartOf in the perceptual representation points sub→whole;
                // the graph's SubPart edge points whole→sub so deletions can
                // propagate downward.
                if kind == EdgeKind::SubPart {
                    self.graph.add_edge(second, first, kind, scope);
                } else {
                    self.graph.add_edge(first, second, kind, scope);
                }
            }
            Some(r) => {
                let region_node =
                    *self
                        .region_nodes
                        .entry((first, r, second))
                        .or_insert_with(|| {
                            self.graph.add_node(GraphNode::Region {
                                distance: r.distance,
                                direction: r.direction,
                            })
                        });
                self.graph
                    .add_edge(first, region_node, EdgeKind::InRegion, scope);
                self.graph
                    .add_edge(region_node, second, EdgeKind::ReferenceObject, scope);
            }
        }
    }

    fn path_target_node(&mut self, target: &PerceivedPathTarget, scope: ScopeSet) -> usize {
        match target {
            PerceivedPathTarget::Object(id) => self.object_node[id.0],
            PerceivedPathTarget::Region {
                reference,
                distance,
                direction,
            } => {
                let reference = self.object_node[reference.0];
                let node = self.graph.add_node(GraphNode::Region {
                    distance: *distance,
                    direction: *direction,
                });
                self.graph
                    .add_edge(node, reference, EdgeKind::ReferenceObject, scope);
                node
            }
        }
    }

    fn add_path(&mut self, object: ObjectPerceptionId, path: &PerceivedPath, scope: ScopeSet) {
        let path_node = self.graph.add_node(GraphNode::Path {
            operator: path.operator,
            orientation_changes: path.orientation_changes,
        });
        let owner = self.object_node[object.0];
        self.graph
            .add_edge(owner, path_node, EdgeKind::HasPath, scope);
        if let Some(src) = &path.source {
            let n = self.path_target_node(src, scope);
            self.graph
                .add_edge(path_node, n, EdgeKind::PathSource, scope);
        }
        if let Some(dst) = &path.destination {
            let n = self.path_target_node(dst, scope);
            self.graph
                .add_edge(path_node, n, EdgeKind::PathDestination, scope);
        }
    }
}

/// Convert a perceptual representation into a single perception graph.
/// Two-frame inputs merge into one graph with temporal-scoped edges.
pub fn to_graph(rep: &PerceptualRepresentation) -> PerceptionGraph {
    let dynamic = rep.frames.len() == 2;
    let mut asm = GraphAssembler {
        graph: PerceptionGraph {
            dynamic,
            ..Default::default()
        },
        object_node: Vec::new(),
        property_nodes: BTreeMap::new(),
        region_nodes: BTreeMap::new(),
    };

    // Objects, axes, geons: structural, scoped over all frames.
    let structural_scope = if dynamic {
        ScopeSet::BOTH
    } else {
        ScopeSet::BEFORE
    };
    for obj in &rep.objects {
        let node = asm.graph.add_node(GraphNode::Object {
            debug: obj.debug_label.clone(),
        });
        asm.object_node.push(node);
    }
    for (i, obj) in rep.objects.iter().enumerate() {
        let node = asm.object_node[i];
        let mut axis_nodes = Vec::new();
        for axis in &obj.axes {
            let a = asm.graph.add_node(GraphNode::Axis {
                debug: axis.label.clone(),
                curved: axis.curved,
                directed: axis.directed,
                aligned_to_gravity: axis.aligned_to_gravity,
            });
            let kind = if axis.primary {
                EdgeKind::PrimaryAxis
            } else {
                EdgeKind::HasAxis
            };
            asm.graph.add_edge(node, a, kind, structural_scope);
            axis_nodes.push(a);
        }
        if let Some(geon) = &obj.geon {
            let g = asm.graph.add_node(GraphNode::Geon);
            asm.graph
                .add_edge(node, g, EdgeKind::HasGeon, structural_scope);
            let cs = asm
                .graph
                .add_node(GraphNode::CrossSection(geon.cross_section));
            asm.graph
                .add_edge(g, cs, EdgeKind::HasCrossSection, structural_scope);
            let css = asm
                .graph
                .add_node(GraphNode::CrossSectionSize(geon.cross_section_size));
            asm.graph
                .add_edge(g, css, EdgeKind::HasCrossSectionSize, structural_scope);
            if let Some(&axis) = axis_nodes.get(geon.generating_axis) {
                asm.graph
                    .add_edge(g, axis, EdgeKind::GeneratingAxis, structural_scope);
            }
        }
    }

    // Frame content.
    for (frame_idx, frame) in rep.frames.iter().enumerate() {
        let scope = if !dynamic {
            ScopeSet::BEFORE
        } else if frame_idx == 0 {
            ScopeSet::BEFORE
        } else {
            ScopeSet::AFTER
        };
        for (obj, props) in &frame.properties {
            let owner = asm.object_node[obj.0];
            for prop in props {
                let p = asm.property_node(owner, *prop);
                asm.graph.add_edge(owner, p, EdgeKind::HasProperty, scope);
            }
        }
        for rel in &frame.relations {
            asm.add_relation(rel, scope);
        }
    }

    // During-action content.
    if let Some(during) = &rep.during {
        for rel in &during.continuous {
            asm.add_relation(rel, ScopeSet::DURING_CONTINUOUS);
        }
        for rel in &during.at_some_point {
            asm.add_relation(rel, ScopeSet::DURING_SOMETIME);
        }
        for (obj, path) in &during.paths {
            asm.add_path(*obj, path, ScopeSet::DURING_CONTINUOUS);
        }
    }

    asm.graph
}

/// Structural validity report for a perception graph.
pub fn validate_graph(graph: &PerceptionGraph) -> Vec<String> {
    let mut issues = Vec::new();
    if !graph.is_structurally_acyclic() {
        issues.push("graph contains an ownership cycle".to_owned());
    }
    for (i, e) in graph.edges.iter().enumerate() {
        if e.scopes.is_empty() {
            issues.push(format!("edge {i} has an empty scope set"));
        }
        if !graph.dynamic {
            if e.scopes != ScopeSet::BEFORE {
                issues.push(format!("edge {i} in a static graph has scope {}", e.scopes));
            }
        } else if !e.scopes.has_frame_scope() && !e.scopes.is_during_only() {
            issues.push(format!("edge {i} has no frame or during scope"));
        }
    }
    issues
}

#[cfg(test)]
mod tests {
    use super::super::testfix::{graph_of, ontology};
    use super::*;
    use crate::perception::{generate_perception, PerceptionParams};
    use crate::situation::{Phase, Region, SituationBuilder};
    use crate::spatial::Direction;

    #[test]
    fn add_edge_merges_scopes() {
        let mut g = PerceptionGraph::default();
        let a = g.add_node(GraphNode::Object { debug: "a".into() });
        let b = g.add_node(GraphNode::Geon);
        g.add_edge(a, b, EdgeKind::HasGeon, ScopeSet::BEFORE);
        g.add_edge(a, b, EdgeKind::HasGeon, ScopeSet::AFTER);
        assert_eq!(g.edges.len(), 1);
        assert_eq!(g.edges[0].scopes, ScopeSet::BOTH);
    }

    #[test]
    fn box_on_ground_creates_contact_region() {
        let s = SituationBuilder::new()
            .object("box_0", "box")
            .in_region("box_0", Region::on("ground"), Phase::Before)
            .build();
        let g = graph_of(&s);
        let region = g
            .nodes
            .iter()
            .position(|n| {
                matches!(
                    n,
                    GraphNode::Region {
                        distance: Some(Distance::ExteriorButInContact),
                        direction: Some(d),
                    } if *d == Direction::ABOVE
                )
            })
            .expect("contact region node");
        assert!(g.in_edges(region).any(|e| e.kind == EdgeKind::InRegion));
        assert!(g
            .out_edges(region)
            .any(|e| e.kind == EdgeKind::ReferenceObject));
    }

    #[test]
    fn static_graph_scopes_all_before_and_valid() {
        let s = SituationBuilder::new().object("ball_0", "ball").build();
        let g = graph_of(&s);
        assert!(!g.dynamic);
        assert!(g.edges.iter().all(|e| e.scopes == ScopeSet::BEFORE));
        assert!(validate_graph(&g).is_empty());
        assert!(g.is_structurally_acyclic());
    }

    #[test]
    fn dynamic_graph_has_after_scope_and_valid() {
        let s = SituationBuilder::new()
            .object("mom_0", "mom")
            .object("cookie_0", "cookie")
            .action("eat", &[("eater", "mom_0"), ("eatee", "cookie_0")])
            .build();
        let o = ontology();
        let rep = generate_perception(&s, &o, &PerceptionParams::noiseless()).unwrap();
        assert_eq!(rep.frames.len(), 2);
        let g = to_graph(&rep);
        assert!(g.dynamic);
        assert!(g
            .edges
            .iter()
            .any(|e| e.scopes.contains(ScopeSet::AFTER) && !e.scopes.contains(ScopeSet::BEFORE)));
        assert!(validate_graph(&g).is_empty());
    }

    #[test]
    fn sub_parts_hang_below_their_whole() {
        let s = SituationBuilder::new()
            .object_with("mom_0", "mom", &[], true)
            .build();
        let g = graph_of(&s);
        let roots = g.object_roots();
        // Mom and the ground; head and torso are sub-parts, not roots.
        assert_eq!(roots.len(), 2);
        let mom = roots
            .iter()
            .copied()
            .find(|&r| g.out_edges(r).any(|e| e.kind == EdgeKind::SubPart))
            .expect("whole object with sub-parts");
        let boundary = g.object_boundary(mom);
        let sub_objects = boundary
            .iter()
            .filter(|&&n| g.nodes[n].is_object_like() && n != mom)
            .count();
        assert_eq!(sub_objects, 2);
    }
}
