//! The inheritance DAG of kinds, their inherited properties, object
//! structural schemata and action descriptions.
//!
//! An ontology is the curriculum designer's vocabulary: it is consulted by the
//! situation, template, language and perception generators but is never shown
//! to the learner. Six special nodes must be present in any ontology:
//! `thing`, `property`, `relation`, `action`, `perceivable` and
//! `can-fill-template-slot`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spatial::{CoarseSize, Direction, Distance, PathOperator};

/// Symbolic name of an ontology node. Case-insensitive: ids are normalized to
/// lowercase ASCII on construction.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(s: &str) -> NodeId {
        NodeId(s.to_ascii_lowercase())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> NodeId {
        NodeId::new(s)
    }
}

pub const THING: &str = "thing";
pub const PROPERTY: &str = "property";
pub const RELATION: &str = "relation";
pub const ACTION: &str = "action";
pub const PERCEIVABLE: &str = "perceivable";
pub const CAN_FILL_TEMPLATE_SLOT: &str = "can-fill-template-slot";

pub fn special_node_ids() -> [NodeId; 6] {
    [
        NodeId::new(THING),
        NodeId::new(PROPERTY),
        NodeId::new(RELATION),
        NodeId::new(ACTION),
        NodeId::new(PERCEIVABLE),
        NodeId::new(CAN_FILL_TEMPLATE_SLOT),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OntologyNode {
    pub id: NodeId,
    #[serde(default)]
    pub parents: BTreeSet<NodeId>,
    #[serde(default)]
    pub local_properties: BTreeSet<NodeId>,
}

/// One of an object's (or geon's) three axes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub label: String,
    pub curved: bool,
    pub directed: bool,
    pub aligned_to_gravity: bool,
    pub primary: bool,
}

impl AxisSpec {
    pub fn new(label: &str) -> AxisSpec {
        AxisSpec {
            label: label.to_owned(),
            curved: false,
            directed: false,
            aligned_to_gravity: false,
            primary: false,
        }
    }

    pub fn primary(mut self) -> AxisSpec {
        self.primary = true;
        self
    }

    pub fn gravity_aligned(mut self) -> AxisSpec {
        self.aligned_to_gravity = true;
        self
    }

    pub fn directed(mut self) -> AxisSpec {
        self.directed = true;
        self
    }

    pub fn curved(mut self) -> AxisSpec {
        self.curved = true;
        self
    }
}

/// Standard axis triple for an upright object: a primary gravity-aligned
/// vertical axis plus front-back and side-to-side axes.
pub fn upright_axes() -> [AxisSpec; 3] {
    [
        AxisSpec::new("bottom-to-top")
            .gravity_aligned()
            .directed()
            .primary(),
        AxisSpec::new("front-to-back").directed(),
        AxisSpec::new("side-to-side"),
    ]
}

/// Axis triple for an object with no distinguished orientation.
pub fn symmetric_axes() -> [AxisSpec; 3] {
    [
        AxisSpec::new("generating").primary(),
        AxisSpec::new("cross-1"),
        AxisSpec::new("cross-2"),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CrossSection {
    pub curved: bool,
    pub reflective_symmetry: bool,
    pub rotational_symmetry: bool,
}

impl CrossSection {
    pub const CIRCULAR: CrossSection = CrossSection {
        curved: true,
        reflective_symmetry: true,
        rotational_symmetry: true,
    };
    pub const SQUARE: CrossSection = CrossSection {
        curved: false,
        reflective_symmetry: true,
        rotational_symmetry: true,
    };
    pub const RECTANGULAR: CrossSection = CrossSection {
        curved: false,
        reflective_symmetry: true,
        rotational_symmetry: false,
    };
    pub const IRREGULAR: CrossSection = CrossSection {
        curved: false,
        reflective_symmetry: false,
        rotational_symmetry: false,
    };
    pub const OVAL: CrossSection = CrossSection {
        curved: true,
        reflective_symmetry: true,
        rotational_symmetry: false,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CrossSectionSize {
    Constant,
    SmallToLarge,
    LargeToSmall,
    SmallToLargeToSmall,
}

/// Volumetric shape primitive spec: three axes, a generating axis and a
/// description of the cross-section swept along it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeonSpec {
    pub cross_section: CrossSection,
    pub cross_section_size: CrossSectionSize,
    /// Index (0..3) into the owning schema's axes; usually the longest axis.
    pub generating_axis: usize,
    /// Coarse size relations among the three axes, by index.
    #[serde(default)]
    pub axis_size_relations: Vec<(usize, CoarseSize, usize)>,
}

impl GeonSpec {
    pub fn new(cross_section: CrossSection, size: CrossSectionSize) -> GeonSpec {
        GeonSpec {
            cross_section,
            cross_section_size: size,
            generating_axis: 0,
            axis_size_relations: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubObjectSlot {
    pub name: String,
    pub object_type: NodeId,
}

/// Region expressed over schema slot names (rather than situation objects).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemaRegion {
    pub reference: String,
    pub distance: Option<Distance>,
    pub direction: Option<Direction>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SchemaTarget {
    Slot(String),
    Region(SchemaRegion),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemaRelation {
    pub relation: NodeId,
    pub first: String,
    pub second: SchemaTarget,
}

/// How an object kind decomposes into sub-objects and a geon.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuralSchema {
    pub root_type: NodeId,
    #[serde(default)]
    pub sub_objects: Vec<SubObjectSlot>,
    #[serde(default)]
    pub internal_relations: Vec<SchemaRelation>,
    pub geon: Option<GeonSpec>,
    pub axes: [AxisSpec; 3],
}

impl StructuralSchema {
    /// Single-geon schema with no sub-objects; the default for leaf kinds
    /// that have no authored decomposition.
    pub fn simple(root_type: NodeId, geon: GeonSpec) -> StructuralSchema {
        StructuralSchema {
            root_type,
            sub_objects: Vec::new(),
            internal_relations: Vec::new(),
            geon: Some(geon),
            axes: symmetric_axes(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SemanticRole {
    Agent,
    Theme,
    Goal,
    Patient,
}

/// Variable name inside an action description.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VarId(String);

impl VarId {
    pub fn new(s: &str) -> VarId {
        VarId(s.to_owned())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

impl From<&str> for VarId {
    fn from(s: &str) -> VarId {
        VarId::new(s)
    }
}

/// Perceivable event-participant properties in the style of Dowty's
/// proto-roles. Attached to role variables by action descriptions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ProtoRole {
    VolitionallyInvolved,
    SentientOrPerceives,
    CausesChange,
    Moves,
    UndergoesChange,
    IncrementalTheme,
    Stationary,
    CausallyAffected,
}

/// Region over action-description variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionTemplate {
    pub reference: VarId,
    pub distance: Option<Distance>,
    pub direction: Option<Direction>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConditionTarget {
    Variable(VarId),
    Region(RegionTemplate),
}

/// Relation over action-description variables, used in pre/post/enduring and
/// during condition sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionRelation {
    pub relation: NodeId,
    pub first: VarId,
    pub second: ConditionTarget,
}

impl ConditionRelation {
    pub fn object(relation: &str, first: &str, second: &str) -> ConditionRelation {
        ConditionRelation {
            relation: NodeId::new(relation),
            first: VarId::new(first),
            second: ConditionTarget::Variable(VarId::new(second)),
        }
    }

    pub fn in_region(
        first: &str,
        reference: &str,
        distance: Option<Distance>,
        direction: Option<Direction>,
    ) -> ConditionRelation {
        ConditionRelation {
            relation: NodeId::new("in-region"),
            first: VarId::new(first),
            second: ConditionTarget::Region(RegionTemplate {
                reference: VarId::new(reference),
                distance,
                direction,
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PathEndpoint {
    Variable(VarId),
    Region(RegionTemplate),
}

/// Path over action-description variables, describing movement during the
/// action.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathTemplate {
    pub source: Option<PathEndpoint>,
    pub destination: Option<PathEndpoint>,
    pub operator: Option<PathOperator>,
    pub orientation_changes: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DuringDescription {
    #[serde(default)]
    pub paths: BTreeMap<VarId, PathTemplate>,
    #[serde(default)]
    pub continuous: Vec<ConditionRelation>,
    #[serde(default)]
    pub at_some_point: Vec<ConditionRelation>,
}

impl DuringDescription {
    pub fn is_empty(&self) -> bool {
        self.paths.is_empty() && self.continuous.is_empty() && self.at_some_point.is_empty()
    }
}

/// How an action kind is perceived: role variables, the relations that hold
/// before/after/throughout, what happens during, and the properties required
/// of (and projected onto) participants.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionDescription {
    pub roles: BTreeMap<SemanticRole, VarId>,
    #[serde(default)]
    pub preconditions: Vec<ConditionRelation>,
    #[serde(default)]
    pub postconditions: Vec<ConditionRelation>,
    #[serde(default)]
    pub enduring_conditions: Vec<ConditionRelation>,
    #[serde(default)]
    pub during: DuringDescription,
    /// Ontology properties a bound object must possess, per variable.
    #[serde(default)]
    pub required_properties: BTreeMap<VarId, BTreeSet<NodeId>>,
    /// Perceivable proto-role properties projected onto bound objects.
    #[serde(default)]
    pub proto_roles: BTreeMap<VarId, BTreeSet<ProtoRole>>,
    /// Variables not bound to semantic roles (e.g. the container a drunk
    /// liquid starts in).
    #[serde(default)]
    pub auxiliary_variables: BTreeSet<VarId>,
}

impl ActionDescription {
    pub fn role_var(&self, role: SemanticRole) -> Option<&VarId> {
        self.roles.get(&role)
    }

    fn all_condition_relations(&self) -> impl Iterator<Item = &ConditionRelation> {
        self.preconditions
            .iter()
            .chain(self.postconditions.iter())
            .chain(self.enduring_conditions.iter())
            .chain(self.during.continuous.iter())
            .chain(self.during.at_some_point.iter())
    }

    /// Variables mentioned anywhere in conditions or paths.
    pub fn mentioned_variables(&self) -> BTreeSet<VarId> {
        let mut vars = BTreeSet::new();
        for c in self.all_condition_relations() {
            vars.insert(c.first.clone());
            match &c.second {
                ConditionTarget::Variable(v) => {
                    vars.insert(v.clone());
                }
                ConditionTarget::Region(r) => {
                    vars.insert(r.reference.clone());
                }
            }
        }
        for (v, path) in &self.during.paths {
            vars.insert(v.clone());
            for ep in [&path.source, &path.destination].into_iter().flatten() {
                match ep {
                    PathEndpoint::Variable(v) => {
                        vars.insert(v.clone());
                    }
                    PathEndpoint::Region(r) => {
                        vars.insert(r.reference.clone());
                    }
                }
            }
        }
        vars
    }
}

/// A single violated invariant found by validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationIssue {
    /// Node id (or other subject) the issue concerns.
    pub subject: String,
    pub message: String,
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.subject, self.message)
    }
}

pub fn issues_to_error(issues: &[ValidationIssue]) -> Error {
    let text = issues
        .iter()
        .map(|i| format!("  - {i}"))
        .collect::<Vec<_>>()
        .join("\n");
    Error::ValidationFailed(text)
}

/// The complete world vocabulary. Immutable after construction; safe to share
/// across threads.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Ontology {
    pub nodes: BTreeMap<NodeId, OntologyNode>,
    #[serde(default)]
    pub schemata: BTreeMap<NodeId, StructuralSchema>,
    #[serde(default)]
    pub action_descriptions: BTreeMap<NodeId, ActionDescription>,
    /// Coarse size grade (0 smallest .. 4 largest) per object kind, used to
    /// derive perceivable size relations.
    #[serde(default)]
    pub size_grades: BTreeMap<NodeId, u8>,
}

impl Ontology {
    pub fn node(&self, id: &NodeId) -> Result<&OntologyNode> {
        self.nodes
            .get(id)
            .ok_or_else(|| Error::UnknownNode(id.to_string()))
    }

    pub fn contains(&self, id: &NodeId) -> bool {
        self.nodes.contains_key(id)
    }

    /// All ancestors of `id` including `id` itself. Terminates even on
    /// malformed (cyclic) input.
    pub fn ancestors(&self, id: &NodeId) -> Result<BTreeSet<NodeId>> {
        self.node(id)?;
        let mut seen: BTreeSet<NodeId> = BTreeSet::new();
        let mut stack = vec![id.clone()];
        while let Some(n) = stack.pop() {
            if !seen.insert(n.clone()) {
                continue;
            }
            if let Some(node) = self.nodes.get(&n) {
                for p in &node.parents {
                    stack.push(p.clone());
                }
            }
        }
        Ok(seen)
    }

    /// All descendants of `id` including `id` itself.
    pub fn descendants(&self, id: &NodeId) -> Result<BTreeSet<NodeId>> {
        self.node(id)?;
        let mut children: BTreeMap<&NodeId, Vec<&NodeId>> = BTreeMap::new();
        for node in self.nodes.values() {
            for p in &node.parents {
                children.entry(p).or_default().push(&node.id);
            }
        }
        let mut seen: BTreeSet<NodeId> = BTreeSet::new();
        let mut stack = vec![id];
        while let Some(n) = stack.pop() {
            if !seen.insert(n.clone()) {
                continue;
            }
            if let Some(cs) = children.get(n) {
                stack.extend(cs.iter().copied());
            }
        }
        Ok(seen)
    }

    /// True iff `ancestor` is reachable from `node` via parent edges
    /// (reflexive).
    pub fn is_subtype(&self, node: &NodeId, ancestor: &NodeId) -> Result<bool> {
        self.node(ancestor)?;
        Ok(self.ancestors(node)?.contains(ancestor))
    }

    /// Union of local properties along all ancestor paths.
    pub fn properties_of(&self, id: &NodeId) -> Result<BTreeSet<NodeId>> {
        let mut props = BTreeSet::new();
        for anc in self.ancestors(id)? {
            if let Some(node) = self.nodes.get(&anc) {
                props.extend(node.local_properties.iter().cloned());
            }
        }
        Ok(props)
    }

    /// Descendants of `root` that can fill template slots and satisfy the
    /// property constraints.
    pub fn template_fillers(
        &self,
        root: &NodeId,
        required: &BTreeSet<NodeId>,
        banned: &BTreeSet<NodeId>,
    ) -> Result<BTreeSet<NodeId>> {
        let property = NodeId::new(PROPERTY);
        for p in required.iter().chain(banned.iter()) {
            if !self.contains(p) || !self.is_subtype(p, &property)? {
                return Err(Error::UnknownProperty(p.to_string()));
            }
        }
        let slot_marker = NodeId::new(CAN_FILL_TEMPLATE_SLOT);
        let mut fillers = BTreeSet::new();
        for cand in self.descendants(root)? {
            let props = self.properties_of(&cand)?;
            if props.contains(&slot_marker)
                && required.iter().all(|r| props.contains(r))
                && banned.iter().all(|b| !props.contains(b))
            {
                fillers.insert(cand);
            }
        }
        Ok(fillers)
    }

    pub fn size_grade(&self, id: &NodeId) -> Option<u8> {
        // Inherited: the nearest ancestor with an explicit grade wins;
        // explicit own grade first.
        if let Some(g) = self.size_grades.get(id) {
            return Some(*g);
        }
        let ancestors = self.ancestors(id).ok()?;
        let mut grades: Vec<u8> = ancestors
            .iter()
            .filter_map(|a| self.size_grades.get(a).copied())
            .collect();
        grades.sort_unstable();
        grades.first().copied()
    }

    /// Structural schema for an object type, falling back to the nearest
    /// ancestor's schema.
    pub fn schema_for(&self, id: &NodeId) -> Option<&StructuralSchema> {
        if let Some(s) = self.schemata.get(id) {
            return Some(s);
        }
        // Walk up breadth-first so the closest ancestor schema wins.
        let mut frontier: Vec<&NodeId> = vec![id];
        let mut seen: BTreeSet<&NodeId> = BTreeSet::new();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for n in frontier {
                if !seen.insert(n) {
                    continue;
                }
                if let Some(s) = self.schemata.get(n) {
                    return Some(s);
                }
                if let Some(node) = self.nodes.get(n) {
                    next.extend(node.parents.iter());
                }
            }
            frontier = next;
        }
        None
    }

    /// Check every structural invariant; the report is empty iff the
    /// ontology is well-formed. Validation never fails — malformed input
    /// yields report entries.
    pub fn validate(&self) -> Vec<ValidationIssue> {
        let mut issues = Vec::new();

        for special in special_node_ids() {
            if !self.contains(&special) {
                issues.push(ValidationIssue {
                    subject: special.to_string(),
                    message: "missing special node".into(),
                });
            }
        }

        for node in self.nodes.values() {
            for p in &node.parents {
                if !self.contains(p) {
                    issues.push(ValidationIssue {
                        subject: node.id.to_string(),
                        message: format!("unknown parent `{p}`"),
                    });
                }
            }
        }

        issues.extend(self.find_cycles());

        // Every non-root node must reach a special node.
        let specials: BTreeSet<NodeId> = special_node_ids().into_iter().collect();
        for node in self.nodes.values() {
            if node.parents.is_empty() || specials.contains(&node.id) {
                continue;
            }
            if let Ok(anc) = self.ancestors(&node.id) {
                if anc.intersection(&specials).next().is_none() {
                    issues.push(ValidationIssue {
                        subject: node.id.to_string(),
                        message: "does not reach any special node".into(),
                    });
                }
            }
        }

        // Properties must be nodes under `property`.
        let property = NodeId::new(PROPERTY);
        if self.contains(&property) {
            for node in self.nodes.values() {
                for prop in &node.local_properties {
                    let under = self.is_subtype(prop, &property).unwrap_or(false);
                    if !under {
                        issues.push(ValidationIssue {
                            subject: node.id.to_string(),
                            message: format!("property `{prop}` is not a node under `property`"),
                        });
                    }
                }
            }
        }

        // Schema keys descend from `thing`; action keys from `action`.
        let thing = NodeId::new(THING);
        let action = NodeId::new(ACTION);
        for key in self.schemata.keys() {
            if self.contains(&thing) && !self.is_subtype(key, &thing).unwrap_or(false) {
                issues.push(ValidationIssue {
                    subject: key.to_string(),
                    message: "schema key is not a descendant of `thing`".into(),
                });
            }
        }
        for key in self.action_descriptions.keys() {
            if self.contains(&action) && !self.is_subtype(key, &action).unwrap_or(false) {
                issues.push(ValidationIssue {
                    subject: key.to_string(),
                    message: "action description key is not a descendant of `action`".into(),
                });
            }
        }

        issues.extend(self.validate_schemata());
        issues.extend(self.validate_action_descriptions());

        issues
    }

    fn find_cycles(&self) -> Vec<ValidationIssue> {
        // Iterative three-color DFS over parent edges.
        #[derive(Clone, Copy, PartialEq)]
        enum Color {
            White,
            Gray,
            Black,
        }
        let mut color: BTreeMap<&NodeId, Color> =
            self.nodes.keys().map(|k| (k, Color::White)).collect();
        let mut issues = Vec::new();
        for start in self.nodes.keys() {
            if color[start] != Color::White {
                continue;
            }
            let mut stack: Vec<(&NodeId, bool)> = vec![(start, false)];
            let mut path: Vec<&NodeId> = Vec::new();
            while let Some((n, done)) = stack.pop() {
                if done {
                    color.insert(n, Color::Black);
                    path.pop();
                    continue;
                }
                match color[n] {
                    Color::Black => continue,
                    Color::Gray => continue,
                    Color::White => {}
                }
                color.insert(n, Color::Gray);
                path.push(n);
                stack.push((n, true));
                if let Some(node) = self.nodes.get(n) {
                    for p in &node.parents {
                        if !self.nodes.contains_key(p) {
                            continue;
                        }
                        match color[p] {
                            Color::White => stack.push((p, false)),
                            Color::Gray => {
                                let pos = path.iter().position(|x| *x == p).unwrap_or(0);
                                let members: Vec<String> =
                                    path[pos..].iter().map(|x| x.to_string()).collect();
                                issues.push(ValidationIssue {
                                    subject: p.to_string(),
                                    message: format!(
                                        "cycle in parent edges through {}",
                                        members.join(", ")
                                    ),
                                });
                            }
                            Color::Black => {}
                        }
                    }
                }
            }
        }
        issues
    }

    fn validate_schemata(&self) -> Vec<ValidationIssue> {
        let mut issues = Vec::new();
        for (key, schema) in &self.schemata {
            let primaries = schema.axes.iter().filter(|a| a.primary).count();
            if primaries != 1 {
                issues.push(ValidationIssue {
                    subject: key.to_string(),
                    message: format!("schema has {primaries} primary axes, expected exactly 1"),
                });
            }
            if let Some(geon) = &schema.geon {
                if geon.generating_axis >= 3 {
                    issues.push(ValidationIssue {
                        subject: key.to_string(),
                        message: "geon generating axis index out of range".into(),
                    });
                }
            }
            let slot_names: BTreeSet<&str> =
                schema.sub_objects.iter().map(|s| s.name.as_str()).collect();
            if slot_names.len() != schema.sub_objects.len() {
                issues.push(ValidationIssue {
                    subject: key.to_string(),
                    message: "duplicate sub-object slot names".into(),
                });
            }
            for rel in &schema.internal_relations {
                let mut check = |name: &str| {
                    if !slot_names.contains(name) {
                        issues.push(ValidationIssue {
                            subject: key.to_string(),
                            message: format!("internal relation references unknown slot `{name}`"),
                        });
                    }
                };
                check(&rel.first);
                match &rel.second {
                    SchemaTarget::Slot(s) => check(s),
                    SchemaTarget::Region(r) => check(&r.reference),
                }
            }
            // Finite expansion: following sub-object types must never come
            // back to this schema's key.
            if self.schema_reaches(key, key) {
                issues.push(ValidationIssue {
                    subject: key.to_string(),
                    message: "schema recursion: sub-objects expand back into this schema".into(),
                });
            }
        }
        issues
    }

    fn schema_reaches(&self, from: &NodeId, target: &NodeId) -> bool {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<NodeId> = self
            .schemata
            .get(from)
            .map(|s| {
                s.sub_objects
                    .iter()
                    .map(|so| so.object_type.clone())
                    .collect()
            })
            .unwrap_or_default();
        while let Some(t) = stack.pop() {
            if t == *target {
                return true;
            }
            if !seen.insert(t.clone()) {
                continue;
            }
            if let Some(s) = self.schemata.get(&t) {
                stack.extend(s.sub_objects.iter().map(|so| so.object_type.clone()));
            }
        }
        false
    }

    fn validate_action_descriptions(&self) -> Vec<ValidationIssue> {
        let mut issues = Vec::new();
        for (key, desc) in &self.action_descriptions {
            let mut known: BTreeSet<&VarId> = desc.roles.values().collect();
            known.extend(desc.auxiliary_variables.iter());
            for v in desc.mentioned_variables() {
                if !known.contains(&v) {
                    issues.push(ValidationIssue {
                        subject: key.to_string(),
                        message: format!(
                            "variable `{v}` used in a condition is neither a role nor auxiliary"
                        ),
                    });
                }
            }
        }
        issues
    }
}

/// Convenience builder for assembling ontologies in code.
#[derive(Debug, Default)]
pub struct OntologyBuilder {
    ontology: Ontology,
}

impl OntologyBuilder {
    pub fn new() -> OntologyBuilder {
        OntologyBuilder::default()
    }

    pub fn node(&mut self, id: &str, parents: &[&str]) -> &mut Self {
        let id = NodeId::new(id);
        self.ontology.nodes.insert(
            id.clone(),
            OntologyNode {
                id,
                parents: parents.iter().map(|p| NodeId::new(p)).collect(),
                local_properties: BTreeSet::new(),
            },
        );
        self
    }

    pub fn node_with_properties(
        &mut self,
        id: &str,
        parents: &[&str],
        properties: &[&str],
    ) -> &mut Self {
        let id = NodeId::new(id);
        self.ontology.nodes.insert(
            id.clone(),
            OntologyNode {
                id,
                parents: parents.iter().map(|p| NodeId::new(p)).collect(),
                local_properties: properties.iter().map(|p| NodeId::new(p)).collect(),
            },
        );
        self
    }

    pub fn add_property(&mut self, id: &str, property: &str) -> &mut Self {
        if let Some(node) = self.ontology.nodes.get_mut(&NodeId::new(id)) {
            node.local_properties.insert(NodeId::new(property));
        }
        self
    }

    pub fn schema(&mut self, schema: StructuralSchema) -> &mut Self {
        self.ontology
            .schemata
            .insert(schema.root_type.clone(), schema);
        self
    }

    pub fn action_description(&mut self, id: &str, desc: ActionDescription) -> &mut Self {
        self.ontology
            .action_descriptions
            .insert(NodeId::new(id), desc);
        self
    }

    pub fn size_grade(&mut self, id: &str, grade: u8) -> &mut Self {
        self.ontology.size_grades.insert(NodeId::new(id), grade);
        self
    }

    pub fn build(&mut self) -> Ontology {
        std::mem::take(&mut self.ontology)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> Ontology {
        let mut b = OntologyBuilder::new();
        b.node(THING, &[])
            .node(PROPERTY, &[])
            .node(RELATION, &[])
            .node(ACTION, &[])
            .node(PERCEIVABLE, &[])
            .node(CAN_FILL_TEMPLATE_SLOT, &[PROPERTY])
            .node_with_properties("animal", &[THING], &["animate"])
            .node("animate", &[PROPERTY])
            .node("can-fly", &[PROPERTY])
            .node_with_properties("dog", &["animal"], &[CAN_FILL_TEMPLATE_SLOT])
            .node_with_properties("bird", &["animal"], &[CAN_FILL_TEMPLATE_SLOT, "can-fly"])
            .node_with_properties("chair", &[THING], &[CAN_FILL_TEMPLATE_SLOT]);
        b.build()
    }

    #[test]
    fn tiny_ontology_validates() {
        assert!(tiny().validate().is_empty());
    }

    #[test]
    fn missing_special_node_reported() {
        let mut o = tiny();
        o.nodes.remove(&NodeId::new(PERCEIVABLE));
        let issues = o.validate();
        assert!(issues
            .iter()
            .any(|i| i.subject == PERCEIVABLE && i.message.contains("missing special node")));
    }

    #[test]
    fn cycle_reported_with_members() {
        let mut o = tiny();
        o.nodes.get_mut(&NodeId::new("animal")).unwrap().parents =
            [NodeId::new("dog")].into_iter().collect();
        let issues = o.validate();
        let cycle = issues
            .iter()
            .find(|i| i.message.contains("cycle"))
            .expect("cycle issue");
        assert!(cycle.message.contains("animal") && cycle.message.contains("dog"));
    }

    #[test]
    fn is_subtype_reflexive_and_transitive() {
        let o = tiny();
        assert!(o.is_subtype(&"thing".into(), &"thing".into()).unwrap());
        assert!(o.is_subtype(&"dog".into(), &"animal".into()).unwrap());
        assert!(o.is_subtype(&"dog".into(), &"thing".into()).unwrap());
        assert!(!o.is_subtype(&"chair".into(), &"animal".into()).unwrap());
    }

    #[test]
    fn unknown_id_errors() {
        let o = tiny();
        assert!(matches!(
            o.is_subtype(&"wug".into(), &"thing".into()),
            Err(Error::UnknownNode(_))
        ));
    }

    #[test]
    fn properties_inherit_down() {
        let o = tiny();
        let props = o.properties_of(&"dog".into()).unwrap();
        assert!(props.contains(&NodeId::new("animate")));
        // No properties anywhere up the chain.
        assert!(o.properties_of(&"property".into()).unwrap().is_empty());
    }

    #[test]
    fn diamond_inheritance_dedupes_properties() {
        let mut b = OntologyBuilder::new();
        b.node(THING, &[])
            .node(PROPERTY, &[])
            .node(RELATION, &[])
            .node(ACTION, &[])
            .node(PERCEIVABLE, &[])
            .node(CAN_FILL_TEMPLATE_SLOT, &[PROPERTY])
            .node("p", &[PROPERTY])
            .node_with_properties("a", &[THING], &["p"])
            .node_with_properties("b", &[THING], &["p"])
            .node("c", &["a", "b"]);
        let o = b.build();
        let props = o.properties_of(&"c".into()).unwrap();
        assert_eq!(props.iter().filter(|x| x.as_str() == "p").count(), 1);
    }

    #[test]
    fn template_fillers_respect_constraints() {
        let o = tiny();
        let none = BTreeSet::new();
        let all = o.template_fillers(&"animal".into(), &none, &none).unwrap();
        assert_eq!(
            all,
            ["dog", "bird"].iter().map(|s| NodeId::new(s)).collect()
        );
        let fly: BTreeSet<NodeId> = [NodeId::new("can-fly")].into_iter().collect();
        let fliers = o.template_fillers(&"animal".into(), &fly, &none).unwrap();
        assert_eq!(fliers, [NodeId::new("bird")].into_iter().collect());
        // Contradictory constraints give the empty set.
        let both = o.template_fillers(&"animal".into(), &fly, &fly).unwrap();
        assert!(both.is_empty());
    }

    #[test]
    fn template_fillers_unknown_property_errors() {
        let o = tiny();
        let bad: BTreeSet<NodeId> = [NodeId::new("sparkly")].into_iter().collect();
        assert!(matches!(
            o.template_fillers(&"animal".into(), &bad, &BTreeSet::new()),
            Err(Error::UnknownProperty(_))
        ));
    }

    #[test]
    fn node_ids_case_insensitive() {
        assert_eq!(NodeId::new("Mom"), NodeId::new("mom"));
    }
}
