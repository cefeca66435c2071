//! Ground-truth scene representation: salient typed objects, relations over
//! regions, and actions with role bindings. Generators consume situations;
//! the learner never sees them.
//!
//! All location is region-relative — there are no coordinates anywhere.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ontology::{
    ConditionTarget, NodeId, Ontology, PathEndpoint, SemanticRole, ValidationIssue, VarId, THING,
};
use crate::spatial::{AxisKind, Direction, Distance, PathOperator};

/// Unique id of an object within one situation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjectHandle(String);

impl ObjectHandle {
    pub fn new(s: &str) -> ObjectHandle {
        ObjectHandle(s.to_owned())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ObjectHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for ObjectHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "@{}", self.0)
    }
}

impl From<&str> for ObjectHandle {
    fn from(s: &str) -> ObjectHandle {
        ObjectHandle::new(s)
    }
}

pub const GROUND_HANDLE: &str = "ground";
pub const GROUND_TYPE: &str = "ground";

/// Asserted-property ids with special meaning to the generators.
pub const IS_SPEAKER: &str = "is-speaker";
pub const IS_ADDRESSEE: &str = "is-addressee";

/// Syntax hints are an open set; generators ignore (and warn about) hints
/// they do not understand.
pub const PREFER_PASSIVE: &str = "prefer-passive";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SituationObject {
    pub handle: ObjectHandle,
    pub object_type: NodeId,
    #[serde(default)]
    pub asserted_properties: BTreeSet<NodeId>,
    pub salient: bool,
}

impl SituationObject {
    pub fn is_speaker(&self) -> bool {
        self.asserted_properties.contains(&NodeId::new(IS_SPEAKER))
    }

    pub fn is_addressee(&self) -> bool {
        self.asserted_properties
            .contains(&NodeId::new(IS_ADDRESSEE))
    }
}

/// Location relative to a reference object: a distance class and/or a
/// direction along one of the reference object's (symbolic) axes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Region {
    pub reference: ObjectHandle,
    pub distance: Option<Distance>,
    pub direction: Option<Direction>,
}

impl Region {
    /// At least one of distance/direction must be present.
    pub fn new(
        reference: ObjectHandle,
        distance: Option<Distance>,
        direction: Option<Direction>,
    ) -> Result<Region> {
        if distance.is_none() && direction.is_none() {
            return Err(Error::Invalid(
                "region needs a distance or a direction".into(),
            ));
        }
        Ok(Region {
            reference,
            distance,
            direction,
        })
    }

    pub fn distance(reference: &str, distance: Distance) -> Region {
        Region {
            reference: ObjectHandle::new(reference),
            distance: Some(distance),
            direction: None,
        }
    }

    /// "On": in contact with and above the reference object.
    pub fn on(reference: &str) -> Region {
        Region {
            reference: ObjectHandle::new(reference),
            distance: Some(Distance::ExteriorButInContact),
            direction: Some(Direction::ABOVE),
        }
    }

    fn is_degenerate(&self) -> bool {
        self.distance.is_none() && self.direction.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PathTarget {
    Object(ObjectHandle),
    Region(Region),
}

/// Movement of one object during an action.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpatialPath {
    pub source: Option<PathTarget>,
    pub destination: Option<PathTarget>,
    pub operator: Option<PathOperator>,
    pub reference_axis: Option<AxisKind>,
    pub orientation_changes: bool,
}

impl SpatialPath {
    /// At least one of source/destination/operator must be present.
    pub fn new(
        source: Option<PathTarget>,
        destination: Option<PathTarget>,
        operator: Option<PathOperator>,
    ) -> Result<SpatialPath> {
        if source.is_none() && destination.is_none() && operator.is_none() {
            return Err(Error::Invalid(
                "path needs a source, destination or operator".into(),
            ));
        }
        Ok(SpatialPath {
            source,
            destination,
            operator,
            reference_axis: None,
            orientation_changes: false,
        })
    }
}

/// Which frame(s) of the situation a relation holds in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Phase {
    Before,
    After,
    Both,
}

impl Phase {
    pub fn includes_before(self) -> bool {
        matches!(self, Phase::Before | Phase::Both)
    }

    pub fn includes_after(self) -> bool {
        matches!(self, Phase::After | Phase::Both)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RelationTarget {
    Object(ObjectHandle),
    Region(Region),
}

/// The `in-region` relation id; such relations must take a region as second
/// argument.
pub const IN_REGION: &str = "in-region";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SituationRelation {
    pub relation: NodeId,
    pub first: ObjectHandle,
    pub second: RelationTarget,
    pub phase: Phase,
}

/// A phase-free relation instance, as returned by [`implied_relations`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroundedRelation {
    pub relation: NodeId,
    pub first: ObjectHandle,
    pub second: RelationTarget,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SituationAction {
    pub action_type: NodeId,
    /// Role and auxiliary variables of the action description mapped to
    /// situation objects. Auxiliary variables may stay unbound when no
    /// condition needs them.
    pub bindings: BTreeMap<VarId, ObjectHandle>,
}

impl SituationAction {
    pub fn bound(&self, var: &VarId) -> Option<&ObjectHandle> {
        self.bindings.get(var)
    }
}

/// An immutable concrete scene. Construct through [`SituationBuilder`], which
/// always includes the ground.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Situation {
    pub objects: BTreeMap<ObjectHandle, SituationObject>,
    #[serde(default)]
    pub relations: Vec<SituationRelation>,
    #[serde(default)]
    pub actions: Vec<SituationAction>,
    #[serde(default)]
    pub gazed_at: BTreeSet<ObjectHandle>,
    #[serde(default)]
    pub syntax_hints: BTreeSet<String>,
}

impl Situation {
    pub fn object(&self, handle: &ObjectHandle) -> Result<&SituationObject> {
        self.objects
            .get(handle)
            .ok_or_else(|| Error::UnknownHandle(handle.to_string()))
    }

    pub fn salient_objects(&self) -> impl Iterator<Item = &SituationObject> {
        self.objects.values().filter(|o| o.salient)
    }

    pub fn speaker(&self) -> Option<&SituationObject> {
        self.objects.values().find(|o| o.is_speaker())
    }

    /// Effective properties of an object: asserted plus inherited from its
    /// ontology type.
    pub fn effective_properties(
        &self,
        ontology: &Ontology,
        handle: &ObjectHandle,
    ) -> Result<BTreeSet<NodeId>> {
        let obj = self.object(handle)?;
        let mut props = ontology.properties_of(&obj.object_type)?;
        props.extend(obj.asserted_properties.iter().cloned());
        Ok(props)
    }
}

/// Check every situation invariant against an ontology. Empty report iff
/// the situation is well-formed; never errors.
pub fn validate_situation(situation: &Situation, ontology: &Ontology) -> Vec<ValidationIssue> {
    let mut issues = Vec::new();
    let thing = NodeId::new(THING);
    let in_region = NodeId::new(IN_REGION);

    if !situation
        .objects
        .values()
        .any(|o| o.object_type == NodeId::new(GROUND_TYPE))
    {
        issues.push(ValidationIssue {
            subject: "situation".into(),
            message: "no ground object present".into(),
        });
    }

    for obj in situation.objects.values() {
        match ontology.is_subtype(&obj.object_type, &thing) {
            Ok(true) => {}
            Ok(false) => issues.push(ValidationIssue {
                subject: obj.handle.to_string(),
                message: format!("type `{}` is not a descendant of `thing`", obj.object_type),
            }),
            Err(_) => issues.push(ValidationIssue {
                subject: obj.handle.to_string(),
                message: format!("unknown object type `{}`", obj.object_type),
            }),
        }
    }

    let speakers = situation
        .objects
        .values()
        .filter(|o| o.is_speaker())
        .count();
    if speakers > 1 {
        issues.push(ValidationIssue {
            subject: "situation".into(),
            message: format!("{speakers} speakers; at most one allowed"),
        });
    }
    let addressees = situation
        .objects
        .values()
        .filter(|o| o.is_addressee())
        .count();
    if addressees > 1 {
        issues.push(ValidationIssue {
            subject: "situation".into(),
            message: format!("{addressees} addressees; at most one allowed"),
        });
    }

    let check_handle = |h: &ObjectHandle, ctx: &str, issues: &mut Vec<ValidationIssue>| {
        if !situation.objects.contains_key(h) {
            issues.push(ValidationIssue {
                subject: h.to_string(),
                message: format!("dangling handle referenced by {ctx}"),
            });
        }
    };

    for rel in &situation.relations {
        check_handle(&rel.first, "a relation", &mut issues);
        match &rel.second {
            RelationTarget::Object(h) => {
                check_handle(h, "a relation", &mut issues);
                if rel.relation == in_region {
                    issues.push(ValidationIssue {
                        subject: rel.first.to_string(),
                        message: "in-region relation must take a region as second argument".into(),
                    });
                }
            }
            RelationTarget::Region(r) => {
                check_handle(&r.reference, "a region", &mut issues);
                if r.is_degenerate() {
                    issues.push(ValidationIssue {
                        subject: r.reference.to_string(),
                        message: "region with neither distance nor direction".into(),
                    });
                }
            }
        }
    }

    for h in &situation.gazed_at {
        check_handle(h, "gaze", &mut issues);
    }

    for action in &situation.actions {
        let desc = match ontology.action_descriptions.get(&action.action_type) {
            Some(d) => d,
            None => {
                issues.push(ValidationIssue {
                    subject: action.action_type.to_string(),
                    message: "no action description in the ontology".into(),
                });
                continue;
            }
        };
        for (role, var) in &desc.roles {
            if !action.bindings.contains_key(var) {
                issues.push(ValidationIssue {
                    subject: action.action_type.to_string(),
                    message: format!("role {role:?} (variable `{var}`) is unbound"),
                });
            }
        }
        for (var, handle) in &action.bindings {
            check_handle(handle, "an action binding", &mut issues);
            if let Some(required) = desc.required_properties.get(var) {
                let props = match situation.effective_properties(ontology, handle) {
                    Ok(p) => p,
                    Err(_) => continue, // dangling handle already reported
                };
                for req in required {
                    if !props.contains(req) {
                        issues.push(ValidationIssue {
                            subject: handle.to_string(),
                            message: format!(
                                "bound to `{var}` of {} but lacks required property `{req}`",
                                action.action_type
                            ),
                        });
                    }
                }
            }
        }
    }

    issues
}

/// Resolve a region template over action variables into a concrete region.
fn bind_region_template(
    action: &SituationAction,
    template: &crate::ontology::RegionTemplate,
) -> Result<Region> {
    let reference = action
        .bound(&template.reference)
        .ok_or_else(|| Error::UnboundVariable(template.reference.to_string()))?
        .clone();
    Region::new(reference, template.distance, template.direction)
}

fn bind_condition(
    action: &SituationAction,
    cond: &crate::ontology::ConditionRelation,
) -> Result<GroundedRelation> {
    let first = action
        .bound(&cond.first)
        .ok_or_else(|| Error::UnboundVariable(cond.first.to_string()))?
        .clone();
    let second = match &cond.second {
        ConditionTarget::Variable(v) => RelationTarget::Object(
            action
                .bound(v)
                .ok_or_else(|| Error::UnboundVariable(v.to_string()))?
                .clone(),
        ),
        ConditionTarget::Region(r) => RelationTarget::Region(bind_region_template(action, r)?),
    };
    Ok(GroundedRelation {
        relation: cond.relation.clone(),
        first,
        second,
    })
}

/// Resolve a path template over action variables into a concrete path.
pub fn bind_path_template(
    action: &SituationAction,
    template: &crate::ontology::PathTemplate,
) -> Result<SpatialPath> {
    let bind_endpoint = |ep: &Option<PathEndpoint>| -> Result<Option<PathTarget>> {
        Ok(match ep {
            None => None,
            Some(PathEndpoint::Variable(v)) => Some(PathTarget::Object(
                action
                    .bound(v)
                    .ok_or_else(|| Error::UnboundVariable(v.to_string()))?
                    .clone(),
            )),
            Some(PathEndpoint::Region(r)) => {
                Some(PathTarget::Region(bind_region_template(action, r)?))
            }
        })
    };
    Ok(SpatialPath {
        source: bind_endpoint(&template.source)?,
        destination: bind_endpoint(&template.destination)?,
        operator: template.operator,
        reference_axis: None,
        orientation_changes: template.orientation_changes,
    })
}

/// Which frame's relations to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FramePhase {
    Before,
    After,
}

/// Relations holding in one frame: those asserted for the phase plus the
/// bound pre/post/enduring conditions of every action.
pub fn implied_relations(
    situation: &Situation,
    ontology: &Ontology,
    phase: FramePhase,
) -> Result<BTreeSet<GroundedRelation>> {
    let mut out = BTreeSet::new();
    for rel in &situation.relations {
        let included = match phase {
            FramePhase::Before => rel.phase.includes_before(),
            FramePhase::After => rel.phase.includes_after(),
        };
        if included {
            out.insert(GroundedRelation {
                relation: rel.relation.clone(),
                first: rel.first.clone(),
                second: rel.second.clone(),
            });
        }
    }
    for action in &situation.actions {
        let desc = ontology
            .action_descriptions
            .get(&action.action_type)
            .ok_or_else(|| Error::MissingActionDescription(action.action_type.to_string()))?;
        let phase_conditions = match phase {
            FramePhase::Before => &desc.preconditions,
            FramePhase::After => &desc.postconditions,
        };
        for cond in phase_conditions
            .iter()
            .chain(desc.enduring_conditions.iter())
        {
            out.insert(bind_condition(action, cond)?);
        }
    }
    Ok(out)
}

/// Assembles situations; the ground object is added up front.
#[derive(Debug)]
pub struct SituationBuilder {
    situation: Situation,
}

impl Default for SituationBuilder {
    fn default() -> Self {
        SituationBuilder::new()
    }
}

impl SituationBuilder {
    pub fn new() -> SituationBuilder {
        let mut objects = BTreeMap::new();
        let ground = ObjectHandle::new(GROUND_HANDLE);
        objects.insert(
            ground.clone(),
            SituationObject {
                handle: ground,
                object_type: NodeId::new(GROUND_TYPE),
                asserted_properties: BTreeSet::new(),
                salient: false,
            },
        );
        SituationBuilder {
            situation: Situation {
                objects,
                relations: Vec::new(),
                actions: Vec::new(),
                gazed_at: BTreeSet::new(),
                syntax_hints: BTreeSet::new(),
            },
        }
    }

    pub fn object(&mut self, handle: &str, object_type: &str) -> &mut Self {
        self.object_with(handle, object_type, &[], true)
    }

    pub fn object_with(
        &mut self,
        handle: &str,
        object_type: &str,
        properties: &[&str],
        salient: bool,
    ) -> &mut Self {
        let handle = ObjectHandle::new(handle);
        self.situation.objects.insert(
            handle.clone(),
            SituationObject {
                handle,
                object_type: NodeId::new(object_type),
                asserted_properties: properties.iter().map(|p| NodeId::new(p)).collect(),
                salient,
            },
        );
        self
    }

    pub fn add_property(&mut self, handle: &str, property: &str) -> &mut Self {
        if let Some(obj) = self.situation.objects.get_mut(&ObjectHandle::new(handle)) {
            obj.asserted_properties.insert(NodeId::new(property));
        }
        self
    }

    pub fn relation(
        &mut self,
        relation: &str,
        first: &str,
        second: RelationTarget,
        phase: Phase,
    ) -> &mut Self {
        self.situation.relations.push(SituationRelation {
            relation: NodeId::new(relation),
            first: ObjectHandle::new(first),
            second,
            phase,
        });
        self
    }

    /// `first` located in `region`, in the given phase.
    pub fn in_region(&mut self, first: &str, region: Region, phase: Phase) -> &mut Self {
        self.relation(IN_REGION, first, RelationTarget::Region(region), phase)
    }

    pub fn action(&mut self, action_type: &str, bindings: &[(&str, &str)]) -> &mut Self {
        self.situation.actions.push(SituationAction {
            action_type: NodeId::new(action_type),
            bindings: bindings
                .iter()
                .map(|(v, h)| (VarId::new(v), ObjectHandle::new(h)))
                .collect(),
        });
        self
    }

    pub fn gaze(&mut self, handle: &str) -> &mut Self {
        self.situation.gazed_at.insert(ObjectHandle::new(handle));
        self
    }

    pub fn syntax_hint(&mut self, hint: &str) -> &mut Self {
        self.situation.syntax_hints.insert(hint.to_owned());
        self
    }

    pub fn build(&mut self) -> Situation {
        self.situation.clone()
    }
}

/// Role variable of an action's description, resolved to a bound handle.
pub fn role_binding<'a>(
    action: &'a SituationAction,
    ontology: &Ontology,
    role: SemanticRole,
) -> Option<&'a ObjectHandle> {
    let desc = ontology.action_descriptions.get(&action.action_type)?;
    action.bound(desc.role_var(role)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::{
        ActionDescription, ConditionRelation, OntologyBuilder, ACTION, CAN_FILL_TEMPLATE_SLOT,
        PERCEIVABLE, PROPERTY, RELATION,
    };

    fn test_ontology() -> Ontology {
        let mut b = OntologyBuilder::new();
        b.node(THING, &[])
            .node(PROPERTY, &[])
            .node(RELATION, &[])
            .node(ACTION, &[])
            .node(PERCEIVABLE, &[])
            .node(CAN_FILL_TEMPLATE_SLOT, &[PROPERTY])
            .node(IN_REGION, &[RELATION])
            .node("has", &[RELATION])
            .node("liquid", &[PROPERTY])
            .node("ground", &[THING])
            .node("ball", &[THING])
            .node("cookie", &[THING])
            .node("mom", &[THING])
            .node("dad", &[THING])
            .node_with_properties("juice", &[THING], &["liquid"]);

        let mut eat = ActionDescription::default();
        eat.roles.insert(SemanticRole::Agent, VarId::new("eater"));
        eat.roles.insert(SemanticRole::Theme, VarId::new("eatee"));
        eat.postconditions.push(ConditionRelation::in_region(
            "eatee",
            "eater",
            Some(Distance::Interior),
            None,
        ));
        b.action_description("eat", eat);

        let mut throw = ActionDescription::default();
        throw
            .roles
            .insert(SemanticRole::Agent, VarId::new("thrower"));
        throw
            .roles
            .insert(SemanticRole::Theme, VarId::new("thrown"));
        throw.roles.insert(SemanticRole::Goal, VarId::new("target"));
        throw
            .preconditions
            .push(ConditionRelation::object("has", "thrower", "thrown"));
        b.action_description("throw", throw);

        let mut drink = ActionDescription::default();
        drink
            .roles
            .insert(SemanticRole::Agent, VarId::new("drinker"));
        drink.roles.insert(SemanticRole::Theme, VarId::new("drunk"));
        drink
            .required_properties
            .insert(VarId::new("drunk"), [NodeId::new("liquid")].into());
        b.action_description("drink", drink);

        b.build()
    }

    #[test]
    fn ball_on_ground_validates() {
        let o = test_ontology();
        let s = SituationBuilder::new()
            .object("ball_0", "ball")
            .in_region("ball_0", Region::on(GROUND_HANDLE), Phase::Both)
            .build();
        assert!(validate_situation(&s, &o).is_empty());
    }

    #[test]
    fn dangling_handle_reported() {
        let o = test_ontology();
        let s = SituationBuilder::new()
            .object("ball_0", "ball")
            .in_region("ball_0", Region::on("table_0"), Phase::Both)
            .build();
        let issues = validate_situation(&s, &o);
        assert!(issues.iter().any(|i| i.message.contains("dangling")));
    }

    #[test]
    fn drink_requires_liquid() {
        let o = test_ontology();
        let bad = SituationBuilder::new()
            .object("mom_0", "mom")
            .object("ball_0", "ball")
            .action("drink", &[("drinker", "mom_0"), ("drunk", "ball_0")])
            .build();
        let issues = validate_situation(&bad, &o);
        assert!(issues
            .iter()
            .any(|i| i.message.contains("required property `liquid`")));

        let good = SituationBuilder::new()
            .object("mom_0", "mom")
            .object("juice_0", "juice")
            .action("drink", &[("drinker", "mom_0"), ("drunk", "juice_0")])
            .build();
        assert!(validate_situation(&good, &o).is_empty());
    }

    #[test]
    fn unbound_role_reported() {
        let o = test_ontology();
        let s = SituationBuilder::new()
            .object("mom_0", "mom")
            .action("eat", &[("eater", "mom_0")])
            .build();
        let issues = validate_situation(&s, &o);
        assert!(issues.iter().any(|i| i.message.contains("unbound")));
    }

    #[test]
    fn two_speakers_rejected() {
        let o = test_ontology();
        let s = SituationBuilder::new()
            .object_with("mom_0", "mom", &[IS_SPEAKER], true)
            .object_with("dad_0", "dad", &[IS_SPEAKER], true)
            .build();
        let issues = validate_situation(&s, &o);
        assert!(issues.iter().any(|i| i.message.contains("speakers")));
    }

    #[test]
    fn eat_implies_interior_after() {
        let o = test_ontology();
        let s = SituationBuilder::new()
            .object("mom_0", "mom")
            .object("cookie_0", "cookie")
            .action("eat", &[("eater", "mom_0"), ("eatee", "cookie_0")])
            .build();
        let after = implied_relations(&s, &o, FramePhase::After).unwrap();
        let expected = GroundedRelation {
            relation: NodeId::new(IN_REGION),
            first: ObjectHandle::new("cookie_0"),
            second: RelationTarget::Region(Region::distance("mom_0", Distance::Interior)),
        };
        assert!(after.contains(&expected));
        let before = implied_relations(&s, &o, FramePhase::Before).unwrap();
        assert!(!before.contains(&expected));
    }

    #[test]
    fn throw_loses_possession_after() {
        let o = test_ontology();
        let s = SituationBuilder::new()
            .object("dad_0", "dad")
            .object("ball_0", "ball")
            .object("mom_0", "mom")
            .action(
                "throw",
                &[
                    ("thrower", "dad_0"),
                    ("thrown", "ball_0"),
                    ("target", "mom_0"),
                ],
            )
            .build();
        let has = GroundedRelation {
            relation: NodeId::new("has"),
            first: ObjectHandle::new("dad_0"),
            second: RelationTarget::Object(ObjectHandle::new("ball_0")),
        };
        let before = implied_relations(&s, &o, FramePhase::Before).unwrap();
        let after = implied_relations(&s, &o, FramePhase::After).unwrap();
        assert!(before.contains(&has));
        assert!(!after.contains(&has));
    }

    #[test]
    fn asserted_both_phase_in_both_outputs() {
        let o = test_ontology();
        let s = SituationBuilder::new()
            .object("ball_0", "ball")
            .in_region("ball_0", Region::on(GROUND_HANDLE), Phase::Both)
            .build();
        for phase in [FramePhase::Before, FramePhase::After] {
            let rels = implied_relations(&s, &o, phase).unwrap();
            assert_eq!(rels.len(), 1);
        }
    }

    #[test]
    fn no_actions_gives_exactly_asserted() {
        let o = test_ontology();
        let s = SituationBuilder::new()
            .object("ball_0", "ball")
            .in_region("ball_0", Region::on(GROUND_HANDLE), Phase::Before)
            .build();
        let before = implied_relations(&s, &o, FramePhase::Before).unwrap();
        assert_eq!(before.len(), 1);
        let after = implied_relations(&s, &o, FramePhase::After).unwrap();
        assert!(after.is_empty());
    }

    #[test]
    fn unbound_condition_variable_errors() {
        let o = test_ontology();
        // Bypass the builder's role checks by constructing the action with a
        // missing binding that a precondition needs.
        let s = SituationBuilder::new()
            .object("dad_0", "dad")
            .object("ball_0", "ball")
            .action("throw", &[("thrower", "dad_0")])
            .build();
        match implied_relations(&s, &o, FramePhase::Before) {
            Err(Error::UnboundVariable(v)) => assert_eq!(v, "thrown"),
            other => panic!("expected unbound-variable error, got {other:?}"),
        }
    }

    #[test]
    fn degenerate_region_rejected() {
        assert!(Region::new(ObjectHandle::new("x"), None, None).is_err());
        assert!(SpatialPath::new(None, None, None).is_err());
    }

    #[test]
    fn ground_always_present() {
        let s = SituationBuilder::new().build();
        assert!(s.objects.contains_key(&ObjectHandle::new(GROUND_HANDLE)));
    }
}
