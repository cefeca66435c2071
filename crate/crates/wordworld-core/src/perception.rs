//! Pre-linguistic perceptual representation: what an 18-month-old is assumed
//! to perceive of a situation. One frame for static scenes, two (before and
//! after) for actions, plus a description of what happens during the action.
//!
//! Perception is generated by combining the situation with ontology content:
//! structural schemata supply sub-objects, geons and axes; perceivable
//! ontology properties, recognized particulars and proto-roles become
//! property assertions; action descriptions supply the frame relations and
//! paths.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ontology::{AxisSpec, GeonSpec, NodeId, Ontology, ProtoRole, SchemaTarget};
use crate::rng::SplitMix64;
use crate::situation::{
    bind_path_template, implied_relations, FramePhase, GroundedRelation, ObjectHandle,
    RelationTarget, Situation, SpatialPath,
};
use crate::spatial::{CoarseSize, Direction, Distance, PathOperator};

/// Index into the representation's object arena.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjectPerceptionId(pub usize);

/// A perceived object: structure only — property assertions live on frames.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectPerception {
    /// Developer-facing only; never exposed to the learner.
    pub debug_label: String,
    pub sub_objects: Vec<ObjectPerceptionId>,
    pub axes: [AxisSpec; 3],
    pub geon: Option<GeonSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Particular {
    IsDad,
    IsMom,
    IsBaby,
    IsLearner,
    IsGround,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PerceivedProperty {
    SelfMoving,
    Animate,
    Inanimate,
    TwoDimensional,
    Liquid,
    Hollow,
    RecognizedParticular(Particular),
    GazedAt,
    IsSpeaker,
    IsAddressee,
    ProtoRole(ProtoRole),
    Color { r: u8, g: u8, b: u8 },
}

/// Region in perception: the reference object is carried by the relation's
/// second argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PerceivedRegion {
    pub distance: Option<Distance>,
    pub direction: Option<Direction>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PerceivedRelation {
    PartOf,
    BiggerThan,
    SmallerThan,
    MuchBiggerThan,
    MuchSmallerThan,
    Possession,
    InRegion(PerceivedRegion),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RelationInstance {
    pub relation: PerceivedRelation,
    pub first: ObjectPerceptionId,
    pub second: ObjectPerceptionId,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PerceivedPathTarget {
    Object(ObjectPerceptionId),
    Region {
        reference: ObjectPerceptionId,
        distance: Option<Distance>,
        direction: Option<Direction>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PerceivedPath {
    pub source: Option<PerceivedPathTarget>,
    pub destination: Option<PerceivedPathTarget>,
    pub operator: Option<PathOperator>,
    pub orientation_changes: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerceptionFrame {
    pub properties: BTreeMap<ObjectPerceptionId, BTreeSet<PerceivedProperty>>,
    pub relations: BTreeSet<RelationInstance>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DuringPerception {
    pub paths: BTreeMap<ObjectPerceptionId, PerceivedPath>,
    pub continuous: BTreeSet<RelationInstance>,
    pub at_some_point: BTreeSet<RelationInstance>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerceptualRepresentation {
    /// Shared object arena; frames refer into it by id.
    pub objects: Vec<ObjectPerception>,
    /// One frame for static scenes, two (before, after) for actions.
    pub frames: Vec<PerceptionFrame>,
    pub during: Option<DuringPerception>,
    /// Which arena entries are situation-level (root) objects, in handle
    /// order. Debug/evaluation aid, not learner input.
    pub roots: Vec<(ObjectHandle, ObjectPerceptionId)>,
}

impl PerceptualRepresentation {
    pub fn object(&self, id: ObjectPerceptionId) -> &ObjectPerception {
        &self.objects[id.0]
    }

    pub fn root_for(&self, handle: &ObjectHandle) -> Option<ObjectPerceptionId> {
        self.roots
            .iter()
            .find(|(h, _)| h == handle)
            .map(|(_, id)| *id)
    }
}

/// Perceptual aspects that noise parameters can target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Aspect {
    Color,
    Gaze,
    Geon,
    /// All property assertions other than color and gaze.
    Property,
}

const ALL_BASIC_PROPERTIES: [PerceivedProperty; 6] = [
    PerceivedProperty::SelfMoving,
    PerceivedProperty::Animate,
    PerceivedProperty::Inanimate,
    PerceivedProperty::TwoDimensional,
    PerceivedProperty::Liquid,
    PerceivedProperty::Hollow,
];

fn aspect_of(prop: &PerceivedProperty) -> Aspect {
    match prop {
        PerceivedProperty::Color { .. } => Aspect::Color,
        PerceivedProperty::GazedAt => Aspect::Gaze,
        _ => Aspect::Property,
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PerceptionParams {
    #[serde(default)]
    pub excluded_aspects: BTreeSet<Aspect>,
    /// Per-aspect probability that each present item is dropped.
    #[serde(default)]
    pub unreliable: BTreeMap<Aspect, f64>,
    /// Per-aspect probability that a spurious item is added to each object.
    #[serde(default)]
    pub spurious: BTreeMap<Aspect, f64>,
    #[serde(default)]
    pub seed: u64,
}

impl PerceptionParams {
    pub fn noiseless() -> PerceptionParams {
        PerceptionParams::default()
    }

    pub fn is_noiseless(&self) -> bool {
        self.excluded_aspects.is_empty()
            && self.unreliable.values().all(|p| *p == 0.0)
            && self.spurious.values().all(|p| *p == 0.0)
    }

    fn check(&self) -> Result<()> {
        for p in self.unreliable.values().chain(self.spurious.values()) {
            if !(0.0..=1.0).contains(p) {
                return Err(Error::Invalid(format!(
                    "noise probability {p} out of range"
                )));
            }
        }
        Ok(())
    }
}

/// Canonical RGB triples for the named ontology colors.
pub const COLOR_TABLE: [(&str, (u8, u8, u8)); 8] = [
    ("red", (232, 36, 36)),
    ("blue", (36, 86, 232)),
    ("green", (36, 180, 72)),
    ("black", (24, 24, 24)),
    ("white", (245, 245, 245)),
    ("light-brown", (202, 164, 120)),
    ("dark-brown", (110, 72, 42)),
    ("transparent", (190, 214, 228)),
];

pub fn color_rgb(name: &str) -> Option<(u8, u8, u8)> {
    COLOR_TABLE
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, rgb)| *rgb)
}

fn particular_for_type(object_type: &NodeId) -> Option<Particular> {
    match object_type.as_str() {
        "mom" => Some(Particular::IsMom),
        "dad" => Some(Particular::IsDad),
        "baby" => Some(Particular::IsBaby),
        "me" => Some(Particular::IsLearner),
        "ground" => Some(Particular::IsGround),
        _ => None,
    }
}

fn basic_property_for(node: &NodeId) -> Option<PerceivedProperty> {
    match node.as_str() {
        "self-moving" => Some(PerceivedProperty::SelfMoving),
        "animate" => Some(PerceivedProperty::Animate),
        "inanimate" => Some(PerceivedProperty::Inanimate),
        "two-dimensional" => Some(PerceivedProperty::TwoDimensional),
        "liquid" => Some(PerceivedProperty::Liquid),
        "hollow" => Some(PerceivedProperty::Hollow),
        _ => None,
    }
}

struct Builder<'a> {
    ontology: &'a Ontology,
    objects: Vec<ObjectPerception>,
}

impl<'a> Builder<'a> {
    /// Instantiate an object (and recursively its schema sub-objects) into
    /// the arena; returns (root id, per-object internal relations).
    fn instantiate(
        &mut self,
        label: &str,
        object_type: &NodeId,
        salient: bool,
        relations: &mut BTreeSet<RelationInstance>,
    ) -> Result<ObjectPerceptionId> {
        let schema = self.ontology.schema_for(object_type);
        if schema.is_none() && salient {
            return Err(Error::MissingSchema(object_type.to_string()));
        }
        let (axes, geon, sub_specs, internal) = match schema {
            Some(s) => (
                s.axes.clone(),
                s.geon.clone(),
                s.sub_objects.clone(),
                s.internal_relations.clone(),
            ),
            None => (
                crate::ontology::symmetric_axes(),
                None,
                Vec::new(),
                Vec::new(),
            ),
        };
        let id = ObjectPerceptionId(self.objects.len());
        self.objects.push(ObjectPerception {
            debug_label: label.to_owned(),
            sub_objects: Vec::new(),
            axes,
            geon,
        });
        let mut slot_ids: BTreeMap<String, ObjectPerceptionId> = BTreeMap::new();
        for sub in &sub_specs {
            let sub_label = format!("{label}.{}", sub.name);
            let sub_id = self.instantiate(&sub_label, &sub.object_type, false, relations)?;
            self.objects[id.0].sub_objects.push(sub_id);
            slot_ids.insert(sub.name.clone(), sub_id);
            relations.insert(RelationInstance {
                relation: PerceivedRelation::PartOf,
                first: sub_id,
                second: id,
            });
        }
        for rel in &internal {
            let Some(first) = slot_ids.get(&rel.first) else {
                continue;
            };
            match &rel.second {
                SchemaTarget::Slot(name) => {
                    if let Some(second) = slot_ids.get(name) {
                        if let Some(kind) = relation_kind(&rel.relation, None) {
                            relations.insert(RelationInstance {
                                relation: kind,
                                first: *first,
                                second: *second,
                            });
                        }
                    }
                }
                SchemaTarget::Region(region) => {
                    if let Some(reference) = slot_ids.get(&region.reference) {
                        relations.insert(RelationInstance {
                            relation: PerceivedRelation::InRegion(PerceivedRegion {
                                distance: region.distance,
                                direction: region.direction,
                            }),
                            first: *first,
                            second: *reference,
                        });
                    }
                }
            }
        }
        Ok(id)
    }

    /// Perceivable properties for one object type (plus asserted extras).
    fn properties_for(
        &self,
        object_type: &NodeId,
        asserted: &BTreeSet<NodeId>,
    ) -> Result<BTreeSet<PerceivedProperty>> {
        let mut props = BTreeSet::new();
        let mut inherited = self.ontology.properties_of(object_type).unwrap_or_default();
        inherited.extend(asserted.iter().cloned());
        let color = NodeId::new("color");
        for p in &inherited {
            if let Some(basic) = basic_property_for(p) {
                props.insert(basic);
            } else if self.ontology.contains(&color)
                && self.ontology.is_subtype(p, &color).unwrap_or(false)
                && *p != color
            {
                if let Some((r, g, b)) = color_rgb(p.as_str()) {
                    props.insert(PerceivedProperty::Color { r, g, b });
                }
            } else if p.as_str() == crate::situation::IS_SPEAKER {
                props.insert(PerceivedProperty::IsSpeaker);
            } else if p.as_str() == crate::situation::IS_ADDRESSEE {
                props.insert(PerceivedProperty::IsAddressee);
            }
        }
        if let Some(particular) = particular_for_type(object_type) {
            props.insert(PerceivedProperty::RecognizedParticular(particular));
        }
        Ok(props)
    }
}

fn relation_kind(relation: &NodeId, region: Option<PerceivedRegion>) -> Option<PerceivedRelation> {
    match relation.as_str() {
        "has" => Some(PerceivedRelation::Possession),
        "partof" => Some(PerceivedRelation::PartOf),
        "bigger-than" => Some(PerceivedRelation::BiggerThan),
        "smaller-than" => Some(PerceivedRelation::SmallerThan),
        "much-bigger-than" => Some(PerceivedRelation::MuchBiggerThan),
        "much-smaller-than" => Some(PerceivedRelation::MuchSmallerThan),
        crate::situation::IN_REGION => region.map(PerceivedRelation::InRegion),
        _ => None,
    }
}

fn ground_relation(
    rel: &GroundedRelation,
    ids: &BTreeMap<ObjectHandle, ObjectPerceptionId>,
) -> Result<Option<RelationInstance>> {
    let first = *ids
        .get(&rel.first)
        .ok_or_else(|| Error::UnknownHandle(rel.first.to_string()))?;
    let (second, region) = match &rel.second {
        RelationTarget::Object(h) => (
            *ids.get(h)
                .ok_or_else(|| Error::UnknownHandle(h.to_string()))?,
            None,
        ),
        RelationTarget::Region(r) => (
            *ids.get(&r.reference)
                .ok_or_else(|| Error::UnknownHandle(r.reference.to_string()))?,
            Some(PerceivedRegion {
                distance: r.distance,
                direction: r.direction,
            }),
        ),
    };
    Ok(
        relation_kind(&rel.relation, region).map(|relation| RelationInstance {
            relation,
            first,
            second,
        }),
    )
}

fn ground_path(
    path: &SpatialPath,
    ids: &BTreeMap<ObjectHandle, ObjectPerceptionId>,
) -> Result<PerceivedPath> {
    let map_target = |t: &crate::situation::PathTarget| -> Result<PerceivedPathTarget> {
        Ok(match t {
            crate::situation::PathTarget::Object(h) => PerceivedPathTarget::Object(
                *ids.get(h)
                    .ok_or_else(|| Error::UnknownHandle(h.to_string()))?,
            ),
            crate::situation::PathTarget::Region(r) => PerceivedPathTarget::Region {
                reference: *ids
                    .get(&r.reference)
                    .ok_or_else(|| Error::UnknownHandle(r.reference.to_string()))?,
                distance: r.distance,
                direction: r.direction,
            },
        })
    };
    Ok(PerceivedPath {
        source: path.source.as_ref().map(&map_target).transpose()?,
        destination: path.destination.as_ref().map(&map_target).transpose()?,
        operator: path.operator,
        orientation_changes: path.orientation_changes,
    })
}

/// Translate a situation into the learner's perceptual input. Pure function
/// of its arguments; noise (if any in `params`) is applied deterministically
/// under the seed.
pub fn generate_perception(
    situation: &Situation,
    ontology: &Ontology,
    params: &PerceptionParams,
) -> Result<PerceptualRepresentation> {
    params.check()?;
    let mut builder = Builder {
        ontology,
        objects: Vec::new(),
    };
    let mut structural = BTreeSet::new();
    let mut ids: BTreeMap<ObjectHandle, ObjectPerceptionId> = BTreeMap::new();
    for obj in situation.objects.values() {
        let id = builder.instantiate(
            obj.handle.as_str(),
            &obj.object_type,
            obj.salient,
            &mut structural,
        )?;
        ids.insert(obj.handle.clone(), id);
    }

    // Per-object properties: perceivable type properties, asserted extras,
    // recognized particulars, gaze. Sub-objects get their own type
    // properties but no asserted extras.
    let mut base_properties: BTreeMap<ObjectPerceptionId, BTreeSet<PerceivedProperty>> =
        BTreeMap::new();
    for obj in situation.objects.values() {
        let id = ids[&obj.handle];
        let mut props = builder.properties_for(&obj.object_type, &obj.asserted_properties)?;
        if situation.gazed_at.contains(&obj.handle) {
            props.insert(PerceivedProperty::GazedAt);
        }
        base_properties.insert(id, props);
        // Recursive sub-objects: derive type from debug label's schema slot;
        // instead, walk the schema again in parallel with the arena.
        collect_sub_properties(
            &builder,
            ontology,
            &obj.object_type,
            id,
            &mut base_properties,
        )?;
    }

    // Coarse size relations between salient roots with known grades.
    let salient_roots: Vec<(&ObjectHandle, ObjectPerceptionId)> = situation
        .objects
        .values()
        .filter(|o| o.salient)
        .map(|o| (&o.handle, ids[&o.handle]))
        .collect();
    let mut size_relations = BTreeSet::new();
    for (i, (ha, ia)) in salient_roots.iter().enumerate() {
        for (hb, ib) in salient_roots.iter().skip(i + 1) {
            let ta = &situation.objects[*ha].object_type;
            let tb = &situation.objects[*hb].object_type;
            let (Some(ga), Some(gb)) = (ontology.size_grade(ta), ontology.size_grade(tb)) else {
                continue;
            };
            let kind = match CoarseSize::compare(ga, gb) {
                CoarseSize::MuchSmaller => Some(PerceivedRelation::MuchSmallerThan),
                CoarseSize::Smaller => Some(PerceivedRelation::SmallerThan),
                CoarseSize::Same => None,
                CoarseSize::Bigger => Some(PerceivedRelation::BiggerThan),
                CoarseSize::MuchBigger => Some(PerceivedRelation::MuchBiggerThan),
            };
            if let Some(relation) = kind {
                size_relations.insert(RelationInstance {
                    relation,
                    first: *ia,
                    second: *ib,
                });
            }
        }
    }

    let dynamic = !situation.actions.is_empty();
    let phases: &[FramePhase] = if dynamic {
        &[FramePhase::Before, FramePhase::After]
    } else {
        &[FramePhase::Before]
    };
    let mut frames = Vec::new();
    for phase in phases {
        let mut relations = structural.clone();
        relations.extend(size_relations.iter().copied());
        for rel in implied_relations(situation, ontology, *phase)? {
            if let Some(instance) = ground_relation(&rel, &ids)? {
                relations.insert(instance);
            }
        }
        let mut properties = base_properties.clone();
        // Proto-role properties per action description, in both frames.
        for action in &situation.actions {
            let desc = ontology
                .action_descriptions
                .get(&action.action_type)
                .ok_or_else(|| Error::MissingActionDescription(action.action_type.to_string()))?;
            for (var, roles) in &desc.proto_roles {
                if let Some(handle) = action.bound(var) {
                    let id = ids[handle];
                    let entry = properties.entry(id).or_default();
                    for role in roles {
                        entry.insert(PerceivedProperty::ProtoRole(*role));
                    }
                }
            }
        }
        frames.push(PerceptionFrame {
            properties,
            relations,
        });
    }

    let during = if dynamic {
        let mut d = DuringPerception::default();
        for action in &situation.actions {
            let desc = ontology
                .action_descriptions
                .get(&action.action_type)
                .ok_or_else(|| Error::MissingActionDescription(action.action_type.to_string()))?;
            for (var, path_template) in &desc.during.paths {
                let handle = action
                    .bound(var)
                    .ok_or_else(|| Error::UnboundVariable(var.to_string()))?;
                let path = bind_path_template(action, path_template)?;
                d.paths.insert(ids[handle], ground_path(&path, &ids)?);
            }
            for cond in &desc.during.continuous {
                if let Some(i) = ground_relation(&bind_condition_pub(action, cond)?, &ids)? {
                    d.continuous.insert(i);
                }
            }
            for cond in &desc.during.at_some_point {
                if let Some(i) = ground_relation(&bind_condition_pub(action, cond)?, &ids)? {
                    d.at_some_point.insert(i);
                }
            }
        }
        Some(d)
    } else {
        None
    };

    let roots = situation
        .objects
        .values()
        .map(|o| (o.handle.clone(), ids[&o.handle]))
        .collect();
    let rep = PerceptualRepresentation {
        objects: builder.objects,
        frames,
        during,
        roots,
    };
    if params.is_noiseless() {
        Ok(rep)
    } else {
        Ok(apply_noise(&rep, params))
    }
}

/// Bind one condition relation of an action description against its
/// situation bindings.
fn bind_condition_pub(
    action: &crate::situation::SituationAction,
    cond: &crate::ontology::ConditionRelation,
) -> Result<GroundedRelation> {
    // Reuses the binding logic of `implied_relations` for during conditions.
    use crate::ontology::ConditionTarget;
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
        ConditionTarget::Region(r) => {
            let reference = action
                .bound(&r.reference)
                .ok_or_else(|| Error::UnboundVariable(r.reference.to_string()))?
                .clone();
            RelationTarget::Region(crate::situation::Region::new(
                reference,
                r.distance,
                r.direction,
            )?)
        }
    };
    Ok(GroundedRelation {
        relation: cond.relation.clone(),
        first,
        second,
    })
}

/// Walk schema sub-objects in step with the arena to attach each sub-object's
/// own perceivable type properties.
fn collect_sub_properties(
    builder: &Builder<'_>,
    ontology: &Ontology,
    parent_type: &NodeId,
    parent_id: ObjectPerceptionId,
    out: &mut BTreeMap<ObjectPerceptionId, BTreeSet<PerceivedProperty>>,
) -> Result<()> {
    let Some(schema) = ontology.schema_for(parent_type) else {
        return Ok(());
    };
    let sub_ids = builder.objects[parent_id.0].sub_objects.clone();
    for (slot, sub_id) in schema.sub_objects.iter().zip(sub_ids) {
        let props = builder.properties_for(&slot.object_type, &BTreeSet::new())?;
        out.insert(sub_id, props);
        collect_sub_properties(builder, ontology, &slot.object_type, sub_id, out)?;
    }
    Ok(())
}

/// Remove excluded aspects, drop unreliable items and add spurious ones,
/// deterministically under the params seed.
pub fn apply_noise(
    rep: &PerceptualRepresentation,
    params: &PerceptionParams,
) -> PerceptualRepresentation {
    let mut out = rep.clone();
    let mut rng = SplitMix64::new(params.seed);
    let drop_p = |aspect: Aspect, params: &PerceptionParams| -> f64 {
        if params.excluded_aspects.contains(&aspect) {
            1.0
        } else {
            params.unreliable.get(&aspect).copied().unwrap_or(0.0)
        }
    };

    // Geons.
    let geon_drop = drop_p(Aspect::Geon, params);
    if geon_drop > 0.0 {
        for obj in &mut out.objects {
            if obj.geon.is_some() && rng.next_bool(geon_drop) {
                obj.geon = None;
            }
        }
    }

    for frame in &mut out.frames {
        for props in frame.properties.values_mut() {
            let kept: BTreeSet<PerceivedProperty> = props
                .iter()
                .filter(|p| !rng.next_bool(drop_p(aspect_of(p), params)))
                .copied()
                .collect();
            *props = kept;
        }
        // Spurious additions, per object in arena order.
        for id in 0..out.objects.len() {
            let id = ObjectPerceptionId(id);
            for (aspect, p) in &params.spurious {
                if params.excluded_aspects.contains(aspect) || !rng.next_bool(*p) {
                    continue;
                }
                let added = match aspect {
                    Aspect::Color => {
                        let (_, (r, g, b)) =
                            COLOR_TABLE[rng.next_bounded(COLOR_TABLE.len() as u64) as usize];
                        PerceivedProperty::Color { r, g, b }
                    }
                    Aspect::Gaze => PerceivedProperty::GazedAt,
                    Aspect::Property => {
                        ALL_BASIC_PROPERTIES
                            [rng.next_bounded(ALL_BASIC_PROPERTIES.len() as u64) as usize]
                    }
                    Aspect::Geon => continue,
                };
                frame.properties.entry(id).or_default().insert(added);
            }
        }
    }
    out
}
