//! Perception graphs and the pattern machinery over them: conversion from
//! perceptual representations, sub-graph matching, subsumption checks, and
//! greedy generalization/intersection of patterns.

pub mod generalize;
pub mod graph;
pub mod matching;
pub mod pattern;

pub use generalize::{generalize_to_match, intersect};
pub use graph::{
    to_graph, validate_graph, CountValue, EdgeKind, GraphEdge, GraphNode, PerceptionGraph, ScopeSet,
};
pub use matching::{
    match_pattern, matches_graph, subsumes, Alignment, MatchOptions, MatchResult, MatchTarget,
    PartialMatch,
};
pub use pattern::{
    node_to_predicate, property_kind, ColorBox, EdgePredicate, NodePredicate, PatternEdge,
    PerceptionGraphPattern, PropertyKind, SlotId,
};

#[cfg(test)]
pub(crate) mod testfix {
    use crate::ontology::{
        upright_axes, ActionDescription, ConditionRelation, CrossSection, CrossSectionSize,
        GeonSpec, NodeId, Ontology, OntologyBuilder, ProtoRole, SemanticRole, StructuralSchema,
        SubObjectSlot, VarId, ACTION, CAN_FILL_TEMPLATE_SLOT, PERCEIVABLE, PROPERTY, RELATION,
        THING,
    };
    use crate::perception::{generate_perception, PerceptionParams};
    use crate::situation::Situation;
    use crate::spatial::Distance;

    use super::graph::PerceptionGraph;
    use super::to_graph;

    pub fn ontology() -> Ontology {
        let mut b = OntologyBuilder::new();
        b.node(THING, &[])
            .node(PROPERTY, &[])
            .node(RELATION, &[])
            .node(ACTION, &[])
            .node(PERCEIVABLE, &[])
            .node(CAN_FILL_TEMPLATE_SLOT, &[PROPERTY])
            .node(crate::situation::IN_REGION, &[RELATION])
            .node("has", &[RELATION])
            .node("color", &[PROPERTY, PERCEIVABLE])
            .node("red", &["color"])
            .node("green", &["color"])
            .node("animate", &[PROPERTY, PERCEIVABLE])
            .node("inanimate", &[PROPERTY, PERCEIVABLE])
            .node("hollow", &[PROPERTY, PERCEIVABLE])
            .node_with_properties("ground", &[THING], &["inanimate"])
            .node_with_properties("ball", &[THING], &["inanimate"])
            .node_with_properties("cookie", &[THING], &["inanimate"])
            .node_with_properties("box", &[THING], &["inanimate", "hollow"])
            .node_with_properties("mom", &[THING], &["animate"])
            .node("head", &[THING])
            .node("torso", &[THING]);

        b.schema(StructuralSchema::simple(
            NodeId::new("ball"),
            GeonSpec::new(
                CrossSection::CIRCULAR,
                CrossSectionSize::SmallToLargeToSmall,
            ),
        ));
        b.schema(StructuralSchema::simple(
            NodeId::new("cookie"),
            GeonSpec::new(CrossSection::CIRCULAR, CrossSectionSize::Constant),
        ));
        b.schema(StructuralSchema::simple(
            NodeId::new("box"),
            GeonSpec::new(CrossSection::SQUARE, CrossSectionSize::Constant),
        ));
        b.schema(StructuralSchema::simple(
            NodeId::new("ground"),
            GeonSpec::new(CrossSection::SQUARE, CrossSectionSize::Constant),
        ));
        b.schema(StructuralSchema::simple(
            NodeId::new("head"),
            GeonSpec::new(
                CrossSection::CIRCULAR,
                CrossSectionSize::SmallToLargeToSmall,
            ),
        ));
        b.schema(StructuralSchema::simple(
            NodeId::new("torso"),
            GeonSpec::new(CrossSection::OVAL, CrossSectionSize::Constant),
        ));
        b.schema(StructuralSchema {
            root_type: NodeId::new("mom"),
            sub_objects: vec![
                SubObjectSlot {
                    name: "head".into(),
                    object_type: NodeId::new("head"),
                },
                SubObjectSlot {
                    name: "torso".into(),
                    object_type: NodeId::new("torso"),
                },
            ],
            internal_relations: vec![],
            geon: None,
            axes: upright_axes(),
        });

        let mut eat = ActionDescription::default();
        eat.roles.insert(SemanticRole::Agent, VarId::new("eater"));
        eat.roles.insert(SemanticRole::Theme, VarId::new("eatee"));
        eat.postconditions.push(ConditionRelation::in_region(
            "eatee",
            "eater",
            Some(Distance::Interior),
            None,
        ));
        eat.proto_roles.insert(
            VarId::new("eater"),
            [
                ProtoRole::VolitionallyInvolved,
                ProtoRole::SentientOrPerceives,
            ]
            .into(),
        );
        eat.proto_roles
            .insert(VarId::new("eatee"), [ProtoRole::CausallyAffected].into());
        b.action_description("eat", eat);
        b.build()
    }

    pub fn graph_of(situation: &Situation) -> PerceptionGraph {
        let o = ontology();
        let rep = generate_perception(situation, &o, &PerceptionParams::noiseless()).unwrap();
        to_graph(&rep)
    }
}
