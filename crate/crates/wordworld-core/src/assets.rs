//! The bundled sample world: ontology, structural schemata, action
//! descriptions, and an English lexicon, sufficient for every curriculum this
//! crate ships. Assembled in code, validated on load, and dumpable to RON via
//! the CLI.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::langgen::{EnglishGenerator, NounEntry, VerbEntry};
use crate::ontology::{
    issues_to_error, upright_axes, ActionDescription, AxisSpec, ConditionRelation, CrossSection,
    CrossSectionSize, GeonSpec, NodeId, Ontology, OntologyBuilder, PathEndpoint, PathTemplate,
    ProtoRole, RegionTemplate, SchemaRegion, SchemaRelation, SchemaTarget, SemanticRole,
    StructuralSchema, SubObjectSlot, VarId, ACTION, CAN_FILL_TEMPLATE_SLOT, PERCEIVABLE, PROPERTY,
    RELATION, THING,
};
use crate::persist::to_versioned_ron;
use crate::situation::IN_REGION;
use crate::spatial::{Direction, Distance, PathOperator};

/// The loaded, validated sample content.
#[derive(Debug, Clone)]
pub struct AssetBundle {
    pub ontology: Ontology,
    pub generator: EnglishGenerator,
}

impl AssetBundle {
    /// Serialize the bundle's parts as named RON documents, for
    /// `generate --dump-assets`.
    pub fn dump(&self) -> Result<BTreeMap<&'static str, String>> {
        let mut out = BTreeMap::new();
        out.insert("ontology.ron", to_versioned_ron(&self.ontology)?);
        out.insert("lexicon.ron", to_versioned_ron(&self.generator.lexicon)?);
        Ok(out)
    }
}

/// Build and validate the bundled sample world.
pub fn load_bundle() -> Result<AssetBundle> {
    let ontology = build_ontology();
    let issues = ontology.validate();
    if !issues.is_empty() {
        return Err(issues_to_error(&issues));
    }
    let generator = build_generator()?;
    Ok(AssetBundle {
        ontology,
        generator,
    })
}

/// All twenty bundled verbs, in curriculum order.
pub const VERBS: [&str; 20] = [
    "walk", "run", "consume", "put", "push", "shove", "go", "come", "take", "grab", "give", "spin",
    "sit", "fall", "throw", "pass", "move", "jump", "roll", "fly",
];

const COLORS: [&str; 8] = [
    "red",
    "blue",
    "green",
    "black",
    "white",
    "light-brown",
    "dark-brown",
    "transparent",
];

/// Kinds a one-variable template over `animal` may instantiate to.
pub const ANIMALS: [&str; 6] = ["dog", "cat", "bear", "bird", "chicken", "cow"];

const PEOPLE: [&str; 5] = ["me", "you", "mom", "dad", "baby"];

fn build_ontology() -> Ontology {
    let mut b = OntologyBuilder::new();

    // Special structural nodes.
    b.node(THING, &[])
        .node(PROPERTY, &[])
        .node(RELATION, &[])
        .node(ACTION, &[])
        .node(PERCEIVABLE, &[]);

    // Property hierarchy.
    b.node(CAN_FILL_TEMPLATE_SLOT, &[PROPERTY]);
    for p in [
        "is-addressee",
        "is-speaker",
        "is-human",
        "can-manipulate-objects",
        "edible",
        "rollable",
        "can-have-things-on-them",
        "is-body-part",
        "person-can-have",
        "transfer-of-possession",
        "can-jump",
        "can-fly",
        "has-space-under",
        "can-be-sat-on",
        "fast",
        "slow",
        "side",
        "left",
        "right",
        "hard-force",
        "soft-force",
        "aboutSameSizeAsLearner",
    ] {
        b.node(p, &[PROPERTY]);
    }
    b.node("perceivable-property", &[PROPERTY, PERCEIVABLE]);
    for p in [
        "animate",
        "inanimate",
        "liquid",
        "hollow",
        "two-dimensional",
        "self-moving",
    ] {
        b.node(p, &["perceivable-property"]);
    }
    b.node("color", &["perceivable-property"]);
    for c in COLORS {
        b.node(c, &["color"]);
    }

    // Relation hierarchy.
    for r in [
        IN_REGION,
        "spatial-relation",
        "partOf",
        "size-relation",
        "axis-relation",
        "has",
    ] {
        b.node(r, &[RELATION]);
    }
    for s in [
        "bigger-than",
        "smaller-than",
        "much-bigger-than",
        "much-smaller-than",
    ] {
        b.node(s, &["size-relation"]);
    }

    // Things.
    b.node_with_properties("inanimate-object", &[THING], &["inanimate"]);
    b.node_with_properties("head", &[THING], &["is-body-part"]);
    b.node_with_properties("hand", &[THING], &["is-body-part"]);
    b.node_with_properties(
        "person",
        &[THING],
        &[
            "animate",
            "self-moving",
            "is-human",
            "can-manipulate-objects",
            "can-jump",
        ],
    );
    b.node_with_properties("animal", &[THING], &["animate", "self-moving"]);
    b.node_with_properties("body-part", &[THING], &["is-body-part"]);

    for p in PEOPLE {
        b.node(p, &["person"]);
    }
    b.add_property("baby", "aboutSameSizeAsLearner");
    for a in ANIMALS {
        b.node(a, &["animal"]);
    }
    b.add_property("bird", "can-fly");
    b.add_property("dog", "can-jump");
    b.add_property("cat", "can-jump");

    // Substance sits in both the property row and the inanimate-object row.
    b.node("substance", &["inanimate-object", PROPERTY]);
    for i in [
        "ground",
        "food",
        "table",
        "bed",
        "ball",
        "paper",
        "book",
        "house",
        "car",
        "cup",
        "box",
        "chair",
        "truck",
        "door",
        "hat",
        "leg",
        "chairback",
        "chairseat",
        "tabletop",
        "mattress",
        "headboard",
        "wall",
        "roof",
        "tire",
        "truckcab",
        "trailer",
        "flatbed",
    ] {
        b.node(i, &["inanimate-object"]);
    }
    b.add_property("ground", "can-have-things-on-them");
    b.add_property("food", "edible");
    b.add_property("table", "can-have-things-on-them");
    b.add_property("table", "has-space-under");
    b.add_property("bed", "can-be-sat-on");
    b.add_property("bed", "can-have-things-on-them");
    b.add_property("ball", "rollable");
    b.add_property("ball", "person-can-have");
    b.add_property("paper", "two-dimensional");
    b.add_property("book", "person-can-have");
    b.add_property("house", "hollow");
    b.add_property("car", "hollow");
    b.add_property("cup", "hollow");
    b.add_property("cup", "person-can-have");
    b.add_property("box", "hollow");
    b.add_property("chair", "can-be-sat-on");
    b.add_property("truck", "hollow");
    b.add_property("hat", "person-can-have");
    b.add_property("tire", "rollable");
    b.add_property("leg", "is-body-part");

    // Fixture leaves not in the ontology table but needed by the curriculum.
    b.node_with_properties("cookie", &["food"], &["person-can-have"]);
    for s in ["juice", "milk", "water"] {
        b.node_with_properties(s, &["substance"], &["liquid"]);
    }
    for part in ["torso", "arm", "tail"] {
        b.node(part, &["body-part"]);
    }

    // Actions.
    for v in VERBS {
        b.node(v, &[ACTION]);
    }
    for v in ["eat", "drink"] {
        b.node(v, &["consume"]);
    }

    // Template-filler leaves: the kinds a curriculum variable may pick.
    for leaf in PEOPLE.into_iter().chain(ANIMALS).chain([
        "ground", "table", "bed", "ball", "paper", "book", "house", "car", "cup", "box", "chair",
        "truck", "door", "hat", "cookie", "juice", "milk", "water",
    ]) {
        b.add_property(leaf, CAN_FILL_TEMPLATE_SLOT);
    }

    add_size_grades(&mut b);
    add_schemata(&mut b);
    add_action_descriptions(&mut b);
    b.build()
}

fn add_size_grades(b: &mut OntologyBuilder) {
    for (id, grade) in [
        ("cookie", 1),
        ("cup", 1),
        ("hat", 1),
        ("ball", 1),
        ("book", 1),
        ("paper", 1),
        ("box", 2),
        ("chair", 2),
        ("table", 2),
        ("bed", 3),
        ("door", 3),
        ("car", 3),
        ("truck", 4),
        ("house", 4),
        ("ground", 4),
        ("person", 2),
        ("baby", 1),
        ("animal", 1),
        ("bear", 3),
        ("cow", 3),
    ] {
        b.size_grade(id, grade);
    }
}

fn slot(name: &str, object_type: &str) -> SubObjectSlot {
    SubObjectSlot {
        name: name.to_owned(),
        object_type: NodeId::new(object_type),
    }
}

fn above(first: &str, second: &str) -> SchemaRelation {
    SchemaRelation {
        relation: NodeId::new(IN_REGION),
        first: first.to_owned(),
        second: SchemaTarget::Region(SchemaRegion {
            reference: second.to_owned(),
            distance: Some(Distance::ExteriorButInContact),
            direction: Some(Direction::ABOVE),
        }),
    }
}

fn add_schemata(b: &mut OntologyBuilder) {
    // Simple one-geon bodies. The tuple is (type, cross-section, size sweep).
    let simple: [(&str, CrossSection, CrossSectionSize); 22] = [
        (
            "ball",
            CrossSection::CIRCULAR,
            CrossSectionSize::SmallToLargeToSmall,
        ),
        ("cookie", CrossSection::CIRCULAR, CrossSectionSize::Constant),
        ("cup", CrossSection::CIRCULAR, CrossSectionSize::Constant),
        (
            "hat",
            CrossSection::CIRCULAR,
            CrossSectionSize::LargeToSmall,
        ),
        ("box", CrossSection::SQUARE, CrossSectionSize::Constant),
        (
            "book",
            CrossSection::RECTANGULAR,
            CrossSectionSize::Constant,
        ),
        (
            "paper",
            CrossSection::RECTANGULAR,
            CrossSectionSize::Constant,
        ),
        (
            "door",
            CrossSection::RECTANGULAR,
            CrossSectionSize::Constant,
        ),
        (
            "substance",
            CrossSection::IRREGULAR,
            CrossSectionSize::Constant,
        ),
        ("food", CrossSection::IRREGULAR, CrossSectionSize::Constant),
        (
            "inanimate-object",
            CrossSection::IRREGULAR,
            CrossSectionSize::Constant,
        ),
        (
            "head",
            CrossSection::CIRCULAR,
            CrossSectionSize::SmallToLargeToSmall,
        ),
        ("hand", CrossSection::IRREGULAR, CrossSectionSize::Constant),
        ("torso", CrossSection::OVAL, CrossSectionSize::Constant),
        (
            "arm",
            CrossSection::CIRCULAR,
            CrossSectionSize::SmallToLarge,
        ),
        ("leg", CrossSection::CIRCULAR, CrossSectionSize::Constant),
        (
            "tail",
            CrossSection::CIRCULAR,
            CrossSectionSize::LargeToSmall,
        ),
        (
            "tabletop",
            CrossSection::RECTANGULAR,
            CrossSectionSize::Constant,
        ),
        (
            "chairback",
            CrossSection::RECTANGULAR,
            CrossSectionSize::Constant,
        ),
        (
            "chairseat",
            CrossSection::SQUARE,
            CrossSectionSize::Constant,
        ),
        (
            "mattress",
            CrossSection::RECTANGULAR,
            CrossSectionSize::Constant,
        ),
        (
            "headboard",
            CrossSection::RECTANGULAR,
            CrossSectionSize::Constant,
        ),
    ];
    for (id, cs, sweep) in simple {
        b.schema(StructuralSchema::simple(
            NodeId::new(id),
            GeonSpec::new(cs, sweep),
        ));
    }
    for (id, cs, sweep) in [
        (
            "wall",
            CrossSection::RECTANGULAR,
            CrossSectionSize::Constant,
        ),
        (
            "roof",
            CrossSection::RECTANGULAR,
            CrossSectionSize::LargeToSmall,
        ),
        ("tire", CrossSection::CIRCULAR, CrossSectionSize::Constant),
        ("truckcab", CrossSection::SQUARE, CrossSectionSize::Constant),
        (
            "trailer",
            CrossSection::RECTANGULAR,
            CrossSectionSize::Constant,
        ),
        (
            "flatbed",
            CrossSection::RECTANGULAR,
            CrossSectionSize::Constant,
        ),
    ] {
        b.schema(StructuralSchema::simple(
            NodeId::new(id),
            GeonSpec::new(cs, sweep),
        ));
    }

    // The ground: a flat upright-axed expanse everything rests on.
    b.schema(StructuralSchema {
        root_type: NodeId::new("ground"),
        sub_objects: vec![],
        internal_relations: vec![],
        geon: Some(GeonSpec::new(
            CrossSection::SQUARE,
            CrossSectionSize::Constant,
        )),
        axes: [
            AxisSpec::new("bottom-to-top")
                .gravity_aligned()
                .directed()
                .primary(),
            AxisSpec::new("north-south"),
            AxisSpec::new("east-west"),
        ],
    });

    b.schema(StructuralSchema {
        root_type: NodeId::new("person"),
        sub_objects: vec![
            slot("head", "head"),
            slot("torso", "torso"),
            slot("left-arm", "arm"),
            slot("right-arm", "arm"),
            slot("left-leg", "leg"),
            slot("right-leg", "leg"),
        ],
        internal_relations: vec![above("head", "torso")],
        geon: None,
        axes: upright_axes(),
    });

    b.schema(StructuralSchema {
        root_type: NodeId::new("animal"),
        sub_objects: vec![
            slot("head", "head"),
            slot("torso", "torso"),
            slot("tail", "tail"),
        ],
        internal_relations: vec![],
        geon: None,
        axes: upright_axes(),
    });

    b.schema(StructuralSchema {
        root_type: NodeId::new("table"),
        sub_objects: vec![
            slot("top", "tabletop"),
            slot("leg-1", "leg"),
            slot("leg-2", "leg"),
            slot("leg-3", "leg"),
            slot("leg-4", "leg"),
        ],
        internal_relations: vec![above("top", "leg-1")],
        geon: None,
        axes: upright_axes(),
    });

    b.schema(StructuralSchema {
        root_type: NodeId::new("chair"),
        sub_objects: vec![
            slot("back", "chairback"),
            slot("seat", "chairseat"),
            slot("leg-1", "leg"),
            slot("leg-2", "leg"),
            slot("leg-3", "leg"),
            slot("leg-4", "leg"),
        ],
        internal_relations: vec![above("back", "seat"), above("seat", "leg-1")],
        geon: None,
        axes: upright_axes(),
    });

    b.schema(StructuralSchema {
        root_type: NodeId::new("bed"),
        sub_objects: vec![slot("mattress", "mattress"), slot("headboard", "headboard")],
        internal_relations: vec![],
        geon: None,
        axes: upright_axes(),
    });

    b.schema(StructuralSchema {
        root_type: NodeId::new("house"),
        sub_objects: vec![slot("wall", "wall"), slot("roof", "roof")],
        internal_relations: vec![above("roof", "wall")],
        geon: None,
        axes: upright_axes(),
    });

    b.schema(StructuralSchema {
        root_type: NodeId::new("car"),
        sub_objects: vec![
            slot("body", "box"),
            slot("tire-1", "tire"),
            slot("tire-2", "tire"),
            slot("tire-3", "tire"),
            slot("tire-4", "tire"),
        ],
        internal_relations: vec![above("body", "tire-1")],
        geon: None,
        axes: upright_axes(),
    });

    b.schema(StructuralSchema {
        root_type: NodeId::new("truck"),
        sub_objects: vec![
            slot("cab", "truckcab"),
            slot("trailer", "trailer"),
            slot("flatbed", "flatbed"),
            slot("tire-1", "tire"),
            slot("tire-2", "tire"),
            slot("tire-3", "tire"),
            slot("tire-4", "tire"),
        ],
        internal_relations: vec![above("trailer", "flatbed")],
        geon: None,
        axes: upright_axes(),
    });
}

fn var(name: &str) -> VarId {
    VarId::new(name)
}

fn base_action(roles: &[(SemanticRole, &str)]) -> ActionDescription {
    let mut desc = ActionDescription::default();
    for (role, name) in roles {
        desc.roles.insert(*role, var(name));
    }
    desc
}

fn require(desc: &mut ActionDescription, variable: &str, properties: &[&str]) {
    desc.required_properties.insert(
        var(variable),
        properties.iter().map(|p| NodeId::new(p)).collect(),
    );
}

fn protos(desc: &mut ActionDescription, variable: &str, roles: &[ProtoRole]) {
    desc.proto_roles
        .insert(var(variable), roles.iter().copied().collect());
}

fn auxiliary(desc: &mut ActionDescription, variable: &str) {
    desc.auxiliary_variables.insert(var(variable));
}

fn path_to_variable(operator: PathOperator, destination: &str) -> PathTemplate {
    PathTemplate {
        source: None,
        destination: Some(PathEndpoint::Variable(var(destination))),
        operator: Some(operator),
        orientation_changes: false,
    }
}

fn path_to_region(
    operator: PathOperator,
    reference: &str,
    distance: Distance,
    direction: Option<Direction>,
) -> PathTemplate {
    PathTemplate {
        source: None,
        destination: Some(PathEndpoint::Region(RegionTemplate {
            reference: var(reference),
            distance: Some(distance),
            direction,
        })),
        operator: Some(operator),
        orientation_changes: false,
    }
}

fn add_action_descriptions(b: &mut OntologyBuilder) {
    use SemanticRole::{Agent, Goal, Theme};

    // walk / run: self-propelled motion over a surface.
    for (id, fast) in [("walk", false), ("run", true)] {
        let mut d = base_action(&[(Agent, "mover"), (Goal, "destination")]);
        require(&mut d, "mover", &["animate", "self-moving"]);
        protos(
            &mut d,
            "mover",
            &[ProtoRole::VolitionallyInvolved, ProtoRole::Moves],
        );
        d.during.paths.insert(
            var("mover"),
            path_to_variable(PathOperator::Toward, "destination"),
        );
        d.postconditions.push(ConditionRelation::in_region(
            "mover",
            "destination",
            Some(Distance::Proximal),
            None,
        ));
        let _ = fast;
        b.action_description(id, d);
    }

    // consume / eat: the theme ends up inside the agent.
    for id in ["consume", "eat"] {
        let mut d = base_action(&[(Agent, "consumer"), (Theme, "consumed")]);
        require(&mut d, "consumer", &["animate"]);
        require(&mut d, "consumed", &["edible"]);
        protos(
            &mut d,
            "consumer",
            &[
                ProtoRole::VolitionallyInvolved,
                ProtoRole::SentientOrPerceives,
            ],
        );
        protos(
            &mut d,
            "consumed",
            &[ProtoRole::CausallyAffected, ProtoRole::IncrementalTheme],
        );
        d.postconditions.push(ConditionRelation::in_region(
            "consumed",
            "consumer",
            Some(Distance::Interior),
            None,
        ));
        d.enduring_conditions.push(ConditionRelation::object(
            "smaller-than",
            "consumed",
            "consumer",
        ));
        b.action_description(id, d);
    }

    // drink: a consumed liquid, starting inside a hollow container.
    {
        let mut d = base_action(&[(Agent, "drinker"), (Theme, "drunk")]);
        auxiliary(&mut d, "container");
        require(&mut d, "drinker", &["animate"]);
        require(&mut d, "drunk", &["liquid"]);
        require(&mut d, "container", &["hollow"]);
        protos(
            &mut d,
            "drinker",
            &[
                ProtoRole::VolitionallyInvolved,
                ProtoRole::SentientOrPerceives,
            ],
        );
        protos(
            &mut d,
            "drunk",
            &[ProtoRole::CausallyAffected, ProtoRole::IncrementalTheme],
        );
        d.preconditions.push(ConditionRelation::in_region(
            "drunk",
            "container",
            Some(Distance::Interior),
            None,
        ));
        d.postconditions.push(ConditionRelation::in_region(
            "drunk",
            "drinker",
            Some(Distance::Interior),
            None,
        ));
        b.action_description("drink", d);
    }

    // put: theme comes to rest on top of the goal.
    {
        let mut d = base_action(&[(Agent, "putter"), (Theme, "placed"), (Goal, "surface")]);
        require(&mut d, "putter", &["can-manipulate-objects"]);
        require(&mut d, "surface", &["can-have-things-on-them"]);
        protos(
            &mut d,
            "putter",
            &[ProtoRole::VolitionallyInvolved, ProtoRole::CausesChange],
        );
        protos(
            &mut d,
            "placed",
            &[ProtoRole::Moves, ProtoRole::CausallyAffected],
        );
        protos(&mut d, "surface", &[ProtoRole::Stationary]);
        d.preconditions
            .push(ConditionRelation::object("has", "putter", "placed"));
        d.postconditions.push(ConditionRelation::in_region(
            "placed",
            "surface",
            Some(Distance::ExteriorButInContact),
            Some(Direction::ABOVE),
        ));
        d.during.paths.insert(
            var("placed"),
            path_to_region(
                PathOperator::To,
                "surface",
                Distance::ExteriorButInContact,
                Some(Direction::ABOVE),
            ),
        );
        b.action_description("put", d);
    }

    // push / shove: sustained contact propelling the theme.
    for id in ["push", "shove"] {
        let mut d = base_action(&[(Agent, "pusher"), (Theme, "pushed")]);
        require(&mut d, "pusher", &["can-manipulate-objects"]);
        protos(
            &mut d,
            "pusher",
            &[ProtoRole::VolitionallyInvolved, ProtoRole::CausesChange],
        );
        protos(
            &mut d,
            "pushed",
            &[ProtoRole::Moves, ProtoRole::CausallyAffected],
        );
        d.enduring_conditions.push(ConditionRelation::in_region(
            "pusher",
            "pushed",
            Some(Distance::ExteriorButInContact),
            None,
        ));
        d.during.paths.insert(
            var("pushed"),
            PathTemplate {
                source: None,
                destination: None,
                operator: Some(PathOperator::AwayFrom),
                orientation_changes: false,
            },
        );
        b.action_description(id, d);
    }

    // go: the mover ends up inside a hollow destination.
    {
        let mut d = base_action(&[(Agent, "mover"), (Goal, "destination")]);
        require(&mut d, "mover", &["self-moving"]);
        require(&mut d, "destination", &["hollow"]);
        protos(
            &mut d,
            "mover",
            &[ProtoRole::VolitionallyInvolved, ProtoRole::Moves],
        );
        d.during.paths.insert(
            var("mover"),
            path_to_variable(PathOperator::To, "destination"),
        );
        d.postconditions.push(ConditionRelation::in_region(
            "mover",
            "destination",
            Some(Distance::Interior),
            None,
        ));
        b.action_description("go", d);
    }

    // come: motion ending near the goal.
    {
        let mut d = base_action(&[(Agent, "mover"), (Goal, "destination")]);
        require(&mut d, "mover", &["self-moving"]);
        protos(
            &mut d,
            "mover",
            &[ProtoRole::VolitionallyInvolved, ProtoRole::Moves],
        );
        d.during.paths.insert(
            var("mover"),
            path_to_variable(PathOperator::Toward, "destination"),
        );
        d.postconditions.push(ConditionRelation::in_region(
            "mover",
            "destination",
            Some(Distance::Proximal),
            None,
        ));
        b.action_description("come", d);
    }

    // take / grab: the agent gains possession.
    for id in ["take", "grab"] {
        let mut d = base_action(&[(Agent, "taker"), (Theme, "taken")]);
        require(&mut d, "taker", &["can-manipulate-objects"]);
        require(&mut d, "taken", &["person-can-have"]);
        protos(
            &mut d,
            "taker",
            &[ProtoRole::VolitionallyInvolved, ProtoRole::CausesChange],
        );
        protos(&mut d, "taken", &[ProtoRole::CausallyAffected]);
        d.postconditions
            .push(ConditionRelation::object("has", "taker", "taken"));
        b.action_description(id, d);
    }

    // give / pass: possession transfers from agent to goal.
    for id in ["give", "pass"] {
        let mut d = base_action(&[(Agent, "giver"), (Theme, "given"), (Goal, "receiver")]);
        require(&mut d, "giver", &["can-manipulate-objects"]);
        require(&mut d, "receiver", &["can-manipulate-objects"]);
        require(&mut d, "given", &["person-can-have"]);
        protos(
            &mut d,
            "giver",
            &[ProtoRole::VolitionallyInvolved, ProtoRole::CausesChange],
        );
        protos(
            &mut d,
            "given",
            &[ProtoRole::Moves, ProtoRole::CausallyAffected],
        );
        protos(&mut d, "receiver", &[ProtoRole::SentientOrPerceives]);
        d.preconditions
            .push(ConditionRelation::object("has", "giver", "given"));
        d.postconditions
            .push(ConditionRelation::object("has", "receiver", "given"));
        d.during
            .paths
            .insert(var("given"), path_to_variable(PathOperator::To, "receiver"));
        b.action_description(id, d);
    }

    // spin: in-place rotation.
    {
        let mut d = base_action(&[(Agent, "spinner")]);
        protos(&mut d, "spinner", &[ProtoRole::Moves]);
        d.during.paths.insert(
            var("spinner"),
            PathTemplate {
                source: None,
                destination: None,
                operator: None,
                orientation_changes: true,
            },
        );
        b.action_description("spin", d);
    }

    // sit: the agent comes to rest on something sittable.
    {
        let mut d = base_action(&[(Agent, "sitter"), (Goal, "seat")]);
        require(&mut d, "sitter", &["animate"]);
        require(&mut d, "seat", &["can-be-sat-on"]);
        protos(&mut d, "sitter", &[ProtoRole::VolitionallyInvolved]);
        protos(&mut d, "seat", &[ProtoRole::Stationary]);
        d.postconditions.push(ConditionRelation::in_region(
            "sitter",
            "seat",
            Some(Distance::ExteriorButInContact),
            Some(Direction::ABOVE),
        ));
        b.action_description("sit", d);
    }

    // fall: unvolitional descent ending on a surface.
    {
        let mut d = base_action(&[(Theme, "faller")]);
        auxiliary(&mut d, "landing");
        require(&mut d, "landing", &["can-have-things-on-them"]);
        protos(
            &mut d,
            "faller",
            &[ProtoRole::Moves, ProtoRole::UndergoesChange],
        );
        d.during.paths.insert(
            var("faller"),
            path_to_region(
                PathOperator::To,
                "landing",
                Distance::ExteriorButInContact,
                Some(Direction::ABOVE),
            ),
        );
        d.postconditions.push(ConditionRelation::in_region(
            "faller",
            "landing",
            Some(Distance::ExteriorButInContact),
            Some(Direction::ABOVE),
        ));
        b.action_description("fall", d);
    }

    // throw: the thrower loses possession; the projectile arcs above the
    // ground toward its destination.
    {
        let mut d = base_action(&[(Agent, "thrower"), (Theme, "projectile")]);
        auxiliary(&mut d, "surface");
        require(&mut d, "thrower", &["can-manipulate-objects"]);
        require(&mut d, "projectile", &["person-can-have"]);
        require(&mut d, "surface", &["can-have-things-on-them"]);
        protos(
            &mut d,
            "thrower",
            &[ProtoRole::VolitionallyInvolved, ProtoRole::CausesChange],
        );
        protos(
            &mut d,
            "projectile",
            &[ProtoRole::Moves, ProtoRole::CausallyAffected],
        );
        d.preconditions
            .push(ConditionRelation::object("has", "thrower", "projectile"));
        d.during.paths.insert(
            var("projectile"),
            path_to_region(
                PathOperator::Via,
                "surface",
                Distance::Distal,
                Some(Direction::ABOVE),
            ),
        );
        d.during.at_some_point.push(ConditionRelation::in_region(
            "projectile",
            "surface",
            Some(Distance::Distal),
            Some(Direction::ABOVE),
        ));
        b.action_description("throw", d);
    }

    // move: generic caused or self motion.
    {
        let mut d = base_action(&[(Agent, "mover")]);
        protos(&mut d, "mover", &[ProtoRole::Moves]);
        d.during.paths.insert(
            var("mover"),
            PathTemplate {
                source: None,
                destination: None,
                operator: Some(PathOperator::AwayFrom),
                orientation_changes: false,
            },
        );
        b.action_description("move", d);
    }

    // jump: momentarily clear of the surface below.
    {
        let mut d = base_action(&[(Agent, "jumper")]);
        auxiliary(&mut d, "surface");
        require(&mut d, "jumper", &["can-jump"]);
        require(&mut d, "surface", &["can-have-things-on-them"]);
        protos(
            &mut d,
            "jumper",
            &[ProtoRole::VolitionallyInvolved, ProtoRole::Moves],
        );
        d.during.at_some_point.push(ConditionRelation::in_region(
            "jumper",
            "surface",
            Some(Distance::Distal),
            Some(Direction::ABOVE),
        ));
        b.action_description("jump", d);
    }

    // roll: rotation while staying in contact with a surface.
    {
        let mut d = base_action(&[(Theme, "roller")]);
        auxiliary(&mut d, "surface");
        require(&mut d, "roller", &["rollable"]);
        require(&mut d, "surface", &["can-have-things-on-them"]);
        protos(&mut d, "roller", &[ProtoRole::Moves]);
        d.enduring_conditions.push(ConditionRelation::in_region(
            "roller",
            "surface",
            Some(Distance::ExteriorButInContact),
            Some(Direction::ABOVE),
        ));
        d.during.paths.insert(
            var("roller"),
            PathTemplate {
                source: None,
                destination: None,
                operator: Some(PathOperator::AwayFrom),
                orientation_changes: true,
            },
        );
        b.action_description("roll", d);
    }

    // fly: sustained motion well above the ground.
    {
        let mut d = base_action(&[(Agent, "flier")]);
        auxiliary(&mut d, "surface");
        require(&mut d, "flier", &["can-fly"]);
        require(&mut d, "surface", &["can-have-things-on-them"]);
        protos(
            &mut d,
            "flier",
            &[ProtoRole::VolitionallyInvolved, ProtoRole::Moves],
        );
        d.during.continuous.push(ConditionRelation::in_region(
            "flier",
            "surface",
            Some(Distance::Distal),
            Some(Direction::ABOVE),
        ));
        b.action_description("fly", d);
    }
}

fn build_generator() -> Result<EnglishGenerator> {
    let mut g = EnglishGenerator::default();
    for noun in [
        "table", "bed", "ball", "paper", "book", "house", "car", "cup", "box", "chair", "truck",
        "door", "hat", "cookie", "head", "hand", "baby", "dog", "cat", "bear", "bird", "chicken",
        "cow",
    ] {
        g.register_noun(noun, NounEntry::common(noun))?;
    }
    g.register_noun("mom", NounEntry::proper("Mom"))?;
    g.register_noun("dad", NounEntry::proper("Dad"))?;
    g.register_noun("ground", NounEntry::particular("ground"))?;
    for mass in ["juice", "milk", "water"] {
        g.register_noun(mass, NounEntry::mass(mass))?;
    }

    for (node, third, participle) in [
        ("walk", "walks", "walked"),
        ("run", "runs", "run"),
        ("consume", "consumes", "consumed"),
        ("eat", "eats", "eaten"),
        ("drink", "drinks", "drunk"),
        ("put", "puts", "put"),
        ("push", "pushes", "pushed"),
        ("shove", "shoves", "shoved"),
        ("go", "goes", "gone"),
        ("come", "comes", "come"),
        ("take", "takes", "taken"),
        ("grab", "grabs", "grabbed"),
        ("give", "gives", "given"),
        ("spin", "spins", "spun"),
        ("sit", "sits", "sat"),
        ("fall", "falls", "fallen"),
        ("throw", "throws", "thrown"),
        ("pass", "passes", "passed"),
        ("move", "moves", "moved"),
        ("jump", "jumps", "jumped"),
        ("roll", "rolls", "rolled"),
        ("fly", "flies", "flown"),
    ] {
        g.register_verb(node, VerbEntry::new(node, third, participle))?;
    }

    for color in COLORS {
        g.register_adjective(color, &color.replace('-', " "))?;
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::Ontology;

    fn ontology() -> Ontology {
        load_bundle().unwrap().ontology
    }

    #[test]
    fn bundle_loads_and_validates() {
        let bundle = load_bundle().unwrap();
        assert!(bundle.ontology.validate().is_empty());
    }

    #[test]
    fn property_row_contains_capability_markers() {
        let o = ontology();
        for id in ["can-fly", "rollable"] {
            let node = o.node(&NodeId::new(id)).unwrap();
            assert!(node.parents.contains(&NodeId::new(PROPERTY)));
        }
    }

    #[test]
    fn inanimate_row_contains_truck_parts() {
        let o = ontology();
        for id in ["truckcab", "trailer", "flatbed"] {
            let node = o.node(&NodeId::new(id)).unwrap();
            assert!(node.parents.contains(&NodeId::new("inanimate-object")));
        }
    }

    #[test]
    fn animal_template_fillers_are_exactly_six() {
        let o = ontology();
        let fillers = o
            .template_fillers(
                &NodeId::new("animal"),
                &Default::default(),
                &Default::default(),
            )
            .unwrap();
        assert_eq!(fillers.len(), 6);
        for a in ANIMALS {
            assert!(fillers.contains(&NodeId::new(a)));
        }
    }

    #[test]
    fn every_verb_has_description_and_lexicon_entry() {
        let bundle = load_bundle().unwrap();
        for v in VERBS.into_iter().chain(["eat", "drink"]) {
            assert!(
                bundle
                    .ontology
                    .action_descriptions
                    .contains_key(&NodeId::new(v)),
                "missing action description for {v}"
            );
            assert!(
                bundle.generator.lexicon.verbs.contains_key(&NodeId::new(v)),
                "missing verb entry for {v}"
            );
        }
    }

    #[test]
    fn bundle_dump_is_versioned_ron() {
        let bundle = load_bundle().unwrap();
        let files = bundle.dump().unwrap();
        assert!(files.contains_key("ontology.ron"));
        assert!(files.contains_key("lexicon.ron"));
        for text in files.values() {
            assert!(text.contains("format_version: 1"));
        }
    }
}
