//! The bundled sample curriculum: fourteen named training stages that walk a
//! learner from single objects through colors, possession, spatial relations,
//! the full verb inventory, functional objects, plurals and part-whole
//! scenes, plus a ready-to-run experiment configuration over them.

use crate::error::{Error, Result};
use crate::learners::{LearnerConfig, LearningAlgorithm, PursuitParams};
use crate::ontology::Ontology;
use crate::situation::{Phase, IS_SPEAKER};
use crate::spatial::{Direction, Distance};
use crate::templates::{instantiate_all, SituationTemplate, TemplateBuilder, TemplateTarget};

use super::config::{ExperimentConfig, InstantiationStrategy, LearnerSpec, Stage, StageSource};

/// Property restricting a variable to small, holdable object types.
const HOLDABLE: &str = "person-can-have";

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

/// A salient variable over small object types.
fn holdable_var(b: &mut TemplateBuilder, name: &str) {
    b.variable(name, "inanimate-object");
    b.require_property(name, HOLDABLE);
}

/// A salient variable over the adult people (the ones with lexicon entries
/// that can serve as verb agents).
fn adult_var(b: &mut TemplateBuilder, name: &str) {
    b.variable(name, "person");
    for banned in ["me", "you", "baby"] {
        b.ban_type(name, banned);
    }
}

fn single_objects() -> Stage {
    let mut objects = TemplateBuilder::new();
    objects
        .variable("obj", "inanimate-object")
        .ban_type("obj", "ground");
    let mut people = TemplateBuilder::new();
    people
        .variable("person", "person")
        .ban_type("person", "me")
        .ban_type("person", "you");
    Stage::templates("single-objects", vec![objects.build(), people.build()]).with_repeat(4)
}

fn objects_on_the_ground() -> Stage {
    let mut b = TemplateBuilder::new();
    holdable_var(&mut b, "obj");
    // Redeclaring the implicit ground constant makes it salient, so the
    // utterance mentions it ("a ball on the ground").
    b.constant("ground", "ground").on("obj", "ground");
    Stage::templates("objects-on-the-ground", vec![b.build()]).with_repeat(2)
}

fn objects_by_color() -> Stage {
    let templates = COLORS
        .iter()
        .map(|color| {
            let mut b = TemplateBuilder::new();
            holdable_var(&mut b, "obj");
            b.assert_property("obj", color);
            b.build()
        })
        .collect();
    Stage::templates("objects-by-color", templates)
}

fn possession_templates(speaker_marked: bool) -> Vec<SituationTemplate> {
    ["mom", "dad"]
        .into_iter()
        .map(|owner| {
            let mut b = TemplateBuilder::new();
            let props: &[&str] = if speaker_marked { &[IS_SPEAKER] } else { &[] };
            b.constant_with("owner", owner, props, false);
            holdable_var(&mut b, "obj");
            b.relation(
                "has",
                "owner",
                TemplateTarget::Symbol("obj".into()),
                Phase::Both,
            );
            b.build()
        })
        .collect()
}

fn speaker_possession() -> Stage {
    Stage::templates("speaker-possession", possession_templates(true)).with_repeat(2)
}

fn non_speaker_possession() -> Stage {
    Stage::templates("non-speaker-possession", possession_templates(false)).with_repeat(2)
}

fn objects_on_objects() -> Stage {
    let mut b = TemplateBuilder::new();
    holdable_var(&mut b, "top");
    b.variable("bottom", "inanimate-object")
        .require_property("bottom", "can-have-things-on-them")
        .ban_type("bottom", "ground")
        .on("top", "bottom");
    Stage::templates("objects-on-objects", vec![b.build()]).with_repeat(2)
}

fn objects_beside_objects() -> Stage {
    let mut b = TemplateBuilder::new();
    holdable_var(&mut b, "figure");
    b.variable("reference", "inanimate-object")
        .require_property("reference", "hollow")
        .ban_type("reference", "cup")
        .in_region(
            "figure",
            "reference",
            Some(Distance::Proximal),
            None,
            Phase::Both,
        )
        .distinct_types(&["figure", "reference"]);
    Stage::templates("objects-beside-objects", vec![b.build()])
        .with_strategy(InstantiationStrategy::Sample { n: 12 })
}

fn objects_above_below() -> Stage {
    let templates = [Direction::ABOVE, Direction::BELOW]
        .into_iter()
        .map(|direction| {
            let mut b = TemplateBuilder::new();
            holdable_var(&mut b, "figure");
            b.variable("reference", "inanimate-object")
                .require_property("reference", "has-space-under")
                .in_region(
                    "figure",
                    "reference",
                    Some(Distance::Distal),
                    Some(direction),
                    Phase::Both,
                );
            b.build()
        })
        .collect();
    Stage::templates("objects-above-below", templates).with_repeat(2)
}

fn objects_in_objects() -> Stage {
    let mut b = TemplateBuilder::new();
    holdable_var(&mut b, "content");
    b.variable("container", "inanimate-object")
        .require_property("container", "hollow")
        .in_region(
            "content",
            "container",
            Some(Distance::Interior),
            None,
            Phase::Both,
        )
        .smaller_than("content", "container");
    Stage::templates("objects-in-objects", vec![b.build()])
}

fn objects_in_front_behind() -> Stage {
    let templates = [Direction::IN_FRONT, Direction::BEHIND]
        .into_iter()
        .map(|direction| {
            let mut b = TemplateBuilder::new();
            holdable_var(&mut b, "figure");
            b.variable("reference", "inanimate-object")
                .require_property("reference", "hollow")
                .ban_type("reference", "cup")
                .in_region("figure", "reference", None, Some(direction), Phase::Both)
                .distinct_types(&["figure", "reference"]);
            b.build()
        })
        .collect();
    Stage::templates("objects-in-front-behind", templates)
        .with_strategy(InstantiationStrategy::Sample { n: 6 })
}

/// One template per verb in the ontology (including the `consume`
/// specializations `eat` and `drink`), each with the bindings its action
/// description needs.
pub fn verb_templates() -> Vec<SituationTemplate> {
    let mut out = Vec::new();

    // Self-propelled motion toward a goal.
    for (verb, goal_type) in [("walk", "table"), ("run", "chair"), ("come", "door")] {
        let mut b = TemplateBuilder::new();
        adult_var(&mut b, "agent");
        b.constant("goal", goal_type)
            .action(verb, &[("mover", "agent"), ("destination", "goal")]);
        out.push(b.build());
    }

    // Motion ending inside a hollow destination.
    {
        let mut b = TemplateBuilder::new();
        adult_var(&mut b, "agent");
        b.constant("goal", "house")
            .action("go", &[("mover", "agent"), ("destination", "goal")]);
        out.push(b.build());
    }

    // Consumption.
    for verb in ["consume", "eat"] {
        let mut b = TemplateBuilder::new();
        adult_var(&mut b, "agent");
        b.constant("meal", "cookie")
            .action(verb, &[("consumer", "agent"), ("consumed", "meal")]);
        out.push(b.build());
    }
    {
        let mut b = TemplateBuilder::new();
        adult_var(&mut b, "agent");
        b.constant("beverage", "juice")
            .constant_with("vessel", "cup", &[], false)
            .action(
                "drink",
                &[
                    ("drinker", "agent"),
                    ("drunk", "beverage"),
                    ("container", "vessel"),
                ],
            );
        out.push(b.build());
    }

    // Placement.
    {
        let mut b = TemplateBuilder::new();
        adult_var(&mut b, "agent");
        b.constant("placed", "ball")
            .constant("surface", "table")
            .action(
                "put",
                &[
                    ("putter", "agent"),
                    ("placed", "placed"),
                    ("surface", "surface"),
                ],
            );
        out.push(b.build());
    }

    // Sustained-contact propulsion.
    for verb in ["push", "shove"] {
        let mut b = TemplateBuilder::new();
        adult_var(&mut b, "agent");
        b.constant("load", "box")
            .action(verb, &[("pusher", "agent"), ("pushed", "load")]);
        out.push(b.build());
    }

    // Possession gain.
    for (verb, item) in [("take", "hat"), ("grab", "book")] {
        let mut b = TemplateBuilder::new();
        adult_var(&mut b, "agent");
        b.constant("item", item)
            .action(verb, &[("taker", "agent"), ("taken", "item")]);
        out.push(b.build());
    }

    // Possession transfer.
    for (verb, item) in [("give", "ball"), ("pass", "cup")] {
        let mut b = TemplateBuilder::new();
        adult_var(&mut b, "agent");
        b.constant("item", item)
            .constant("receiver", "baby")
            .action(
                verb,
                &[
                    ("giver", "agent"),
                    ("given", "item"),
                    ("receiver", "receiver"),
                ],
            );
        out.push(b.build());
    }

    // Intransitive agent motion.
    {
        let mut b = TemplateBuilder::new();
        adult_var(&mut b, "agent");
        b.action("spin", &[("spinner", "agent")]);
        out.push(b.build());
    }
    {
        let mut b = TemplateBuilder::new();
        adult_var(&mut b, "agent");
        b.action("move", &[("mover", "agent")]);
        out.push(b.build());
    }
    {
        let mut b = TemplateBuilder::new();
        adult_var(&mut b, "agent");
        b.action("jump", &[("jumper", "agent"), ("surface", "ground")]);
        out.push(b.build());
    }

    // Sitting.
    {
        let mut b = TemplateBuilder::new();
        adult_var(&mut b, "agent");
        b.constant("seat", "chair")
            .action("sit", &[("sitter", "agent"), ("seat", "seat")]);
        out.push(b.build());
    }

    // Throwing (the thrower loses possession).
    {
        let mut b = TemplateBuilder::new();
        adult_var(&mut b, "agent");
        b.constant("projectile", "ball").action(
            "throw",
            &[
                ("thrower", "agent"),
                ("projectile", "projectile"),
                ("surface", "ground"),
            ],
        );
        out.push(b.build());
    }

    // Themes moving on their own.
    {
        let mut b = TemplateBuilder::new();
        b.constant("item", "ball")
            .action("fall", &[("faller", "item"), ("landing", "ground")]);
        out.push(b.build());
    }
    {
        let mut b = TemplateBuilder::new();
        b.constant("item", "ball")
            .action("roll", &[("roller", "item"), ("surface", "ground")]);
        out.push(b.build());
    }
    {
        let mut b = TemplateBuilder::new();
        b.constant("flier", "bird")
            .action("fly", &[("flier", "flier"), ("surface", "ground")]);
        out.push(b.build());
    }

    out
}

fn verbs() -> Stage {
    Stage::templates("verbs", verb_templates())
}

fn functional_objects() -> Stage {
    let mut b = TemplateBuilder::new();
    b.variable("sitter", "person")
        .ban_type("sitter", "me")
        .ban_type("sitter", "you")
        .constant("seat", "chair")
        .action("sit", &[("sitter", "sitter"), ("seat", "seat")]);
    Stage::templates("functional-objects", vec![b.build()]).with_repeat(2)
}

fn plurals() -> Stage {
    let templates = [("ball", 2), ("box", 2), ("cup", 2), ("book", 3)]
        .into_iter()
        .map(|(object_type, count)| {
            let mut b = TemplateBuilder::new();
            for i in 0..count {
                b.constant(&format!("{object_type}_{i}"), object_type);
            }
            b.build()
        })
        .collect();
    Stage::templates("plurals", templates).with_repeat(3)
}

fn part_whole() -> Stage {
    let mut templates = Vec::new();
    for owner in ["mom", "dad"] {
        for part in ["head", "hand"] {
            let mut b = TemplateBuilder::new();
            b.constant_with("owner", owner, &[], false)
                .constant("part", part)
                .relation(
                    "has",
                    "owner",
                    TemplateTarget::Symbol("part".into()),
                    Phase::Both,
                );
            templates.push(b.build());
        }
    }
    Stage::templates("part-whole", templates).with_repeat(2)
}

/// The fourteen training stages, in curriculum order.
pub fn sample_train_stages() -> Vec<Stage> {
    vec![
        single_objects(),
        objects_on_the_ground(),
        objects_by_color(),
        speaker_possession(),
        non_speaker_possession(),
        objects_on_objects(),
        objects_beside_objects(),
        objects_above_below(),
        objects_in_objects(),
        objects_in_front_behind(),
        verbs(),
        functional_objects(),
        plurals(),
        part_whole(),
    ]
}

/// The training stages, with every template checked against the ontology: a
/// template whose instantiation space is empty is an error.
pub fn build_sample_curriculum(ontology: &Ontology) -> Result<Vec<Stage>> {
    let stages = sample_train_stages();
    for stage in &stages {
        if let StageSource::Templates { templates, .. } = &stage.source {
            for template in templates {
                if instantiate_all(template, ontology)?.is_empty() {
                    return Err(Error::Invalid(format!(
                        "stage `{}` contains a template with an empty instantiation space",
                        stage.name
                    )));
                }
            }
        }
    }
    Ok(stages)
}

/// Held-out single-object scenes scored against "a <object>" gold utterances.
fn test_single_objects() -> Stage {
    let mut b = TemplateBuilder::new();
    holdable_var(&mut b, "obj");
    Stage::templates("test-single-objects", vec![b.build()])
}

/// The learner configuration the sample experiment runs with: pursuit with a
/// learning rate matched to the curriculum's exposure counts for objects,
/// attributes and relations, and subset learning for actions.
pub fn sample_learner_config() -> LearnerConfig {
    let pursuit = LearningAlgorithm::PursuitNa(PursuitParams {
        gamma: 0.25,
        ..PursuitParams::default()
    });
    LearnerConfig {
        object_algorithm: pursuit.clone(),
        attribute_algorithm: pursuit.clone(),
        relation_algorithm: pursuit,
        action_algorithm: LearningAlgorithm::Subset,
        ..LearnerConfig::default()
    }
}

/// A complete ready-to-run experiment over the sample curriculum.
pub fn sample_experiment_config(master_seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        learner: LearnerSpec {
            config: sample_learner_config(),
            saved_state: None,
        },
        warm_up_stages: Vec::new(),
        train_stages: sample_train_stages(),
        test_stages: vec![test_single_objects()],
        master_seed,
        output_dir: None,
    }
}

#[cfg(test)]
mod tests {
    use crate::assets::{load_bundle, VERBS};
    use crate::ontology::NodeId;

    use super::super::run::resolve_stage;
    use super::*;

    #[test]
    fn curriculum_has_the_fourteen_sections_in_order() {
        let names: Vec<String> = sample_train_stages().into_iter().map(|s| s.name).collect();
        assert_eq!(
            names,
            vec![
                "single-objects",
                "objects-on-the-ground",
                "objects-by-color",
                "speaker-possession",
                "non-speaker-possession",
                "objects-on-objects",
                "objects-beside-objects",
                "objects-above-below",
                "objects-in-objects",
                "objects-in-front-behind",
                "verbs",
                "functional-objects",
                "plurals",
                "part-whole",
            ]
        );
    }

    #[test]
    fn verb_section_covers_every_ontology_verb() {
        let templates = verb_templates();
        for verb in VERBS.into_iter().chain(["eat", "drink"]) {
            assert!(
                templates
                    .iter()
                    .any(|t| t.actions.iter().any(|a| a.action_type == NodeId::new(verb))),
                "no template exercises `{verb}`"
            );
        }
    }

    #[test]
    fn every_stage_resolves_deterministically() {
        let bundle = load_bundle().unwrap();
        let stages = build_sample_curriculum(&bundle.ontology).unwrap();
        for stage in &stages {
            let first = resolve_stage(stage, &bundle.ontology, &bundle.generator, 11).unwrap();
            assert!(
                !first.is_empty(),
                "stage `{}` resolved to nothing",
                stage.name
            );
            let second = resolve_stage(stage, &bundle.ontology, &bundle.generator, 11).unwrap();
            assert_eq!(first, second, "stage `{}` is not deterministic", stage.name);
        }
    }

    #[test]
    fn speaker_possession_varies_the_speaker() {
        let bundle = load_bundle().unwrap();
        let stages = sample_train_stages();
        let stage = stages
            .iter()
            .find(|s| s.name == "speaker-possession")
            .unwrap();
        let instances = resolve_stage(stage, &bundle.ontology, &bundle.generator, 11).unwrap();
        let speakers: std::collections::BTreeSet<&str> = instances
            .iter()
            .flat_map(|i| i.situation.objects.values())
            .filter(|o| o.is_speaker())
            .map(|o| o.object_type.as_str())
            .collect();
        assert!(speakers.contains("mom") && speakers.contains("dad"));
        for instance in &instances {
            assert_eq!(instance.utterance[0], "my");
        }
    }

    #[test]
    fn sample_config_is_valid() {
        sample_experiment_config(3).validate().unwrap();
    }
}
