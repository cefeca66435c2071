//! Acceptance suite: one test per release criterion, each printing a single
//! PASS line on success. The criteria check the matching engine against a
//! brute-force oracle, reproduce the headline learned-meaning claims on the
//! bundled curriculum, and pin down determinism and metric invariants.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;

use tempfile::TempDir;

use wordworld_core::assets::load_bundle;
use wordworld_core::experiment::{
    resolve_stage, run_experiment, sample_experiment_config, sample_learner_config,
    sample_train_stages, ExperimentConfig, LearnerSpec, Stage,
};
use wordworld_core::graphs::{
    match_pattern, matches_graph, subsumes, to_graph, EdgeKind, EdgePredicate, GraphEdge,
    GraphNode, MatchOptions, MatchTarget, NodePredicate, PatternEdge, PerceptionGraph,
    PerceptionGraphPattern, ScopeSet, SlotId,
};
use wordworld_core::learners::{
    update_store, ConceptKind, HypothesisStore, IntegratedLearner, LearnerConfig,
    LearningAlgorithm, PerceptionGraphTemplate, PursuitParams, TemplateElement, WordEntry,
};
use wordworld_core::ontology::NodeId;
use wordworld_core::perception::{Aspect, PerceivedProperty, PerceptionParams};
use wordworld_core::rng::{derive_seed, SplitMix64};
use wordworld_core::spatial::{Direction, Distance};
use wordworld_core::templates::TemplateBuilder;

// ---------------------------------------------------------------------------
// Random graphs and patterns for the oracle-equivalence criteria.

fn random_property(rng: &mut SplitMix64) -> PerceivedProperty {
    match rng.next_bounded(5) {
        0 => PerceivedProperty::Animate,
        1 => PerceivedProperty::Inanimate,
        2 => PerceivedProperty::Hollow,
        3 => PerceivedProperty::Liquid,
        _ => PerceivedProperty::IsSpeaker,
    }
}

fn random_scopes(rng: &mut SplitMix64) -> ScopeSet {
    match rng.next_bounded(3) {
        0 => ScopeSet::BEFORE,
        1 => ScopeSet::AFTER,
        _ => ScopeSet::BOTH,
    }
}

fn random_edge_kind(rng: &mut SplitMix64) -> EdgeKind {
    match rng.next_bounded(6) {
        0 => EdgeKind::HasProperty,
        1 => EdgeKind::HasGeon,
        2 => EdgeKind::HasAxis,
        3 => EdgeKind::InRegion,
        4 => EdgeKind::ReferenceObject,
        _ => EdgeKind::Possession,
    }
}

fn random_graph(rng: &mut SplitMix64, max_nodes: u64) -> PerceptionGraph {
    let n = 1 + rng.next_bounded(max_nodes);
    let mut g = PerceptionGraph {
        nodes: Vec::new(),
        edges: Vec::new(),
        dynamic: rng.next_bounded(2) == 0,
    };
    for _ in 0..n {
        let node = match rng.next_bounded(5) {
            0 => GraphNode::Object {
                debug: String::new(),
            },
            1 => GraphNode::Geon,
            2 => GraphNode::Property(random_property(rng)),
            3 => GraphNode::Region {
                distance: Some(if rng.next_bounded(2) == 0 {
                    Distance::Interior
                } else {
                    Distance::ExteriorButInContact
                }),
                direction: if rng.next_bounded(2) == 0 {
                    Some(Direction::ABOVE)
                } else {
                    None
                },
            },
            _ => GraphNode::Axis {
                debug: String::new(),
                curved: rng.next_bounded(2) == 0,
                directed: rng.next_bounded(2) == 0,
                aligned_to_gravity: rng.next_bounded(2) == 0,
            },
        };
        g.nodes.push(node);
    }
    for from in 0..g.nodes.len() {
        for to in 0..g.nodes.len() {
            if from != to && rng.next_bounded(4) == 0 {
                g.edges.push(GraphEdge {
                    from,
                    to,
                    kind: random_edge_kind(rng),
                    scopes: random_scopes(rng),
                });
            }
        }
    }
    g
}

fn random_pattern(rng: &mut SplitMix64, max_nodes: u64) -> PerceptionGraphPattern {
    let n = 1 + rng.next_bounded(max_nodes);
    let mut p = PerceptionGraphPattern::default();
    for i in 0..n {
        let node = match rng.next_bounded(6) {
            0 => NodePredicate::AnyObject,
            1 if i == 0 => NodePredicate::Slot(SlotId::new("ARG1")),
            1 => NodePredicate::AnyGeon,
            2 => NodePredicate::PropertyEquals(random_property(rng)),
            3 => NodePredicate::AnyRegion,
            4 => NodePredicate::RegionIs {
                distance: Some(Distance::ExteriorButInContact),
                direction: if rng.next_bounded(2) == 0 {
                    Some(Direction::ABOVE)
                } else {
                    None
                },
            },
            _ => NodePredicate::AxisIs {
                curved: if rng.next_bounded(2) == 0 {
                    Some(rng.next_bounded(2) == 0)
                } else {
                    None
                },
                directed: None,
                aligned_to_gravity: Some(rng.next_bounded(2) == 0),
            },
        };
        p.nodes.push(node);
    }
    for from in 0..p.nodes.len() {
        for to in 0..p.nodes.len() {
            if from != to && rng.next_bounded(3) == 0 {
                p.edges.push(PatternEdge {
                    from,
                    to,
                    predicate: EdgePredicate {
                        kind: random_edge_kind(rng),
                        required_scopes: random_scopes(rng),
                    },
                });
            }
        }
    }
    p
}

/// Brute force: every injective assignment of pattern nodes to graph nodes,
/// with all node and edge predicates checked. Returns the full match set.
fn oracle_match_set(
    pattern: &PerceptionGraphPattern,
    graph: &PerceptionGraph,
) -> BTreeSet<Vec<usize>> {
    fn recurse(
        pattern: &PerceptionGraphPattern,
        graph: &PerceptionGraph,
        assignment: &mut Vec<usize>,
        out: &mut BTreeSet<Vec<usize>>,
    ) {
        if assignment.len() == pattern.nodes.len() {
            if pattern
                .edges
                .iter()
                .all(|e| graph.edge_ok(&e.predicate, assignment[e.from], assignment[e.to]))
            {
                out.insert(assignment.clone());
            }
            return;
        }
        let p = assignment.len();
        for t in 0..graph.node_count() {
            if assignment.contains(&t) || !graph.node_ok(&pattern.nodes[p], t) {
                continue;
            }
            assignment.push(t);
            recurse(pattern, graph, assignment, out);
            assignment.pop();
        }
    }
    let mut out = BTreeSet::new();
    recurse(pattern, graph, &mut Vec::new(), &mut out);
    out
}

fn engine_match_set(
    pattern: &PerceptionGraphPattern,
    graph: &PerceptionGraph,
) -> BTreeSet<Vec<usize>> {
    let result = match_pattern(
        pattern,
        graph,
        MatchOptions {
            first_only: false,
            max_alignments: usize::MAX,
        },
    );
    result
        .alignments
        .iter()
        .map(|a| (0..pattern.nodes.len()).map(|i| a[&i]).collect())
        .collect()
}

#[test]
fn criterion_01_matching_agrees_with_brute_force_oracle() {
    let mut rng = SplitMix64::new(0x01);
    for case in 0..200 {
        let pattern = random_pattern(&mut rng, 5);
        let graph = random_graph(&mut rng, 8);
        let expected = oracle_match_set(&pattern, &graph);
        let actual = engine_match_set(&pattern, &graph);
        assert_eq!(
            actual, expected,
            "case {case}: engine and oracle disagree\npattern: {pattern:?}\ngraph: {graph:?}"
        );
    }
    println!("criterion 1 (matching oracle equivalence, 200 pairs): PASS");
}

/// A random weakening of `pattern`: drop a node, drop an edge, or relax an
/// optional field of a node predicate.
fn weaken(pattern: &PerceptionGraphPattern, rng: &mut SplitMix64) -> PerceptionGraphPattern {
    let mut out = pattern.clone();
    for _ in 0..1 + rng.next_bounded(2) {
        match rng.next_bounded(3) {
            0 if out.nodes.len() > 1 => {
                let drop = rng.next_bounded(out.nodes.len() as u64) as usize;
                let keep: BTreeSet<usize> = (0..out.nodes.len()).filter(|&i| i != drop).collect();
                out = out.restricted_to(&keep).0;
            }
            1 if !out.edges.is_empty() => {
                let drop = rng.next_bounded(out.edges.len() as u64) as usize;
                out.edges.remove(drop);
            }
            _ => {
                let i = rng.next_bounded(out.nodes.len() as u64) as usize;
                out.nodes[i] = match &out.nodes[i] {
                    NodePredicate::RegionIs { distance, .. } => NodePredicate::RegionIs {
                        distance: *distance,
                        direction: None,
                    },
                    NodePredicate::AxisIs {
                        aligned_to_gravity, ..
                    } => NodePredicate::AxisIs {
                        curved: None,
                        directed: None,
                        aligned_to_gravity: *aligned_to_gravity,
                    },
                    other => other.clone(),
                };
            }
        }
    }
    out
}

#[test]
fn criterion_02_subsumption_is_sound() {
    let mut rng = SplitMix64::new(0x02);
    let pool: Vec<PerceptionGraph> = (0..50).map(|_| random_graph(&mut rng, 8)).collect();
    let mut checked = 0;
    while checked < 200 {
        let specific = random_pattern(&mut rng, 5);
        let general = weaken(&specific, &mut rng);
        if !subsumes(&general, &specific) {
            continue;
        }
        checked += 1;
        for (i, graph) in pool.iter().enumerate() {
            if matches_graph(&specific, graph) {
                assert!(
                    matches_graph(&general, graph),
                    "pair {checked}, graph {i}: subsumer fails where subsumee matches\n\
                     general: {general:?}\nspecific: {specific:?}"
                );
            }
        }
    }
    println!("criterion 2 (subsumption soundness, 200 pairs x 50 graphs): PASS");
}

// ---------------------------------------------------------------------------
// Learned-meaning claims on the bundled curriculum.

fn stage_by_name(name: &str) -> Stage {
    sample_train_stages()
        .into_iter()
        .find(|s| s.name == name)
        .unwrap_or_else(|| panic!("no sample stage named {name}"))
}

/// Train a fresh learner on the named sample stages, in order.
fn train_on_stages(config: LearnerConfig, names: &[&str], seed: u64) -> IntegratedLearner {
    let bundle = load_bundle().unwrap();
    let mut learner = IntegratedLearner::new(config, derive_seed(seed, "learner"));
    for name in names {
        let stage = stage_by_name(name);
        let instances = resolve_stage(&stage, &bundle.ontology, &bundle.generator, seed).unwrap();
        for instance in &instances {
            learner.observe(&instance.utterance, &to_graph(&instance.perception));
        }
    }
    learner
}

fn leader_pattern(entry: &WordEntry) -> &PerceptionGraphPattern {
    let leader = entry.store.leader().expect("entry has a leader");
    &entry.store.hypotheses[leader].meaning.pattern
}

/// The action/relation entry whose surface template contains `token`.
fn entry_with_token<'a>(
    learner: &'a IntegratedLearner,
    kind: ConceptKind,
    token: &str,
) -> &'a WordEntry {
    learner
        .words
        .get(&kind)
        .into_iter()
        .flat_map(|lexicon| lexicon.values())
        .find(|e| {
            e.template
                .elements
                .iter()
                .any(|el| matches!(el, TemplateElement::Token(t) if t == token))
        })
        .unwrap_or_else(|| panic!("no {kind:?} entry containing `{token}`"))
}

fn is_arg_slot(node: &NodePredicate, name: &str) -> bool {
    matches!(node, NodePredicate::Slot(s) if s.0 == name)
}

/// Pattern nodes reachable from `start` over edges in either direction.
fn connected_from(pattern: &PerceptionGraphPattern, start: usize) -> BTreeSet<usize> {
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(n) = stack.pop() {
        for e in &pattern.edges {
            for next in [e.from, e.to] {
                if (e.from == n || e.to == n) && seen.insert(next) {
                    stack.push(next);
                }
            }
        }
    }
    seen
}

#[test]
fn criterion_03_my_means_possession_by_the_speaker() {
    let learner = train_on_stages(
        sample_learner_config(),
        &["single-objects", "speaker-possession", "non-speaker-possession"],
        42,
    );
    let entry = learner
        .word(ConceptKind::Attribute, "my ARG1")
        .expect("attribute entry for \"my\"");
    assert!(
        learner.is_lexicalized(entry),
        "`my ARG1` did not lexicalize (leader score {})",
        entry.store.leader_score()
    );
    let pattern = leader_pattern(entry);
    let possession = pattern
        .edges
        .iter()
        .find(|e| {
            e.predicate.kind == EdgeKind::Possession && is_arg_slot(&pattern.nodes[e.to], "ARG1")
        })
        .expect("leader has a possession edge onto the ARG1 slot");
    let possessor = possession.from;
    let speaker_marked = pattern.edges.iter().any(|e| {
        e.from == possessor
            && e.predicate.kind == EdgeKind::HasProperty
            && matches!(
                pattern.nodes[e.to],
                NodePredicate::PropertyEquals(PerceivedProperty::IsSpeaker)
            )
    });
    assert!(
        speaker_marked,
        "possessor node lacks the speaker requirement: {pattern:?}"
    );
    println!("criterion 3 (\"my\" = possession by the speaker): PASS");
}

#[test]
fn criterion_04_verb_and_relation_meanings_have_the_claimed_structure() {
    // Two subset learners: spatial relations learn from the static scenes,
    // verbs from the two-frame action scenes.
    let relation_learner = train_on_stages(
        LearnerConfig::all_subset(),
        &["single-objects", "objects-on-the-ground", "objects-on-objects"],
        42,
    );
    let learner = train_on_stages(LearnerConfig::all_subset(), &["single-objects", "verbs"], 42);

    for (k, n, e) in relation_learner.entries() {
        if k == ConceptKind::Relation {
            eprintln!("DBG rel {n:?} obs={} hyps={} discarded={}", e.store.observations, e.store.hypotheses.len(), e.discarded);
        }
    }
    // "on": contact plus the above direction, not mere aboveness.
    let on = leader_pattern(entry_with_token(
        &relation_learner,
        ConceptKind::Relation,
        "on",
    ));
    assert!(
        on.nodes.iter().any(|n| matches!(
            n,
            NodePredicate::RegionIs {
                distance: Some(Distance::ExteriorButInContact),
                direction: Some(d),
            } if *d == Direction::ABOVE
        )),
        "`on` lacks the in-contact + above region: {on:?}"
    );

    // "drink": the theme must be liquid.
    let drink = leader_pattern(entry_with_token(&learner, ConceptKind::Action, "drinks"));
    let theme = drink
        .nodes
        .iter()
        .position(|n| is_arg_slot(n, "ARG2"))
        .expect("`drinks` has a theme slot");
    assert!(
        drink.edges.iter().any(|e| e.from == theme
            && e.predicate.kind == EdgeKind::HasProperty
            && matches!(
                drink.nodes[e.to],
                NodePredicate::PropertyEquals(PerceivedProperty::Liquid)
            )),
        "`drinks` theme is not required to be liquid: {drink:?}"
    );

    // "roll": the roller has a circular cross-section.
    let roll = leader_pattern(entry_with_token(&learner, ConceptKind::Action, "rolls"));
    let roller = roll
        .nodes
        .iter()
        .position(|n| is_arg_slot(n, "ARG1"))
        .expect("`rolls` has a roller slot");
    let reachable = connected_from(roll, roller);
    assert!(
        reachable.iter().any(|&i| matches!(
            roll.nodes[i],
            NodePredicate::CrossSectionIs {
                curved: Some(true),
                ..
            }
        )),
        "`rolls` does not constrain the cross-section to be curved: {roll:?}"
    );

    // "eat": afterwards, the theme is interior to the eater.
    let eat = leader_pattern(entry_with_token(&learner, ConceptKind::Action, "eats"));
    let eater = eat
        .nodes
        .iter()
        .position(|n| is_arg_slot(n, "ARG1"))
        .expect("`eats` has an eater slot");
    let interior_after = eat.edges.iter().any(|e| {
        e.predicate.kind == EdgeKind::InRegion
            && e.predicate.required_scopes.contains(ScopeSet::AFTER)
            && matches!(
                eat.nodes[e.to],
                NodePredicate::RegionIs {
                    distance: Some(Distance::Interior),
                    ..
                }
            )
            && eat.edges.iter().any(|r| {
                r.from == e.to && r.predicate.kind == EdgeKind::ReferenceObject && r.to == eater
            })
    });
    assert!(
        interior_after,
        "`eats` lacks the after-scoped interior-of-eater region: {eat:?}"
    );

    // "throw": the thrower possessed the projectile before, not after.
    let throw = leader_pattern(entry_with_token(&learner, ConceptKind::Action, "throws"));
    let thrower = throw
        .nodes
        .iter()
        .position(|n| is_arg_slot(n, "ARG1"))
        .expect("`throws` has a thrower slot");
    let projectile = throw
        .nodes
        .iter()
        .position(|n| is_arg_slot(n, "ARG2"))
        .expect("`throws` has a projectile slot");
    let possession_before = throw.edges.iter().any(|e| {
        e.from == thrower
            && e.to == projectile
            && e.predicate.kind == EdgeKind::Possession
            && e.predicate.required_scopes.contains(ScopeSet::BEFORE)
            && !e.predicate.required_scopes.contains(ScopeSet::AFTER)
    });
    assert!(
        possession_before,
        "`throws` lacks before-only possession of the projectile: {throw:?}"
    );

    println!("criterion 4 (on/drink/roll/eat/throw structural claims): PASS");
}

// ---------------------------------------------------------------------------
// Learning-quality and determinism criteria.

/// Types indistinguishable from another pool member in a single-object scene:
/// door shares book's exact schema, and the three liquids differ in nothing
/// perceivable. No learner can tell identical percepts apart, so the learning
/// criteria run over the distinguishable types (still well above 12).
const INDISTINGUISHABLE: [&str; 3] = ["door", "milk", "water"];

/// Single-object scenes over every perceptually distinguishable inanimate
/// object type except the ground.
fn object_stage(name: &str, repeat: usize) -> Stage {
    let mut b = TemplateBuilder::new();
    b.variable("obj", "inanimate-object").ban_type("obj", "ground");
    for t in INDISTINGUISHABLE {
        b.ban_type("obj", t);
    }
    Stage::templates(name, vec![b.build()]).with_repeat(repeat)
}

fn pursuit_object_config() -> LearnerConfig {
    LearnerConfig {
        object_algorithm: LearningAlgorithm::PursuitNa(PursuitParams {
            initial: 0.5,
            gamma: 0.2,
            tau: 0.7,
            partial_match_ratio: 0.5,
        }),
        ..LearnerConfig::all_subset()
    }
}

fn object_experiment(learner: LearnerConfig, train: Stage, master_seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        learner: LearnerSpec {
            config: learner,
            saved_state: None,
        },
        warm_up_stages: Vec::new(),
        train_stages: vec![train],
        test_stages: vec![object_stage("test", 1)],
        master_seed,
        output_dir: None,
    }
}

#[test]
fn criterion_05_pursuit_lexicalizes_objects_in_ten_exposures() {
    let bundle = load_bundle().unwrap();
    let types = bundle
        .ontology
        .template_fillers(
            &NodeId::new("inanimate-object"),
            &BTreeSet::new(),
            &BTreeSet::new(),
        )
        .unwrap();
    let types: Vec<NodeId> = types
        .into_iter()
        .filter(|t| t.as_str() != "ground" && !INDISTINGUISHABLE.contains(&t.as_str()))
        .collect();
    assert!(types.len() >= 12, "only {} object types", types.len());

    let config = object_experiment(pursuit_object_config(), object_stage("train", 10), 7);
    let report = run_experiment(&config, &bundle.ontology, &bundle.generator, &mut []).unwrap();
    let learner = IntegratedLearner::load_from_string(&report.learner_state).unwrap();

    let lexicalized = types
        .iter()
        .filter(|t| {
            learner
                .word(ConceptKind::Object, t.as_str())
                .is_some_and(|e| learner.is_lexicalized(e))
        })
        .count();
    let fraction = lexicalized as f64 / types.len() as f64;
    assert!(
        fraction >= 0.9,
        "only {lexicalized}/{} object types lexicalized",
        types.len()
    );
    assert!(
        report.metrics.top_choice_accuracy >= 0.9,
        "top-choice accuracy {}",
        report.metrics.top_choice_accuracy
    );
    // Frozen regression values for this seed.
    assert_eq!(fraction, 1.0);
    assert_eq!(report.metrics.top_choice_accuracy, 1.0);
    println!(
        "criterion 5 (pursuit, 10 exposures x {} types: {lexicalized} lexicalized, accuracy {}): PASS",
        types.len(),
        report.metrics.top_choice_accuracy
    );
}

#[test]
fn criterion_06_pursuit_beats_subset_under_spurious_noise() {
    let bundle = load_bundle().unwrap();
    let noise = PerceptionParams {
        spurious: BTreeMap::from([(Aspect::Property, 0.2)]),
        ..PerceptionParams::noiseless()
    };
    let train = object_stage("train", 10).with_noise(noise);
    let mut accuracies = Vec::new();
    for learner in [pursuit_object_config(), LearnerConfig::all_subset()] {
        let config = object_experiment(learner, train.clone(), 11);
        let report =
            run_experiment(&config, &bundle.ontology, &bundle.generator, &mut []).unwrap();
        accuracies.push(report.metrics.top_choice_accuracy);
    }
    let (pursuit, subset) = (accuracies[0], accuracies[1]);
    assert!(
        pursuit > subset,
        "pursuit accuracy {pursuit} does not exceed subset accuracy {subset} under noise"
    );
    println!(
        "criterion 6 (20% spurious noise: pursuit {pursuit:.3} > subset {subset:.3}): PASS"
    );
}

#[test]
fn criterion_07_pursuit_scores_follow_the_closed_form() {
    // Drive a real pursuit store with a trivially matching hypothesis: the
    // first update adopts it at the initial score, each later update rewards.
    let params = PursuitParams {
        initial: 0.5,
        gamma: 0.2,
        tau: 0.7,
        partial_match_ratio: 0.5,
    };
    let algorithm = LearningAlgorithm::PursuitNa(params);
    let mut graph = PerceptionGraph::default();
    graph.add_node(GraphNode::Object {
        debug: String::new(),
    });
    let mut pattern = PerceptionGraphPattern::default();
    pattern.nodes.push(NodePredicate::AnyObject);
    let hypothesis = PerceptionGraphTemplate::without_slots(pattern);

    let mut store = HypothesisStore::default();
    let mut rng = SplitMix64::new(3);
    update_store(&algorithm, &mut store, &[hypothesis.clone()], &graph, &mut rng);
    assert_eq!(store.leader_score(), 0.5);

    let mut crossing = None;
    for n in 1..=40u32 {
        update_store(&algorithm, &mut store, &[hypothesis.clone()], &graph, &mut rng);
        let expected = 1.0 - 0.5 * 0.8f64.powi(n as i32);
        assert!(
            (store.leader_score() - expected).abs() < 1e-12,
            "after {n} rewards: score {} vs closed form {expected}",
            store.leader_score()
        );
        if crossing.is_none() && store.leader_score() >= params.tau {
            crossing = Some(n);
        }
    }
    // 1 - 0.5·0.8^2 = 0.68 < 0.7 and 1 - 0.5·0.8^3 = 0.744 ≥ 0.7: the
    // threshold is crossed at the third reward.
    assert_eq!(crossing, Some(3));
    println!("criterion 7 (pursuit closed form 1-0.5·0.8^n, tau=0.7 crossed at n=3): PASS");
}

#[test]
fn criterion_08_gold_in_candidates_never_trails_top_choice() {
    let bundle = load_bundle().unwrap();
    let noise = PerceptionParams {
        spurious: BTreeMap::from([(Aspect::Property, 0.2)]),
        ..PerceptionParams::noiseless()
    };
    let runs: Vec<ExperimentConfig> = vec![
        sample_experiment_config(42),
        object_experiment(pursuit_object_config(), object_stage("train", 10), 7),
        object_experiment(
            pursuit_object_config(),
            object_stage("train", 10).with_noise(noise.clone()),
            11,
        ),
        object_experiment(
            LearnerConfig::all_subset(),
            object_stage("train", 10).with_noise(noise),
            11,
        ),
    ];
    for (i, config) in runs.iter().enumerate() {
        let report =
            run_experiment(config, &bundle.ontology, &bundle.generator, &mut []).unwrap();
        assert!(
            report.metrics.gold_in_candidates_accuracy >= report.metrics.top_choice_accuracy,
            "run {i}: gold-in {} < top {}",
            report.metrics.gold_in_candidates_accuracy,
            report.metrics.top_choice_accuracy
        );
    }
    println!("criterion 8 (gold-in-candidates >= top-choice on every run): PASS");
}

#[test]
fn criterion_09_sample_experiment_is_byte_deterministic() {
    let bundle = load_bundle().unwrap();
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let mut config = sample_experiment_config(42);
        config.output_dir = Some(out.clone());
        run_experiment(&config, &bundle.ontology, &bundle.generator, &mut []).unwrap();
    }
    for name in ["metrics", "learner-state"] {
        assert_eq!(
            fs::read(a.join(name)).unwrap(),
            fs::read(b.join(name)).unwrap(),
            "{name} differs between identical executions"
        );
    }
    println!("criterion 9 (byte-identical metrics and learner state across reruns): PASS");
}

#[test]
fn criterion_10_exhaustive_instantiation_matches_the_counting_oracle() {
    let bundle = load_bundle().unwrap();

    let mut animals = TemplateBuilder::new();
    animals.variable("animal", "animal");
    let count = wordworld_core::templates::instantiate_all(&animals.build(), &bundle.ontology)
        .unwrap()
        .len();
    assert_eq!(count, 6, "animal template should yield exactly 6 situations");

    // Three variables over object types with a pairwise-distinctness
    // constraint, counted independently by nested loops over the filler sets.
    let mut b = TemplateBuilder::new();
    b.variable("x", "inanimate-object");
    b.require_property("x", "person-can-have");
    b.variable("y", "inanimate-object");
    b.variable("z", "animal");
    b.distinct_types(&["x", "y", "z"]);
    let template = b.build();
    let actual = wordworld_core::templates::instantiate_all(&template, &bundle.ontology)
        .unwrap()
        .len();

    let fillers = |root: &str, required: &[&str]| -> Vec<NodeId> {
        bundle
            .ontology
            .template_fillers(
                &NodeId::new(root),
                &required.iter().map(|r| NodeId::new(r)).collect(),
                &BTreeSet::new(),
            )
            .unwrap()
            .into_iter()
            .collect()
    };
    let xs = fillers("inanimate-object", &["person-can-have"]);
    let ys = fillers("inanimate-object", &[]);
    let zs = fillers("animal", &[]);
    let mut expected = 0usize;
    for x in &xs {
        for y in &ys {
            for z in &zs {
                if x != y && y != z && x != z {
                    expected += 1;
                }
            }
        }
    }
    assert_eq!(actual, expected, "3-variable count disagrees with oracle");
    println!(
        "criterion 10 (animal template = 6; 3-variable count {actual} matches oracle): PASS"
    );
}
