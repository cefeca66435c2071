//! Experiment execution: stage resolution, the training/evaluation loop with
//! observer hooks, accuracy metrics, and the on-disk artifact bundle.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::to_graph;
use crate::langgen::{TokenSequence, UtteranceGenerator};
use crate::learners::{Description, IntegratedLearner};
use crate::ontology::Ontology;
use crate::perception::generate_perception;
use crate::persist::to_versioned_ron;
use crate::rng::derive_seed;

use super::config::{ExperimentConfig, Instance, InstantiationStrategy, Stage, StageSource};
use super::report::emit_html_report;

/// Which point of the run an observer event marks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ObserverEventKind {
    BeforeTrainInstance,
    AfterTrainInstance,
    AfterTraining,
    AfterTestInstance,
}

/// Payload handed to observers, borrowed from the running experiment.
#[derive(Debug)]
pub struct ObserverEvent<'a> {
    pub kind: ObserverEventKind,
    /// Stage name; empty for `AfterTraining`.
    pub stage: &'a str,
    /// Instance index within the stage; 0 for `AfterTraining`.
    pub index: usize,
    pub instance: Option<&'a Instance>,
    /// The learner's ranked candidate descriptions, where applicable.
    pub descriptions: &'a [Description],
    pub learner: &'a IntegratedLearner,
}

/// A hook into the experiment loop.
pub trait Observer {
    fn on_event(&mut self, event: &ObserverEvent<'_>);
}

impl<F: FnMut(&ObserverEvent<'_>)> Observer for F {
    fn on_event(&mut self, event: &ObserverEvent<'_>) {
        self(event)
    }
}

/// Which list a recorded instance came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StageRole {
    WarmUp,
    Train,
    Test,
}

/// Everything the report needs about one processed instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub stage: String,
    pub role: StageRole,
    pub index: usize,
    pub instance: Instance,
    /// Ranked candidate descriptions: after observing for training instances,
    /// at evaluation time for test instances, empty for warm-ups.
    pub candidates: Vec<Description>,
}

/// The scored outcome of one test instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub gold: TokenSequence,
    pub candidates: Vec<Description>,
}

/// Summary metrics over the test stages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub test_instances: usize,
    pub top_choice_accuracy: f64,
    pub gold_in_candidates_accuracy: f64,
}

/// Full result of a run, sufficient to re-emit every artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub instances: Vec<InstanceRecord>,
    pub outcomes: Vec<TestOutcome>,
    pub metrics: Metrics,
    /// Serialized learner state after training.
    pub learner_state: String,
}

/// Fraction of test instances whose top-ranked description token-equals the
/// gold utterance. Errors on an empty test set.
pub fn top_choice_accuracy(outcomes: &[TestOutcome]) -> Result<f64> {
    if outcomes.is_empty() {
        return Err(Error::Invalid("no test instances to score".into()));
    }
    let hits = outcomes
        .iter()
        .filter(|o| o.candidates.first().is_some_and(|(t, _)| *t == o.gold))
        .count();
    Ok(hits as f64 / outcomes.len() as f64)
}

/// Fraction of test instances whose candidate list contains the gold
/// utterance at any rank. Errors on an empty test set.
pub fn gold_in_candidates_accuracy(outcomes: &[TestOutcome]) -> Result<f64> {
    if outcomes.is_empty() {
        return Err(Error::Invalid("no test instances to score".into()));
    }
    let hits = outcomes
        .iter()
        .filter(|o| o.candidates.iter().any(|(t, _)| *t == o.gold))
        .count();
    Ok(hits as f64 / outcomes.len() as f64)
}

/// Resolve a stage to its concrete instance sequence. Template stages draw
/// their sampling seed and per-instance noise seeds from the master seed, the
/// stage name and the instance index, so adding a stage never perturbs
/// another stage's randomness.
pub fn resolve_stage(
    stage: &Stage,
    ontology: &Ontology,
    generator: &dyn UtteranceGenerator,
    master_seed: u64,
) -> Result<Vec<Instance>> {
    let base: Vec<Instance> = match &stage.source {
        StageSource::Explicit(instances) => instances.clone(),
        StageSource::Templates {
            templates,
            strategy,
        } => {
            let mut situations = Vec::new();
            for (i, template) in templates.iter().enumerate() {
                let batch = match strategy {
                    InstantiationStrategy::Exhaustive => {
                        crate::templates::instantiate_all(template, ontology)?
                    }
                    InstantiationStrategy::Sample { n } => crate::templates::instantiate_sample(
                        template,
                        ontology,
                        *n,
                        derive_seed(master_seed, &format!("sample:{}:{i}", stage.name)),
                    )?,
                };
                situations.extend(batch);
            }
            let mut instances = Vec::new();
            for (index, situation) in std::iter::repeat(situations)
                .take(stage.repeat)
                .flatten()
                .enumerate()
            {
                let utterance = generator.generate(&situation, ontology)?;
                let mut params = stage.perception.clone();
                params.seed = derive_seed(master_seed, &format!("noise:{}:{index}", stage.name));
                let perception = generate_perception(&situation, ontology, &params)?;
                instances.push(Instance {
                    situation,
                    utterance,
                    perception,
                });
            }
            return Ok(instances);
        }
    };
    Ok(std::iter::repeat(base)
        .take(stage.repeat)
        .flatten()
        .collect())
}

fn fire(observers: &mut [&mut dyn Observer], event: ObserverEvent<'_>) {
    for observer in observers.iter_mut() {
        observer.on_event(&event);
    }
}

/// Run an experiment end to end: resolve every stage up front, train through
/// warm-up and training stages, evaluate the test stages, fire observer
/// events in curriculum order, and write artifacts if an output directory is
/// configured. Deterministic under the master seed.
pub fn run_experiment(
    config: &ExperimentConfig,
    ontology: &Ontology,
    generator: &dyn UtteranceGenerator,
    observers: &mut [&mut dyn Observer],
) -> Result<ExperimentReport> {
    config.validate()?;

    // Resolve everything before touching the learner, so an unresolvable
    // stage fails before any training happens.
    let resolve_all = |stages: &[Stage]| -> Result<Vec<(String, Vec<Instance>)>> {
        stages
            .iter()
            .map(|s| {
                Ok((
                    s.name.clone(),
                    resolve_stage(s, ontology, generator, config.master_seed)?,
                ))
            })
            .collect()
    };
    let warm_up = resolve_all(&config.warm_up_stages)?;
    let train = resolve_all(&config.train_stages)?;
    let test = resolve_all(&config.test_stages)?;

    let mut learner = match &config.learner.saved_state {
        Some(path) => IntegratedLearner::load_from_string(&fs::read_to_string(path)?)?,
        None => IntegratedLearner::new(
            config.learner.config.clone(),
            derive_seed(config.master_seed, "learner"),
        ),
    };

    let mut records = Vec::new();

    for (stage, instances) in &warm_up {
        for (index, instance) in instances.iter().enumerate() {
            let graph = to_graph(&instance.perception);
            learner.observe(&instance.utterance, &graph);
            records.push(InstanceRecord {
                stage: stage.clone(),
                role: StageRole::WarmUp,
                index,
                instance: instance.clone(),
                candidates: Vec::new(),
            });
        }
    }

    for (stage, instances) in &train {
        for (index, instance) in instances.iter().enumerate() {
            fire(
                observers,
                ObserverEvent {
                    kind: ObserverEventKind::BeforeTrainInstance,
                    stage,
                    index,
                    instance: Some(instance),
                    descriptions: &[],
                    learner: &learner,
                },
            );
            let graph = to_graph(&instance.perception);
            learner.observe(&instance.utterance, &graph);
            let candidates = learner.describe(&graph);
            fire(
                observers,
                ObserverEvent {
                    kind: ObserverEventKind::AfterTrainInstance,
                    stage,
                    index,
                    instance: Some(instance),
                    descriptions: &candidates,
                    learner: &learner,
                },
            );
            records.push(InstanceRecord {
                stage: stage.clone(),
                role: StageRole::Train,
                index,
                instance: instance.clone(),
                candidates,
            });
        }
    }

    fire(
        observers,
        ObserverEvent {
            kind: ObserverEventKind::AfterTraining,
            stage: "",
            index: 0,
            instance: None,
            descriptions: &[],
            learner: &learner,
        },
    );

    let mut outcomes = Vec::new();
    for (stage, instances) in &test {
        for (index, instance) in instances.iter().enumerate() {
            let graph = to_graph(&instance.perception);
            let candidates = learner.describe(&graph);
            fire(
                observers,
                ObserverEvent {
                    kind: ObserverEventKind::AfterTestInstance,
                    stage,
                    index,
                    instance: Some(instance),
                    descriptions: &candidates,
                    learner: &learner,
                },
            );
            records.push(InstanceRecord {
                stage: stage.clone(),
                role: StageRole::Test,
                index,
                instance: instance.clone(),
                candidates: candidates.clone(),
            });
            outcomes.push(TestOutcome {
                gold: instance.utterance.clone(),
                candidates,
            });
        }
    }

    let metrics = Metrics {
        test_instances: outcomes.len(),
        top_choice_accuracy: top_choice_accuracy(&outcomes)?,
        gold_in_candidates_accuracy: gold_in_candidates_accuracy(&outcomes)?,
    };

    let report = ExperimentReport {
        config: config.clone(),
        instances: records,
        outcomes,
        metrics,
        learner_state: learner.save_to_string()?,
    };

    if let Some(dir) = &config.output_dir {
        write_artifacts(&report, dir)?;
    }
    Ok(report)
}

/// The config echo written alongside the other artifacts. This is the only
/// artifact carrying a timestamp, so every other file is byte-stable across
/// reruns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub written_at_unix_seconds: u64,
    pub config: ExperimentConfig,
}

/// Write the artifact bundle: `report.html`, `metrics`, `learner-state`,
/// `config-echo`.
pub fn write_artifacts(report: &ExperimentReport, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    emit_html_report(report, &dir.join("report.html"))?;
    fs::write(dir.join("metrics"), to_versioned_ron(&report.metrics)?)?;
    fs::write(dir.join("learner-state"), &report.learner_state)?;
    let echo = ConfigEcho {
        written_at_unix_seconds: std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        config: report.config.clone(),
    };
    fs::write(dir.join("config-echo"), to_versioned_ron(&echo)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::cell::RefCell;

    use crate::assets::load_bundle;
    use crate::learners::LearnerConfig;
    use crate::templates::TemplateBuilder;

    use super::super::config::LearnerSpec;
    use super::*;

    fn outcome(gold: &[&str], candidates: &[(&[&str], f64)]) -> TestOutcome {
        TestOutcome {
            gold: gold.iter().map(|t| (*t).to_owned()).collect(),
            candidates: candidates
                .iter()
                .map(|(tokens, score)| (tokens.iter().map(|t| (*t).to_owned()).collect(), *score))
                .collect(),
        }
    }

    #[test]
    fn accuracy_on_empty_test_set_is_an_error() {
        assert!(top_choice_accuracy(&[]).is_err());
        assert!(gold_in_candidates_accuracy(&[]).is_err());
    }

    #[test]
    fn top_choice_counts_exact_token_matches() {
        let gold: &[&str] = &["a", "ball"];
        let outcomes = vec![
            outcome(gold, &[(gold, 0.9)]),
            outcome(gold, &[(&["a", "cup"], 0.9), (gold, 0.5)]),
            outcome(gold, &[(gold, 0.9)]),
            outcome(gold, &[(gold, 0.9)]),
        ];
        assert_eq!(top_choice_accuracy(&outcomes).unwrap(), 0.75);
        // Gold buried at a lower rank still counts for membership.
        assert_eq!(gold_in_candidates_accuracy(&outcomes).unwrap(), 1.0);
    }

    #[test]
    fn gold_in_candidates_is_at_least_top_choice() {
        let gold: &[&str] = &["a", "ball"];
        let outcomes = vec![
            outcome(gold, &[(&["a", "cup"], 0.9)]),
            outcome(gold, &[(gold, 0.9)]),
            outcome(gold, &[]),
        ];
        assert!(
            gold_in_candidates_accuracy(&outcomes).unwrap()
                >= top_choice_accuracy(&outcomes).unwrap()
        );
    }

    fn ball_stage(name: &str, repeat: usize) -> Stage {
        let mut b = TemplateBuilder::new();
        b.constant("ball_0", "ball");
        Stage::templates(name, vec![b.build()]).with_repeat(repeat)
    }

    fn tiny_config() -> ExperimentConfig {
        ExperimentConfig {
            learner: LearnerSpec {
                config: LearnerConfig::all_subset(),
                saved_state: None,
            },
            warm_up_stages: vec![ball_stage("warm", 1)],
            train_stages: vec![ball_stage("train", 3)],
            test_stages: vec![ball_stage("test", 1)],
            master_seed: 7,
            output_dir: None,
        }
    }

    #[test]
    fn config_without_test_stages_is_rejected() {
        let mut config = tiny_config();
        config.test_stages.clear();
        assert!(config.validate().is_err());
        let bundle = load_bundle().unwrap();
        assert!(run_experiment(&config, &bundle.ontology, &bundle.generator, &mut []).is_err());
    }

    #[test]
    fn tiny_experiment_learns_and_scores_a_ball() {
        let bundle = load_bundle().unwrap();
        let report =
            run_experiment(&tiny_config(), &bundle.ontology, &bundle.generator, &mut []).unwrap();
        assert_eq!(report.metrics.test_instances, 1);
        assert_eq!(report.metrics.top_choice_accuracy, 1.0);
        assert_eq!(report.metrics.gold_in_candidates_accuracy, 1.0);
        // 1 warm-up + 3 train + 1 test records; warm-ups carry no candidates.
        assert_eq!(report.instances.len(), 5);
        assert_eq!(report.instances[0].role, StageRole::WarmUp);
        assert!(report.instances[0].candidates.is_empty());
    }

    #[test]
    fn observer_events_fire_in_curriculum_order() {
        let bundle = load_bundle().unwrap();
        let log: RefCell<Vec<(ObserverEventKind, String, usize)>> = RefCell::new(Vec::new());
        let mut observer = |event: &ObserverEvent<'_>| {
            log.borrow_mut()
                .push((event.kind, event.stage.to_owned(), event.index));
        };
        run_experiment(
            &tiny_config(),
            &bundle.ontology,
            &bundle.generator,
            &mut [&mut observer],
        )
        .unwrap();
        let log = log.into_inner();
        use ObserverEventKind::*;
        let kinds: Vec<ObserverEventKind> = log.iter().map(|(k, _, _)| *k).collect();
        // Warm-ups fire no events; each train instance fires before/after in
        // order; training end fires exactly once; then the test instances.
        assert_eq!(
            kinds,
            vec![
                BeforeTrainInstance,
                AfterTrainInstance,
                BeforeTrainInstance,
                AfterTrainInstance,
                BeforeTrainInstance,
                AfterTrainInstance,
                AfterTraining,
                AfterTestInstance,
            ]
        );
        assert_eq!(log[0].1, "train");
        assert_eq!(log[4].2, 2);
        assert_eq!(log[7].1, "test");
    }

    #[test]
    fn same_seed_gives_identical_results() {
        let bundle = load_bundle().unwrap();
        let a =
            run_experiment(&tiny_config(), &bundle.ontology, &bundle.generator, &mut []).unwrap();
        let b =
            run_experiment(&tiny_config(), &bundle.ontology, &bundle.generator, &mut []).unwrap();
        assert_eq!(a.metrics, b.metrics);
        assert_eq!(a.learner_state, b.learner_state);
    }

    #[test]
    fn artifacts_are_stable_except_for_the_config_echo() {
        let bundle = load_bundle().unwrap();
        let report =
            run_experiment(&tiny_config(), &bundle.ontology, &bundle.generator, &mut []).unwrap();
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        write_artifacts(&report, dir_a.path()).unwrap();
        write_artifacts(&report, dir_b.path()).unwrap();
        for name in ["report.html", "metrics", "learner-state"] {
            let a = fs::read(dir_a.path().join(name)).unwrap();
            let b = fs::read(dir_b.path().join(name)).unwrap();
            assert_eq!(a, b, "artifact {name} differs between runs");
        }
        // The echo must still round-trip and carry the configuration.
        let echo: ConfigEcho = crate::persist::from_versioned_ron(
            &fs::read_to_string(dir_a.path().join("config-echo")).unwrap(),
        )
        .unwrap();
        assert_eq!(echo.config, report.config);
    }

    #[test]
    fn noise_seeds_differ_across_instances_of_a_stage() {
        use crate::perception::{Aspect, PerceptionParams};
        let bundle = load_bundle().unwrap();
        let mut params = PerceptionParams::noiseless();
        params.spurious.insert(Aspect::Property, 0.5);
        let stage = ball_stage("noisy", 8).with_noise(params);
        let instances = resolve_stage(&stage, &bundle.ontology, &bundle.generator, 1).unwrap();
        assert_eq!(instances.len(), 8);
        // With per-instance seeds the corrupted perceptions are not all equal.
        assert!(instances
            .iter()
            .any(|i| i.perception != instances[0].perception));
    }
}
