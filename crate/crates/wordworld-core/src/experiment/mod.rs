//! Experiment orchestration: declarative configurations of learner, training
//! and test stages, a deterministic run loop with observer hooks, accuracy
//! metrics, artifact output (HTML report, metrics file, learner state, config
//! echo), and the bundled fourteen-section sample curriculum.

pub mod config;
pub mod curriculum;
pub mod report;
pub mod run;

pub use config::{
    ExperimentConfig, Instance, InstantiationStrategy, LearnerSpec, Stage, StageSource,
};
pub use curriculum::{
    build_sample_curriculum, sample_experiment_config, sample_learner_config, sample_train_stages,
    verb_templates,
};
pub use report::{emit_html_report, html_report};
pub use run::{
    gold_in_candidates_accuracy, resolve_stage, run_experiment, top_choice_accuracy,
    write_artifacts, ConfigEcho, ExperimentReport, InstanceRecord, Metrics, Observer,
    ObserverEvent, ObserverEventKind, StageRole, TestOutcome,
};
