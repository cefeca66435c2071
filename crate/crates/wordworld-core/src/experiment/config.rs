//! Experiment configuration: the learner specification, training/warm-up/test
//! stages, and the instance sources a stage resolves from.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::langgen::TokenSequence;
use crate::learners::LearnerConfig;
use crate::perception::{PerceptionParams, PerceptualRepresentation};
use crate::situation::Situation;
use crate::templates::SituationTemplate;

/// One training or test exposure: a scene, what was said about it, and what
/// the learner perceives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub situation: Situation,
    pub utterance: TokenSequence,
    pub perception: PerceptualRepresentation,
}

/// How the learner is assembled: fresh from a config, or resumed from a
/// previously saved state bundle.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LearnerSpec {
    #[serde(default)]
    pub config: LearnerConfig,
    /// Path to a saved learner-state bundle; when set, `config` is ignored
    /// and the saved learner (including its config) is resumed.
    #[serde(default)]
    pub saved_state: Option<PathBuf>,
}

/// How a template stage turns into concrete situations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum InstantiationStrategy {
    /// Every admissible instantiation, in deterministic order.
    Exhaustive,
    /// `n` draws with replacement under the stage's derived seed.
    Sample { n: usize },
}

/// Where a stage's instances come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum StageSource {
    /// Pre-resolved tuples, used verbatim.
    Explicit(Vec<Instance>),
    /// Templates instantiated at run time; each template's instances are
    /// concatenated in template order.
    Templates {
        templates: Vec<SituationTemplate>,
        strategy: InstantiationStrategy,
    },
}

/// A named block of instances inside the curriculum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    pub name: String,
    pub source: StageSource,
    /// How many times the resolved instance sequence is repeated.
    #[serde(default = "default_repeat")]
    pub repeat: usize,
    /// Noise template for perception generation. The `seed` field is ignored:
    /// each instance's noise seed is derived from the master seed, the stage
    /// name and the instance index.
    #[serde(default)]
    pub perception: PerceptionParams,
}

fn default_repeat() -> usize {
    1
}

impl Stage {
    /// A template stage with no noise and a single pass.
    pub fn templates(name: &str, templates: Vec<SituationTemplate>) -> Stage {
        Stage {
            name: name.to_owned(),
            source: StageSource::Templates {
                templates,
                strategy: InstantiationStrategy::Exhaustive,
            },
            repeat: 1,
            perception: PerceptionParams::noiseless(),
        }
    }

    pub fn with_repeat(mut self, repeat: usize) -> Stage {
        self.repeat = repeat;
        self
    }

    pub fn with_strategy(mut self, strategy: InstantiationStrategy) -> Stage {
        if let StageSource::Templates { strategy: s, .. } = &mut self.source {
            *s = strategy;
        }
        self
    }

    pub fn with_noise(mut self, perception: PerceptionParams) -> Stage {
        self.perception = perception;
        self
    }
}

/// A complete experiment: learner, curriculum, seed and output location.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub learner: LearnerSpec,
    /// Observed before training without scoring or observer events.
    #[serde(default)]
    pub warm_up_stages: Vec<Stage>,
    pub train_stages: Vec<Stage>,
    pub test_stages: Vec<Stage>,
    #[serde(default)]
    pub master_seed: u64,
    /// When set, artifacts (report, metrics, learner state, config echo) are
    /// written here after the run.
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.train_stages.is_empty() {
            return Err(Error::Invalid(
                "experiment needs at least one training stage".into(),
            ));
        }
        if self.test_stages.is_empty() {
            return Err(Error::Invalid(
                "experiment needs at least one test stage".into(),
            ));
        }
        let mut seen = std::collections::BTreeSet::new();
        for stage in self
            .warm_up_stages
            .iter()
            .chain(&self.train_stages)
            .chain(&self.test_stages)
        {
            if stage.name.is_empty() {
                return Err(Error::Invalid("stage with empty name".into()));
            }
            if !seen.insert(&stage.name) {
                return Err(Error::Invalid(format!(
                    "duplicate stage name `{}`",
                    stage.name
                )));
            }
            if stage.repeat == 0 {
                return Err(Error::Invalid(format!(
                    "stage `{}` has repeat 0",
                    stage.name
                )));
            }
        }
        Ok(())
    }
}
