//! Simulated grounded word learning: a virtual world generates paired
//! utterances and perceptual representations, and pluggable learning
//! algorithms acquire word meanings from them.
//!
//! The pipeline runs in stages:
//!
//! 1. [`ontology`] defines the world's kinds, structural schemata and action
//!    descriptions.
//! 2. [`situation`] and [`templates`] build concrete scenes from curriculum
//!    templates.
//! 3. [`langgen`] renders each scene as an English utterance; [`perception`]
//!    renders it as the learner's sensory primitives.
//! 4. [`graphs`] turns perception into typed graphs and provides pattern
//!    matching, generalization and intersection over them.
//! 5. [`learners`] implements the word-learning algorithms; [`experiment`]
//!    drives train/test schedules, metrics and reports.

pub mod assets;
pub mod error;
pub mod experiment;
pub mod graphs;
pub mod langgen;
pub mod learners;
pub mod ontology;
pub mod perception;
pub mod persist;
pub mod rng;
pub mod situation;
pub mod spatial;
pub mod templates;

pub use error::{Error, Result};
