//! Word-learning machinery: preprocessing of perception graphs, candidate
//! template/hypothesis extraction, the individual learning algorithms, and
//! the integrated learner that coordinates them per concept kind.

pub mod algorithms;
pub mod candidates;
pub mod integrated;
pub mod preprocess;
pub mod types;

pub use algorithms::{
    update_store, HypothesisStore, LearningAlgorithm, PursuitParams, ScoredHypothesis,
};
pub use candidates::{extract_candidate_templates, initial_hypotheses, DETERMINERS};
pub use integrated::{Description, IntegratedLearner, LearnerConfig, WordEntry};
pub use preprocess::{
    plural_preprocess, preprocess_recognized_objects, CollapsedGraph, Recognition,
};
pub use types::{
    Concept, ConceptKind, JointAlignment, LanguageAlignment, PerceptionAlignment,
    PerceptionGraphTemplate, SurfaceTemplate, TemplateElement, TokenSpan,
};
