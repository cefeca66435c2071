//! Core vocabulary of the learning pipeline: surface templates, concepts,
//! meaning templates (pattern + slot alignment), and the alignments between
//! concepts, token spans and perception sub-graphs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graphs::{NodePredicate, PerceptionGraphPattern, SlotId};

/// One element of a surface template: a literal token or a named argument
/// slot.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TemplateElement {
    Token(String),
    Slot(String),
}

/// An utterance shape with argument slots, e.g. `ARG1 gives ARG2 to ARG3`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SurfaceTemplate {
    pub elements: Vec<TemplateElement>,
}

impl SurfaceTemplate {
    pub fn from_tokens(tokens: &[&str]) -> SurfaceTemplate {
        SurfaceTemplate {
            elements: tokens
                .iter()
                .map(|t| {
                    if t.starts_with("ARG") {
                        TemplateElement::Slot((*t).to_owned())
                    } else {
                        TemplateElement::Token((*t).to_owned())
                    }
                })
                .collect(),
        }
    }

    pub fn slot_names(&self) -> Vec<String> {
        self.elements
            .iter()
            .filter_map(|e| match e {
                TemplateElement::Slot(s) => Some(s.clone()),
                TemplateElement::Token(_) => None,
            })
            .collect()
    }

    pub fn tokens(&self) -> Vec<String> {
        self.elements
            .iter()
            .filter_map(|e| match e {
                TemplateElement::Token(t) => Some(t.clone()),
                TemplateElement::Slot(_) => None,
            })
            .collect()
    }

    pub fn is_valid(&self) -> bool {
        if self.elements.is_empty() {
            return false;
        }
        let slots = self.slot_names();
        let unique: BTreeSet<&String> = slots.iter().collect();
        unique.len() == slots.len()
    }

    /// Substitute each slot with the provided token sequence.
    pub fn instantiate(&self, fillers: &BTreeMap<String, Vec<String>>) -> Option<Vec<String>> {
        let mut out = Vec::new();
        for e in &self.elements {
            match e {
                TemplateElement::Token(t) => out.push(t.clone()),
                TemplateElement::Slot(s) => out.extend(fillers.get(s)?.iter().cloned()),
            }
        }
        Some(out)
    }
}

impl fmt::Display for SurfaceTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self
            .elements
            .iter()
            .map(|e| match e {
                TemplateElement::Token(t) => t.as_str(),
                TemplateElement::Slot(s) => s.as_str(),
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Semantic category of a learned concept, fixing its arity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConceptKind {
    /// No argument slots.
    Object,
    /// One argument: the thing bearing the attribute.
    Attribute,
    /// Two arguments.
    Relation,
    /// One or more arguments.
    Action,
}

impl ConceptKind {
    pub fn arity_valid(&self, arity: usize) -> bool {
        match self {
            ConceptKind::Object => arity == 0,
            ConceptKind::Attribute => arity == 1,
            ConceptKind::Relation => arity == 2,
            ConceptKind::Action => arity >= 1,
        }
    }
}

/// A semantic unit linking a surface template to a meaning pattern.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Concept {
    pub id: String,
    pub kind: ConceptKind,
}

impl Concept {
    pub fn new(id: &str, kind: ConceptKind) -> Concept {
        Concept {
            id: id.to_owned(),
            kind,
        }
    }
}

/// A perception graph pattern whose slots are tied to a surface template's
/// argument slots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerceptionGraphTemplate {
    pub pattern: PerceptionGraphPattern,
    /// Pattern slot → surface-template slot name; must be a bijection over
    /// the pattern's slots and the template's slots.
    pub slot_alignment: BTreeMap<SlotId, String>,
}

impl PerceptionGraphTemplate {
    pub fn without_slots(pattern: PerceptionGraphPattern) -> PerceptionGraphTemplate {
        PerceptionGraphTemplate {
            pattern,
            slot_alignment: BTreeMap::new(),
        }
    }

    /// Check the slot bijection against a surface template.
    pub fn aligns_with(&self, template: &SurfaceTemplate) -> bool {
        let pattern_slots: BTreeSet<SlotId> = self.pattern.slots().keys().cloned().collect();
        let aligned: BTreeSet<SlotId> = self.slot_alignment.keys().cloned().collect();
        if pattern_slots != aligned {
            return false;
        }
        let targets: BTreeSet<&String> = self.slot_alignment.values().collect();
        if targets.len() != self.slot_alignment.len() {
            return false;
        }
        let template_slots: BTreeSet<String> = template.slot_names().into_iter().collect();
        targets.into_iter().cloned().collect::<BTreeSet<_>>() == template_slots
    }

    /// Count of non-slot predicates, used when comparing informativeness.
    pub fn content_size(&self) -> usize {
        self.pattern
            .nodes
            .iter()
            .filter(|n| !matches!(n, NodePredicate::Slot(_)))
            .count()
    }
}

/// Token span `[start, end)` within one utterance.
pub type TokenSpan = (usize, usize);

/// Language-concept alignment over one utterance.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LanguageAlignment {
    pub spans: BTreeMap<String, TokenSpan>,
}

impl LanguageAlignment {
    pub fn is_token_aligned(&self, index: usize) -> bool {
        self.spans
            .values()
            .any(|&(start, end)| index >= start && index < end)
    }

    /// Insert a concept span; rejected if it overlaps an existing span.
    pub fn align(&mut self, concept_id: &str, span: TokenSpan) -> bool {
        if (span.0..span.1).any(|i| self.is_token_aligned(i)) {
            return false;
        }
        self.spans.insert(concept_id.to_owned(), span);
        true
    }

    /// Concept aligned to the span containing `index`, if any.
    pub fn concept_at(&self, index: usize) -> Option<(&str, TokenSpan)> {
        self.spans
            .iter()
            .find(|(_, &(start, end))| index >= start && index < end)
            .map(|(id, &span)| (id.as_str(), span))
    }
}

/// Perception-concept alignment: concepts to node sets of one graph.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerceptionAlignment {
    pub node_sets: BTreeMap<String, BTreeSet<usize>>,
}

impl PerceptionAlignment {
    pub fn is_node_aligned(&self, node: usize) -> bool {
        self.node_sets.values().any(|s| s.contains(&node))
    }
}

/// Joint language + perception alignment built up as sub-learners run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct JointAlignment {
    pub language: LanguageAlignment,
    pub perception: PerceptionAlignment,
}
