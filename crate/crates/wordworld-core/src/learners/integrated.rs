//! The integrated learner: coordinates per-kind sub-learners over a shared
//! lexicon, runs recognition and graph preprocessing before each exposure,
//! and turns recognized concepts back into ranked English descriptions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::graphs::{
    match_pattern, EdgeKind, GraphNode, MatchOptions, NodePredicate, PerceptionGraph,
    PerceptionGraphPattern,
};
use crate::persist::{from_versioned_ron, to_versioned_ron};
use crate::rng::SplitMix64;
use crate::Result;

use super::algorithms::{update_store, HypothesisStore, LearningAlgorithm, PursuitParams};
use super::candidates::{extract_candidate_templates, initial_hypotheses, DETERMINERS};
use super::preprocess::{plural_preprocess, preprocess_recognized_objects, Recognition};
use super::types::{ConceptKind, JointAlignment, SurfaceTemplate, TemplateElement};

/// Which algorithm each sub-learner runs, plus description-time knobs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnerConfig {
    pub object_algorithm: LearningAlgorithm,
    pub attribute_algorithm: LearningAlgorithm,
    pub relation_algorithm: LearningAlgorithm,
    pub action_algorithm: LearningAlgorithm,
    /// Describe objects with relation phrases ("a ball on a table") in
    /// addition to bare noun phrases.
    pub describe_relations: bool,
    /// Maximum number of attribute decorations per noun phrase.
    pub max_attribute_decorations: usize,
    /// Minimum evidence count before an unknown object is described by the
    /// action role it fills.
    pub functional_threshold: u64,
}

impl Default for LearnerConfig {
    fn default() -> Self {
        LearnerConfig {
            object_algorithm: LearningAlgorithm::PursuitNa(PursuitParams::default()),
            attribute_algorithm: LearningAlgorithm::PursuitNa(PursuitParams::default()),
            relation_algorithm: LearningAlgorithm::PursuitNa(PursuitParams::default()),
            action_algorithm: LearningAlgorithm::Subset,
            describe_relations: true,
            max_attribute_decorations: 3,
            functional_threshold: 3,
        }
    }
}

impl LearnerConfig {
    /// Run every sub-learner with the subset algorithm; convenient for tests
    /// and noise-free curricula, since words lexicalize on first exposure.
    pub fn all_subset() -> Self {
        LearnerConfig {
            object_algorithm: LearningAlgorithm::Subset,
            attribute_algorithm: LearningAlgorithm::Subset,
            relation_algorithm: LearningAlgorithm::Subset,
            action_algorithm: LearningAlgorithm::Subset,
            ..Default::default()
        }
    }

    pub fn algorithm_for(&self, kind: ConceptKind) -> &LearningAlgorithm {
        match kind {
            ConceptKind::Object => &self.object_algorithm,
            ConceptKind::Attribute => &self.attribute_algorithm,
            ConceptKind::Relation => &self.relation_algorithm,
            ConceptKind::Action => &self.action_algorithm,
        }
    }
}

/// One lexicon entry: a surface template with its hypothesis store.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordEntry {
    pub template: SurfaceTemplate,
    pub kind: ConceptKind,
    pub store: HypothesisStore,
    /// Set when the store collapsed to nothing; the word is never revived.
    pub discarded: bool,
}

/// A ranked description candidate.
pub type Description = (Vec<String>, f64);

/// The integrated word learner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegratedLearner {
    pub config: LearnerConfig,
    /// Per-kind lexicons keyed by the template's display form (e.g. "ball",
    /// "my ARG1"). The same surface can name entries of different kinds —
    /// "ARG1 drinks ARG2" is both a relation and an action candidate — so
    /// each sub-learner owns a namespace.
    pub words: BTreeMap<ConceptKind, BTreeMap<String, WordEntry>>,
    /// Per object concept: how often each determiner token ("" for none)
    /// preceded its span in training utterances.
    pub determiners: BTreeMap<String, BTreeMap<String, u64>>,
    /// Per (action concept, slot): how often each object concept filled it.
    pub functional: BTreeMap<(String, String), BTreeMap<String, u64>>,
    rng: SplitMix64,
}

const SUB_LEARNER_ORDER: [ConceptKind; 4] = [
    ConceptKind::Object,
    ConceptKind::Attribute,
    ConceptKind::Relation,
    ConceptKind::Action,
];

/// The pattern node acting as the root of an object meaning: an object-like
/// predicate with no incoming ownership edge.
fn pattern_root(pattern: &PerceptionGraphPattern) -> Option<usize> {
    (0..pattern.nodes.len()).find(|&i| {
        matches!(
            pattern.nodes[i],
            NodePredicate::AnyObject | NodePredicate::MatchedConceptIs(_) | NodePredicate::Slot(_)
        ) && !pattern
            .in_edges(i)
            .any(|e| PerceptionGraph::is_ownership_edge(e.predicate.kind))
    })
}

fn is_determiner(token: &str) -> bool {
    DETERMINERS.contains(&token)
}

/// Whether an attribute meaning suppresses the determiner of the noun phrase
/// it decorates (possessives and counts do).
fn suppresses_determiner(pattern: &PerceptionGraphPattern) -> bool {
    pattern
        .edges
        .iter()
        .any(|e| matches!(e.predicate.kind, EdgeKind::Possession | EdgeKind::HasCount))
        || pattern
            .nodes
            .iter()
            .any(|n| matches!(n, NodePredicate::CountIs(_)))
}

/// One attribute found to hold of a described object.
#[derive(Debug, Clone)]
struct AttributeUse {
    /// Literal template tokens (single token in practice).
    tokens: Vec<String>,
    /// Whether the token precedes ("red ARG1") or follows ("ARG1 s") the head.
    prefix: bool,
    score: f64,
    suppresses_determiner: bool,
}

/// A realized noun phrase before determiner placement.
#[derive(Debug, Clone)]
struct NounPhrase {
    tokens: Vec<String>,
    determiner: Option<String>,
    score: f64,
}

impl NounPhrase {
    fn with_determiner(&self) -> Vec<String> {
        match &self.determiner {
            Some(d) => {
                let mut out = vec![d.clone()];
                out.extend(self.tokens.iter().cloned());
                out
            }
            None => self.tokens.clone(),
        }
    }
}

impl IntegratedLearner {
    pub fn new(config: LearnerConfig, seed: u64) -> IntegratedLearner {
        IntegratedLearner {
            config,
            words: BTreeMap::new(),
            determiners: BTreeMap::new(),
            functional: BTreeMap::new(),
            rng: SplitMix64::new(seed),
        }
    }

    /// Serialize the complete learner state.
    pub fn save_to_string(&self) -> Result<String> {
        to_versioned_ron(self)
    }

    /// Load a learner state saved by [`save_to_string`]; rejects unknown
    /// format versions.
    ///
    /// [`save_to_string`]: IntegratedLearner::save_to_string
    pub fn load_from_string(text: &str) -> Result<IntegratedLearner> {
        from_versioned_ron(text)
    }

    /// Whether an entry's leading hypothesis has crossed its algorithm's
    /// lexicalization threshold.
    pub fn is_lexicalized(&self, entry: &WordEntry) -> bool {
        !entry.discarded
            && !entry.store.is_empty()
            && entry.store.leader_score()
                >= self
                    .config
                    .algorithm_for(entry.kind)
                    .lexicalization_threshold()
    }

    /// One entry from the given kind's lexicon.
    pub fn word(&self, kind: ConceptKind, name: &str) -> Option<&WordEntry> {
        self.words.get(&kind).and_then(|lexicon| lexicon.get(name))
    }

    /// Every entry across the per-kind lexicons, in kind-then-name order.
    pub fn entries(&self) -> impl Iterator<Item = (ConceptKind, &String, &WordEntry)> {
        self.words
            .iter()
            .flat_map(|(kind, lexicon)| lexicon.iter().map(move |(name, e)| (*kind, name, e)))
    }

    /// Lexicalized entries of one kind, in lexicon order.
    pub fn lexicalized_entries(&self, kind: ConceptKind) -> Vec<(&String, &WordEntry)> {
        self.words
            .get(&kind)
            .into_iter()
            .flatten()
            .filter(|(_, e)| self.is_lexicalized(e))
            .collect()
    }

    /// Find all occurrences of lexicalized object meanings in a raw graph.
    pub fn recognize(&self, graph: &PerceptionGraph) -> Vec<Recognition> {
        let mut out = Vec::new();
        for (key, entry) in self.lexicalized_entries(ConceptKind::Object) {
            let Some(leader) = entry.store.leader() else {
                continue;
            };
            let pattern = &entry.store.hypotheses[leader].meaning.pattern;
            let Some(root) = pattern_root(pattern) else {
                continue;
            };
            let result = match_pattern(
                pattern,
                graph,
                MatchOptions {
                    first_only: false,
                    ..Default::default()
                },
            );
            for alignment in &result.alignments {
                out.push(Recognition {
                    concept: key.clone(),
                    root: alignment[&root],
                    matched: alignment.values().copied().collect(),
                });
            }
        }
        out
    }

    /// Recognize, collapse, and attach plural counts; the graph every
    /// sub-learner actually sees.
    fn preprocess(&self, graph: &PerceptionGraph) -> (PerceptionGraph, Vec<Recognition>) {
        let collapsed = preprocess_recognized_objects(graph, &self.recognize(graph));
        let g = plural_preprocess(&collapsed.graph);
        (g, collapsed.recognitions)
    }

    /// One training exposure: an utterance paired with its perception graph.
    pub fn observe(&mut self, tokens: &[String], graph: &PerceptionGraph) {
        // Only collapse recognitions whose word the utterance actually uses.
        // A lexicalized meaning can be over-general (it may also match objects
        // of another kind); if its word was not said, treating the node as
        // that concept would hide the node from the word that was said.
        let mut uttered = self.recognize(graph);
        uttered.retain(|r| {
            let entry_tokens = self.words[&ConceptKind::Object][&r.concept].template.tokens();
            find_free_span(tokens, &entry_tokens, &JointAlignment::default()).is_some()
        });
        let collapsed = preprocess_recognized_objects(graph, &uttered);
        let g = plural_preprocess(&collapsed.graph);
        let recognitions = collapsed.recognitions;

        // Seed the joint alignment from the recognitions, aligning each to
        // the first free occurrence of its tokens in the utterance.
        let mut alignment = JointAlignment::default();
        for (i, r) in recognitions.iter().enumerate() {
            let key = format!("{}#{i}", r.concept);
            alignment
                .perception
                .node_sets
                .insert(key.clone(), [r.root].into());
            let entry_tokens = self.words[&ConceptKind::Object][&r.concept].template.tokens();
            if let Some(start) = find_free_span(tokens, &entry_tokens, &alignment) {
                let span = (start, start + entry_tokens.len());
                alignment.language.align(&key, span);
                // Count the determiner habit: a clear determiner before the
                // span, or a clear absence when the span opens the utterance.
                // Other preceding tokens (adjectives, possessives) say
                // nothing about determiner use and are skipped.
                let determiner = if span.0 == 0 {
                    Some(String::new())
                } else if is_determiner(&tokens[span.0 - 1]) {
                    Some(tokens[span.0 - 1].clone())
                } else {
                    None
                };
                if let Some(determiner) = determiner {
                    *self
                        .determiners
                        .entry(r.concept.clone())
                        .or_default()
                        .entry(determiner)
                        .or_insert(0) += 1;
                }
            }
        }

        for kind in SUB_LEARNER_ORDER {
            let algorithm = *self.config.algorithm_for(kind);
            for template in extract_candidate_templates(kind, tokens, &alignment) {
                let key = template.to_string();
                let entry = self
                    .words
                    .entry(kind)
                    .or_default()
                    .entry(key)
                    .or_insert_with(|| WordEntry {
                        template: template.clone(),
                        kind,
                        store: HypothesisStore::default(),
                        discarded: false,
                    });
                if entry.discarded {
                    continue;
                }
                let new_hypotheses: Vec<_> = initial_hypotheses(kind, &template, &g, &alignment)
                    .into_iter()
                    .filter(|h| h.aligns_with(&template))
                    .collect();
                if !update_store(
                    &algorithm,
                    &mut entry.store,
                    &new_hypotheses,
                    &g,
                    &mut self.rng,
                ) {
                    entry.discarded = true;
                }
            }
        }

        self.count_functional_roles(&g);
    }

    /// Track which object concepts fill which roles of lexicalized actions.
    fn count_functional_roles(&mut self, g: &PerceptionGraph) {
        let mut increments: Vec<((String, String), String)> = Vec::new();
        for (key, entry) in self.lexicalized_entries(ConceptKind::Action) {
            let Some(leader) = entry.store.leader() else {
                continue;
            };
            let pattern = &entry.store.hypotheses[leader].meaning.pattern;
            let result = match_pattern(pattern, g, MatchOptions::default());
            let Some(alignment) = result.first() else {
                continue;
            };
            for (slot, node) in pattern.slots() {
                if let GraphNode::MatchedConcept { concept, .. } = &g.nodes[alignment[&node]] {
                    increments.push(((key.clone(), slot.to_string()), concept.clone()));
                }
            }
        }
        for (key, concept) in increments {
            *self
                .functional
                .entry(key)
                .or_default()
                .entry(concept)
                .or_insert(0) += 1;
        }
    }

    /// The object concept most often seen filling an action slot, if its
    /// evidence count reaches the threshold and no other concept ties it.
    pub fn functional_object_recognize(&self, action: &str, slot: &str) -> Option<&str> {
        let counts = self.functional.get(&(action.to_owned(), slot.to_owned()))?;
        let best = counts.iter().max_by_key(|(_, &c)| c)?;
        if *best.1 < self.config.functional_threshold {
            return None;
        }
        let tied = counts.values().filter(|&&c| c == *best.1).count();
        (tied == 1).then(|| best.0.as_str())
    }

    /// The preferred determiner for an object concept, from training counts.
    fn determiner_for(&self, concept: &str) -> Option<String> {
        let counts = self.determiners.get(concept)?;
        let best = counts
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))?;
        (!best.0.is_empty()).then(|| best.0.clone())
    }

    /// Attributes that hold of `node` in the collapsed graph.
    fn attributes_of(&self, g: &PerceptionGraph, node: usize) -> Vec<AttributeUse> {
        let mut out = Vec::new();
        for (_, entry) in self.lexicalized_entries(ConceptKind::Attribute) {
            let Some(leader) = entry.store.leader() else {
                continue;
            };
            let hypothesis = &entry.store.hypotheses[leader];
            let pattern = &hypothesis.meaning.pattern;
            let Some((_, &slot_node)) = pattern.slots().iter().next().map(|(s, n)| (s, n)) else {
                continue;
            };
            let result = match_pattern(
                pattern,
                g,
                MatchOptions {
                    first_only: false,
                    ..Default::default()
                },
            );
            if result.alignments.iter().any(|a| a[&slot_node] == node) {
                let prefix = matches!(
                    entry.template.elements.first(),
                    Some(TemplateElement::Token(_))
                );
                out.push(AttributeUse {
                    tokens: entry.template.tokens(),
                    prefix,
                    score: hypothesis.score,
                    suppresses_determiner: suppresses_determiner(pattern),
                });
            }
        }
        out
    }

    /// All noun-phrase realizations of a recognized object: the bare head
    /// plus every attribute subset up to the configured size.
    fn noun_phrases(&self, g: &PerceptionGraph, concept: &str, node: usize) -> Vec<NounPhrase> {
        let Some(entry) = self.word(ConceptKind::Object, concept) else {
            return Vec::new();
        };
        if !self.is_lexicalized(entry) {
            return Vec::new();
        }
        let head = entry.template.tokens();
        let head_score = entry.store.leader_score().max(f64::MIN_POSITIVE);
        let attributes = self.attributes_of(g, node);
        let determiner = self.determiner_for(concept);
        let mut out = Vec::new();
        for subset in subsets_up_to(attributes.len(), self.config.max_attribute_decorations) {
            let mut chosen: Vec<&AttributeUse> = subset.iter().map(|&i| &attributes[i]).collect();
            chosen.sort_by(|a, b| a.tokens.cmp(&b.tokens));
            let mut tokens: Vec<String> = Vec::new();
            for a in chosen.iter().filter(|a| a.prefix) {
                tokens.extend(a.tokens.iter().cloned());
            }
            tokens.extend(head.iter().cloned());
            for a in chosen.iter().filter(|a| !a.prefix) {
                tokens.extend(a.tokens.iter().cloned());
            }
            let suppressed = chosen.iter().any(|a| a.suppresses_determiner);
            let score = chosen
                .iter()
                .fold(head_score, |acc, a| acc * a.score.max(f64::MIN_POSITIVE));
            out.push(NounPhrase {
                tokens,
                determiner: if suppressed { None } else { determiner.clone() },
                score,
            });
        }
        out
    }

    /// Instantiate a slotted template with noun phrases. A slot directly
    /// preceded by a determiner token in the template takes the bare phrase;
    /// otherwise the phrase brings its own determiner.
    fn instantiate_phrases(
        template: &SurfaceTemplate,
        fillers: &BTreeMap<String, &NounPhrase>,
        base_score: f64,
    ) -> Option<Description> {
        let mut tokens = Vec::new();
        let mut score = base_score;
        let mut previous: Option<&TemplateElement> = None;
        for element in &template.elements {
            match element {
                TemplateElement::Token(t) => tokens.push(t.clone()),
                TemplateElement::Slot(name) => {
                    let np = fillers.get(name)?;
                    let after_determiner = matches!(
                        previous,
                        Some(TemplateElement::Token(t)) if is_determiner(t)
                    );
                    if after_determiner {
                        tokens.extend(np.tokens.iter().cloned());
                    } else {
                        tokens.extend(np.with_determiner());
                    }
                    score *= np.score;
                }
            }
            previous = Some(element);
        }
        Some((tokens, score))
    }

    /// Describe a perception graph: ranked candidate utterances with scores.
    /// Deterministic for a fixed learner state and graph.
    pub fn describe(&self, graph: &PerceptionGraph) -> Vec<Description> {
        let (g, recognitions) = self.preprocess(graph);
        let mut candidates: Vec<Description> = Vec::new();

        // Base noun phrases per recognized object, reused for relations and
        // actions below.
        let mut base_np: BTreeMap<usize, NounPhrase> = BTreeMap::new();
        let mut all_nps: BTreeMap<usize, Vec<NounPhrase>> = BTreeMap::new();
        for r in &recognitions {
            let nps = self.noun_phrases(&g, &r.concept, r.root);
            for np in &nps {
                candidates.push((np.with_determiner(), np.score));
            }
            if let Some(bare) = nps.first() {
                base_np.insert(r.root, bare.clone());
            }
            all_nps.insert(r.root, nps);
        }

        if self.config.describe_relations {
            for (_, entry) in self.lexicalized_entries(ConceptKind::Relation) {
                let Some(leader) = entry.store.leader() else {
                    continue;
                };
                let hypothesis = &entry.store.hypotheses[leader];
                let slots = hypothesis.meaning.pattern.slots();
                let result = match_pattern(
                    &hypothesis.meaning.pattern,
                    &g,
                    MatchOptions {
                        first_only: false,
                        ..Default::default()
                    },
                );
                for alignment in &result.alignments {
                    let fillers: Option<BTreeMap<String, &NounPhrase>> = slots
                        .iter()
                        .map(|(slot, &node)| {
                            base_np
                                .get(&alignment[&node])
                                .map(|np| (slot.to_string(), np))
                        })
                        .collect();
                    if let Some(fillers) = fillers {
                        if let Some(candidate) =
                            Self::instantiate_phrases(&entry.template, &fillers, hypothesis.score)
                        {
                            candidates.push(candidate);
                        }
                    }
                }
            }
        }

        for (key, entry) in self.lexicalized_entries(ConceptKind::Action) {
            let Some(leader) = entry.store.leader() else {
                continue;
            };
            let hypothesis = &entry.store.hypotheses[leader];
            let slots = hypothesis.meaning.pattern.slots();
            let result = match_pattern(
                &hypothesis.meaning.pattern,
                &g,
                MatchOptions {
                    first_only: false,
                    ..Default::default()
                },
            );
            for alignment in &result.alignments {
                // Realization options per slot: recognized objects offer all
                // their noun phrases; unknown objects fall back to the
                // functional-role lexicon.
                let mut options: BTreeMap<String, Vec<NounPhrase>> = BTreeMap::new();
                let mut viable = true;
                for (slot, &node) in &slots {
                    let target = alignment[&node];
                    let nps = match all_nps.get(&target) {
                        Some(nps) if !nps.is_empty() => nps.clone(),
                        _ => match self
                            .functional_object_recognize(key, &slot.to_string())
                            .and_then(|c| self.word(ConceptKind::Object, c))
                        {
                            Some(functional_entry) => vec![NounPhrase {
                                tokens: functional_entry.template.tokens(),
                                determiner: self
                                    .determiner_for(&functional_entry.template.to_string()),
                                score: functional_entry.store.leader_score(),
                            }],
                            None => {
                                viable = false;
                                break;
                            }
                        },
                    };
                    options.insert(slot.to_string(), nps);
                }
                if !viable {
                    continue;
                }
                for combo in cross_product(&options) {
                    if let Some(candidate) =
                        Self::instantiate_phrases(&entry.template, &combo, hypothesis.score)
                    {
                        candidates.push(candidate);
                    }
                }
            }
        }

        // Deduplicate keeping the best score, then rank.
        let mut best: BTreeMap<Vec<String>, f64> = BTreeMap::new();
        for (tokens, score) in candidates {
            let slot = best.entry(tokens).or_insert(score);
            if score > *slot {
                *slot = score;
            }
        }
        let mut ranked: Vec<Description> = best.into_iter().collect();
        ranked.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));
        ranked
    }
}

/// First position where `needle` occurs in `haystack` with every covered
/// token still unaligned.
fn find_free_span(
    haystack: &[String],
    needle: &[String],
    alignment: &JointAlignment,
) -> Option<usize> {
    if needle.is_empty() || needle.len() > haystack.len() {
        return None;
    }
    (0..=haystack.len() - needle.len()).find(|&start| {
        haystack[start..start + needle.len()] == *needle
            && (start..start + needle.len()).all(|i| !alignment.language.is_token_aligned(i))
    })
}

/// All index subsets of `{0..n}` with size ≤ `max`, smallest first.
fn subsets_up_to(n: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![vec![]];
    for i in 0..n {
        let mut extended = Vec::new();
        for s in &out {
            if s.len() < max {
                let mut t = s.clone();
                t.push(i);
                extended.push(t);
            }
        }
        out.extend(extended);
    }
    out.sort_by_key(|s| (s.len(), s.clone()));
    out
}

/// Cross product of per-slot realization options.
fn cross_product<'a>(
    options: &'a BTreeMap<String, Vec<NounPhrase>>,
) -> Vec<BTreeMap<String, &'a NounPhrase>> {
    let mut combos: Vec<BTreeMap<String, &NounPhrase>> = vec![BTreeMap::new()];
    for (slot, nps) in options {
        let mut next = Vec::new();
        for combo in &combos {
            for np in nps {
                let mut extended = combo.clone();
                extended.insert(slot.clone(), np);
                next.push(extended);
            }
        }
        combos = next;
    }
    combos
}
