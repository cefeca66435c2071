//! The word-learning update rules. Each maintains a per-word store of scored
//! meaning hypotheses and revises it on every exposure to the word paired
//! with a perception graph.

use serde::{Deserialize, Serialize};

use crate::graphs::{intersect, match_pattern, subsumes, MatchOptions, PerceptionGraph, SlotId};
use crate::rng::SplitMix64;

use super::types::PerceptionGraphTemplate;

/// One meaning hypothesis with its current strength. `count` is only used by
/// the cross-situational rule; the others leave it at zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredHypothesis {
    pub meaning: PerceptionGraphTemplate,
    pub score: f64,
    pub count: u64,
}

/// All hypotheses currently entertained for one word.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct HypothesisStore {
    pub hypotheses: Vec<ScoredHypothesis>,
    /// How many exposures this store has been updated on.
    pub observations: u64,
}

impl HypothesisStore {
    pub fn is_empty(&self) -> bool {
        self.hypotheses.is_empty()
    }

    /// Index of the highest-scored hypothesis; ties go to the earliest.
    pub fn leader(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, h) in self.hypotheses.iter().enumerate() {
            if best.is_none_or(|b| h.score > self.hypotheses[b].score) {
                best = Some(i);
            }
        }
        best
    }

    pub fn leader_score(&self) -> f64 {
        self.leader()
            .map(|i| self.hypotheses[i].score)
            .unwrap_or(0.0)
    }

    fn position_of(&self, meaning: &PerceptionGraphTemplate) -> Option<usize> {
        self.hypotheses.iter().position(|h| &h.meaning == meaning)
    }
}

/// Parameters of the pursuit rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PursuitParams {
    /// Score given to a newly adopted hypothesis.
    pub initial: f64,
    /// Learning rate for rewards and penalties.
    pub gamma: f64,
    /// Lexicalization threshold on the leading score.
    pub tau: f64,
    /// Minimum partial-match ratio at which the matching sub-pattern is
    /// rewarded instead of drawing a fresh random hypothesis.
    pub partial_match_ratio: f64,
}

impl Default for PursuitParams {
    fn default() -> Self {
        PursuitParams {
            initial: 0.5,
            gamma: 0.05,
            tau: 0.8,
            partial_match_ratio: 0.5,
        }
    }
}

/// Which update rule a learner runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LearningAlgorithm {
    /// Keep the intersection of all observed meanings.
    Subset,
    /// Reward/penalize a single pursued hypothesis, with partial-match
    /// generalization.
    PursuitNa(PursuitParams),
    /// Co-occurrence counting with additive smoothing.
    CrossSituational { smoothing: f64 },
    /// One guess, kept while it verifies, replaced when it fails.
    ProposeButVerify,
}

impl LearningAlgorithm {
    /// Leading score at or above which the word counts as lexicalized.
    pub fn lexicalization_threshold(&self) -> f64 {
        match self {
            LearningAlgorithm::PursuitNa(p) => p.tau,
            // The other rules have no explicit threshold; any leader counts.
            _ => 0.0,
        }
    }
}

/// Apply one exposure to the store. `new_hypotheses` are the candidate
/// meanings the current graph offers for this word's template; `graph` is
/// the (collapsed, plural-annotated) perception graph of the exposure.
/// Returns `false` if the word should be discarded entirely.
pub fn update_store(
    algorithm: &LearningAlgorithm,
    store: &mut HypothesisStore,
    new_hypotheses: &[PerceptionGraphTemplate],
    graph: &PerceptionGraph,
    rng: &mut SplitMix64,
) -> bool {
    store.observations += 1;
    match algorithm {
        LearningAlgorithm::Subset => subset_update(store, new_hypotheses),
        LearningAlgorithm::PursuitNa(params) => {
            pursuit_update(store, new_hypotheses, graph, params, rng)
        }
        LearningAlgorithm::CrossSituational { smoothing } => {
            cross_situational_update(store, new_hypotheses, graph, *smoothing)
        }
        LearningAlgorithm::ProposeButVerify => {
            propose_but_verify_update(store, new_hypotheses, graph, rng)
        }
    }
}

fn insert_unique(store: &mut HypothesisStore, hypothesis: ScoredHypothesis) {
    if store.position_of(&hypothesis.meaning).is_none() {
        store.hypotheses.push(hypothesis);
    }
}

/// Replace each stored meaning with its most informative intersection with
/// any meaning the new exposure offers; drop meanings with no consistent
/// intersection.
fn subset_update(store: &mut HypothesisStore, new_hypotheses: &[PerceptionGraphTemplate]) -> bool {
    if store.is_empty() && new_hypotheses.is_empty() {
        // Nothing learned yet and nothing offered: stay unlearned rather
        // than discarding a word that may get evidence later.
        return true;
    }
    if store.is_empty() {
        for h in new_hypotheses {
            insert_unique(
                store,
                ScoredHypothesis {
                    meaning: h.clone(),
                    score: 1.0,
                    count: 0,
                },
            );
        }
        return !store.is_empty();
    }
    let mut kept: Vec<ScoredHypothesis> = Vec::new();
    for stored in &store.hypotheses {
        let best = new_hypotheses
            .iter()
            .filter_map(|n| intersect(&stored.meaning.pattern, &n.pattern))
            .max_by_key(|p| p.nodes.len());
        if let Some(pattern) = best {
            let meaning = PerceptionGraphTemplate {
                pattern,
                slot_alignment: stored.meaning.slot_alignment.clone(),
            };
            if !kept.iter().any(|k| k.meaning == meaning) {
                kept.push(ScoredHypothesis {
                    meaning,
                    score: 1.0,
                    count: 0,
                });
            }
        }
    }
    store.hypotheses = kept;
    !store.is_empty()
}

fn reward(score: f64, gamma: f64) -> f64 {
    score + gamma * (1.0 - score)
}

fn penalize(score: f64, gamma: f64) -> f64 {
    score * (1.0 - gamma)
}

/// The hypothesis restricted to its matched nodes, if its slots survive.
fn matched_sub_pattern(
    meaning: &PerceptionGraphTemplate,
    matched: &std::collections::BTreeSet<usize>,
) -> Option<PerceptionGraphTemplate> {
    let (pattern, _) = meaning.pattern.restricted_to(matched);
    let slots: std::collections::BTreeSet<SlotId> = pattern.slots().keys().cloned().collect();
    let required: std::collections::BTreeSet<SlotId> =
        meaning.pattern.slots().keys().cloned().collect();
    (slots == required && !pattern.is_empty()).then(|| PerceptionGraphTemplate {
        pattern,
        slot_alignment: meaning.slot_alignment.clone(),
    })
}

/// Pursuit with generalization rewards: test only the leading hypothesis;
/// on success reward it and any stored generalization of it, on failure
/// penalize it and either credit the sub-pattern that did match (when most
/// of it matched) or adopt a fresh random hypothesis.
fn pursuit_update(
    store: &mut HypothesisStore,
    new_hypotheses: &[PerceptionGraphTemplate],
    graph: &PerceptionGraph,
    params: &PursuitParams,
    rng: &mut SplitMix64,
) -> bool {
    if store.is_empty() {
        if new_hypotheses.is_empty() {
            return true;
        }
        let pick = rng.choose(new_hypotheses).clone();
        store.hypotheses.push(ScoredHypothesis {
            meaning: pick,
            score: params.initial,
            count: 0,
        });
        return true;
    }
    let leader = store.leader().expect("non-empty store has a leader");
    let result = match_pattern(
        &store.hypotheses[leader].meaning.pattern,
        graph,
        MatchOptions::default(),
    );
    if result.is_full() {
        reward_with_generalizations(store, leader, true, params.gamma);
        return true;
    }
    store.hypotheses[leader].score = penalize(store.hypotheses[leader].score, params.gamma);
    let ratio = result.match_ratio(&store.hypotheses[leader].meaning.pattern);
    let credited = if ratio >= params.partial_match_ratio {
        let matched: std::collections::BTreeSet<usize> =
            result.best_partial.alignment.keys().copied().collect();
        matched_sub_pattern(&store.hypotheses[leader].meaning, &matched)
    } else {
        None
    };
    let credited = credited
        .or_else(|| (!new_hypotheses.is_empty()).then(|| rng.choose(new_hypotheses).clone()));
    if let Some(meaning) = credited {
        match store.position_of(&meaning) {
            Some(i) => reward_with_generalizations(store, i, true, params.gamma),
            None => {
                store.hypotheses.push(ScoredHypothesis {
                    meaning,
                    score: params.initial,
                    count: 0,
                });
                // The fresh hypothesis enters at the initial score; stored
                // generalizations of it still collect the reward.
                let index = store.hypotheses.len() - 1;
                reward_with_generalizations(store, index, false, params.gamma);
            }
        }
    }
    true
}

/// Reward a hypothesis (optionally) together with every stored
/// generalization of it.
fn reward_with_generalizations(
    store: &mut HypothesisStore,
    index: usize,
    include_self: bool,
    gamma: f64,
) {
    let pattern = store.hypotheses[index].meaning.pattern.clone();
    for (i, h) in store.hypotheses.iter_mut().enumerate() {
        if (i == index && include_self) || (i != index && subsumes(&h.meaning.pattern, &pattern)) {
            h.score = reward(h.score, gamma);
        }
    }
}

/// Count how often each hypothesis is consistent with the exposures and turn
/// counts into smoothed relative scores.
fn cross_situational_update(
    store: &mut HypothesisStore,
    new_hypotheses: &[PerceptionGraphTemplate],
    graph: &PerceptionGraph,
    smoothing: f64,
) -> bool {
    for h in &mut store.hypotheses {
        if match_pattern(&h.meaning.pattern, graph, MatchOptions::default()).is_full() {
            h.count += 1;
        }
    }
    for n in new_hypotheses {
        insert_unique(
            store,
            ScoredHypothesis {
                meaning: n.clone(),
                score: 0.0,
                count: 1,
            },
        );
    }
    let k = store.hypotheses.len() as f64;
    let total = store.observations as f64;
    for h in &mut store.hypotheses {
        h.score = (h.count as f64 + smoothing) / (total + smoothing * k);
    }
    !store.is_empty()
}

/// Keep the single current guess while it verifies against new exposures;
/// replace it with a fresh random guess when it fails.
fn propose_but_verify_update(
    store: &mut HypothesisStore,
    new_hypotheses: &[PerceptionGraphTemplate],
    graph: &PerceptionGraph,
    rng: &mut SplitMix64,
) -> bool {
    let verified = store.hypotheses.first().is_some_and(|h| {
        match_pattern(&h.meaning.pattern, graph, MatchOptions::default()).is_full()
    });
    if !verified {
        store.hypotheses.clear();
        if new_hypotheses.is_empty() {
            return true;
        }
        store.hypotheses.push(ScoredHypothesis {
            meaning: rng.choose(new_hypotheses).clone(),
            score: 1.0,
            count: 0,
        });
    }
    true
}
