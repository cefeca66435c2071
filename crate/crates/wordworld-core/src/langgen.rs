//! English utterance generation: renders the salient portion of a situation
//! as a token sequence, the only linguistic input the learner ever receives.
//!
//! Internally utterances are built as small dependency trees, but only the
//! linearized tokens leave this module. The plural marker "s" and the
//! possessive clitic "'s" are always their own tokens.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ontology::{NodeId, Ontology, SemanticRole};
use crate::situation::{
    ObjectHandle, RelationTarget, Situation, SituationObject, IN_REGION, PREFER_PASSIVE,
};
use crate::spatial::{Direction, Distance};

pub type TokenSequence = Vec<String>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NounEntry {
    pub base: String,
    /// Proper names (Mom, Dad) take no determiner and keep their case.
    #[serde(default)]
    pub proper: bool,
    /// Recognized particulars (the ground) take "the".
    #[serde(default)]
    pub particular: bool,
    /// Mass nouns (juice, water) take no determiner in the singular.
    #[serde(default)]
    pub mass: bool,
}

impl NounEntry {
    pub fn common(base: &str) -> NounEntry {
        NounEntry {
            base: base.to_owned(),
            proper: false,
            particular: false,
            mass: false,
        }
    }

    pub fn proper(base: &str) -> NounEntry {
        NounEntry {
            base: base.to_owned(),
            proper: true,
            particular: false,
            mass: false,
        }
    }

    pub fn particular(base: &str) -> NounEntry {
        NounEntry {
            base: base.to_owned(),
            proper: false,
            particular: true,
            mass: false,
        }
    }

    pub fn mass(base: &str) -> NounEntry {
        NounEntry {
            base: base.to_owned(),
            proper: false,
            particular: false,
            mass: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerbEntry {
    pub base: String,
    pub third_singular: String,
    pub passive_participle: String,
}

impl VerbEntry {
    /// Regular verb: "-s" third singular, "-ed"/"-n" participle passed in.
    pub fn new(base: &str, third_singular: &str, passive_participle: &str) -> VerbEntry {
        VerbEntry {
            base: base.to_owned(),
            third_singular: third_singular.to_owned(),
            passive_participle: passive_participle.to_owned(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lexicon {
    pub nouns: BTreeMap<NodeId, NounEntry>,
    pub verbs: BTreeMap<NodeId, VerbEntry>,
    /// Attribute surface forms; multiword values are split on spaces.
    pub adjectives: BTreeMap<NodeId, String>,
}

/// Dependency-tree node used internally by the generator; linearization of
/// the tree is exactly the emitted token sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizationTree {
    pub token: String,
    /// Grammatical function relative to the parent (e.g. "det", "subj").
    pub function: String,
    pub before_head: Vec<RealizationTree>,
    pub after_head: Vec<RealizationTree>,
}

impl RealizationTree {
    fn leaf(token: &str, function: &str) -> RealizationTree {
        RealizationTree {
            token: token.to_owned(),
            function: function.to_owned(),
            before_head: Vec::new(),
            after_head: Vec::new(),
        }
    }

    pub fn linearize(&self) -> TokenSequence {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut TokenSequence) {
        for c in &self.before_head {
            c.collect(out);
        }
        out.push(self.token.clone());
        for c in &self.after_head {
            c.collect(out);
        }
    }
}

/// Anything that can turn situations into token sequences. The experiment
/// harness depends only on this trait, so generators are swappable.
pub trait UtteranceGenerator {
    fn generate(&self, situation: &Situation, ontology: &Ontology) -> Result<TokenSequence>;
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnglishGenerator {
    pub lexicon: Lexicon,
}

impl EnglishGenerator {
    pub fn new(lexicon: Lexicon) -> EnglishGenerator {
        EnglishGenerator { lexicon }
    }

    pub fn register_noun(&mut self, node: &str, entry: NounEntry) -> Result<()> {
        if entry.base.is_empty() || entry.base.contains(char::is_whitespace) {
            return Err(Error::MalformedLexEntry {
                node: node.to_owned(),
                reason: "noun base must be one non-empty token".into(),
            });
        }
        self.lexicon.nouns.insert(NodeId::new(node), entry);
        Ok(())
    }

    pub fn register_verb(&mut self, node: &str, entry: VerbEntry) -> Result<()> {
        if entry.base.is_empty() || entry.third_singular.is_empty() {
            return Err(Error::MalformedLexEntry {
                node: node.to_owned(),
                reason: "verb needs base and third-singular forms".into(),
            });
        }
        self.lexicon.verbs.insert(NodeId::new(node), entry);
        Ok(())
    }

    pub fn register_adjective(&mut self, node: &str, surface: &str) -> Result<()> {
        if surface.trim().is_empty() {
            return Err(Error::MalformedLexEntry {
                node: node.to_owned(),
                reason: "empty adjective".into(),
            });
        }
        self.lexicon
            .adjectives
            .insert(NodeId::new(node), surface.to_owned());
        Ok(())
    }

    fn noun(&self, node: &NodeId) -> Result<&NounEntry> {
        self.lexicon
            .nouns
            .get(node)
            .ok_or_else(|| Error::MissingLexicalization(node.to_string()))
    }

    fn verb(&self, node: &NodeId) -> Result<&VerbEntry> {
        self.lexicon
            .verbs
            .get(node)
            .ok_or_else(|| Error::MissingLexicalization(node.to_string()))
    }

    /// The possessor of `handle`, if a `has` relation asserts one.
    fn possessor_of<'s>(
        &self,
        situation: &'s Situation,
        handle: &ObjectHandle,
    ) -> Option<&'s SituationObject> {
        let has = NodeId::new("has");
        situation.relations.iter().find_map(|rel| {
            if rel.relation == has {
                if let RelationTarget::Object(second) = &rel.second {
                    if second == handle {
                        return situation.objects.get(&rel.first);
                    }
                }
            }
            None
        })
    }

    fn adjective_nodes(&self, ontology: &Ontology, obj: &SituationObject) -> Vec<NodeId> {
        obj.asserted_properties
            .iter()
            .filter(|p| self.lexicon.adjectives.contains_key(*p) && ontology.contains(p))
            .cloned()
            .collect()
    }

    /// Noun phrase for one object, folding speaker possession into "my" and
    /// other possession into "<possessor> 's".
    fn noun_phrase(
        &self,
        situation: &Situation,
        ontology: &Ontology,
        obj: &SituationObject,
        count: usize,
    ) -> Result<RealizationTree> {
        let entry = self.noun(&obj.object_type)?;
        let mut np = RealizationTree::leaf(&entry.base, "head");

        let mut lead: Vec<RealizationTree> = Vec::new();
        if count >= 2 {
            let numeral = match count {
                2 => "two",
                3 => "three",
                _ => "many",
            };
            lead.push(RealizationTree::leaf(numeral, "num"));
        } else if let Some(possessor) = self.possessor_of(situation, &obj.handle) {
            if possessor.is_speaker() {
                lead.push(RealizationTree::leaf("my", "poss"));
            } else {
                let pentry = self.noun(&possessor.object_type)?;
                let mut ptree = RealizationTree::leaf(&pentry.base, "poss");
                if !pentry.proper && !pentry.mass {
                    ptree.before_head.push(RealizationTree::leaf("the", "det"));
                }
                ptree.after_head.push(RealizationTree::leaf("'s", "case"));
                lead.push(ptree);
            }
        } else if !entry.proper && !entry.mass {
            let det = if entry.particular { "the" } else { "a" };
            lead.push(RealizationTree::leaf(det, "det"));
        }

        for adj in self.adjective_nodes(ontology, obj) {
            for word in self.lexicon.adjectives[&adj].split_whitespace() {
                lead.push(RealizationTree::leaf(word, "amod"));
            }
        }
        np.before_head = lead;
        if count >= 2 {
            np.after_head.push(RealizationTree::leaf("s", "plural"));
        }
        Ok(np)
    }

    /// Preposition for a region, per the spatial-relation rule table.
    fn region_preposition(
        distance: Option<Distance>,
        direction: Option<Direction>,
    ) -> Vec<&'static str> {
        match (distance, direction) {
            (Some(Distance::Interior), _) => vec!["in"],
            (Some(Distance::ExteriorButInContact), Some(Direction::ABOVE)) => vec!["on"],
            (Some(Distance::Distal), Some(Direction::ABOVE)) => vec!["over"],
            (Some(Distance::Distal), Some(Direction::BELOW)) => vec!["under"],
            (_, Some(Direction::IN_FRONT)) => vec!["in", "front", "of"],
            (_, Some(Direction::BEHIND)) => vec!["behind"],
            (Some(Distance::Proximal), _) => vec!["beside"],
            _ => vec!["near"],
        }
    }

    /// Oblique preposition for an action's goal, derived from the
    /// description's postcondition region over the goal variable.
    fn goal_preposition(
        ontology: &Ontology,
        action_type: &NodeId,
        goal_var: &crate::ontology::VarId,
    ) -> &'static str {
        if let Some(desc) = ontology.action_descriptions.get(action_type) {
            for cond in &desc.postconditions {
                if let crate::ontology::ConditionTarget::Region(r) = &cond.second {
                    if &r.reference == goal_var {
                        return match (r.distance, r.direction) {
                            (Some(Distance::Interior), _) => "in",
                            (Some(Distance::ExteriorButInContact), Some(Direction::ABOVE)) => "on",
                            _ => "to",
                        };
                    }
                }
            }
        }
        "to"
    }

    fn action_clause(
        &self,
        situation: &Situation,
        ontology: &Ontology,
        action: &crate::situation::SituationAction,
    ) -> Result<RealizationTree> {
        let desc = ontology
            .action_descriptions
            .get(&action.action_type)
            .ok_or_else(|| Error::MissingActionDescription(action.action_type.to_string()))?;
        let verb = self.verb(&action.action_type)?;

        let bound_object = |role: SemanticRole| -> Option<&SituationObject> {
            let var = desc.role_var(role)?;
            situation.objects.get(action.bound(var)?)
        };
        let agent = bound_object(SemanticRole::Agent);
        let theme = bound_object(SemanticRole::Theme);
        let subject = agent.or(theme).ok_or_else(|| {
            Error::Invalid(format!(
                "action `{}` has no bound agent or theme to realize",
                action.action_type
            ))
        })?;

        let passive =
            situation.syntax_hints.contains(PREFER_PASSIVE) && agent.is_some() && theme.is_some();

        let mut clause;
        if passive {
            // "the ball is thrown by Dad"
            clause = RealizationTree::leaf(&verb.passive_participle, "head");
            let theme = theme.unwrap();
            let mut subj = self.noun_phrase(situation, ontology, theme, 1)?;
            subj.function = "subj".into();
            clause.before_head.push(subj);
            clause.before_head.push(RealizationTree::leaf("is", "aux"));
            let mut by = RealizationTree::leaf("by", "agent-mark");
            let mut ag = self.noun_phrase(situation, ontology, agent.unwrap(), 1)?;
            ag.function = "obl".into();
            by.after_head.push(ag);
            clause.after_head.push(by);
        } else {
            clause = RealizationTree::leaf(&verb.third_singular, "head");
            let mut subj = self.noun_phrase(situation, ontology, subject, 1)?;
            subj.function = "subj".into();
            clause.before_head.push(subj);
            if let (Some(agent), Some(theme)) = (agent, theme) {
                if agent.handle != theme.handle {
                    let mut obj = self.noun_phrase(situation, ontology, theme, 1)?;
                    obj.function = "obj".into();
                    clause.after_head.push(obj);
                }
            }
            if let Some(goal) = bound_object(SemanticRole::Goal) {
                let var = desc.role_var(SemanticRole::Goal).unwrap();
                let prep = Self::goal_preposition(ontology, &action.action_type, var);
                let mut ptree = RealizationTree::leaf(prep, "obl-mark");
                let mut gnp = self.noun_phrase(situation, ontology, goal, 1)?;
                gnp.function = "obl".into();
                ptree.after_head.push(gnp);
                clause.after_head.push(ptree);
            }
        }
        Ok(clause)
    }

    /// Pick the relation to describe: the first salient-subject spatial
    /// relation in (relation id, handle) order.
    fn salient_spatial_relation<'s>(
        &self,
        situation: &'s Situation,
    ) -> Option<&'s crate::situation::SituationRelation> {
        let in_region = NodeId::new(IN_REGION);
        let mut candidates: Vec<&crate::situation::SituationRelation> = situation
            .relations
            .iter()
            .filter(|rel| {
                rel.relation == in_region
                    && situation.objects.get(&rel.first).is_some_and(|o| o.salient)
                    && match &rel.second {
                        RelationTarget::Region(r) => situation
                            .objects
                            .get(&r.reference)
                            .is_some_and(|o| o.salient),
                        RelationTarget::Object(_) => false,
                    }
            })
            .collect();
        candidates.sort_by(|a, b| (&a.relation, &a.first).cmp(&(&b.relation, &b.first)));
        candidates.into_iter().next()
    }

    /// Full realization tree for a situation (exposed so the linearization
    /// invariant is testable).
    pub fn realize(&self, situation: &Situation, ontology: &Ontology) -> Result<RealizationTree> {
        if let Some(action) = situation.actions.first() {
            return self.action_clause(situation, ontology, action);
        }

        if let Some(rel) = self.salient_spatial_relation(situation) {
            if let RelationTarget::Region(region) = &rel.second {
                let figure = situation.object(&rel.first)?;
                let reference = situation.object(&region.reference)?;
                let mut np = self.noun_phrase(situation, ontology, figure, 1)?;
                let preps = Self::region_preposition(region.distance, region.direction);
                // Nest the preposition chain: "in front of" hangs each word
                // off the previous one.
                let mut rnp = self.noun_phrase(situation, ontology, reference, 1)?;
                rnp.function = "obl".into();
                let mut chain = rnp;
                for word in preps.iter().rev() {
                    let mut p = RealizationTree::leaf(word, "case");
                    p.after_head.push(chain);
                    chain = p;
                }
                np.after_head.push(chain);
                return Ok(np);
            }
        }

        // Object-only scene: group salient objects by type for plurals; the
        // possessor of a possessed object is folded into that NP, never
        // realized on its own.
        let possessed: Vec<&SituationObject> = situation
            .salient_objects()
            .filter(|o| self.possessor_of(situation, &o.handle).is_some())
            .collect();
        if let Some(obj) = possessed.first() {
            return self.noun_phrase(situation, ontology, obj, 1);
        }

        let mut by_type: BTreeMap<&NodeId, Vec<&SituationObject>> = BTreeMap::new();
        for obj in situation.salient_objects() {
            by_type.entry(&obj.object_type).or_default().push(obj);
        }
        let (_, group) = by_type
            .into_iter()
            .next()
            .ok_or_else(|| Error::Invalid("no salient object to describe".into()))?;
        self.noun_phrase(situation, ontology, group[0], group.len())
    }
}

impl UtteranceGenerator for EnglishGenerator {
    fn generate(&self, situation: &Situation, ontology: &Ontology) -> Result<TokenSequence> {
        Ok(self.realize(situation, ontology)?.linearize())
    }
}
