//! Situation templates: compact specifications of situation families, plus
//! exhaustive and sampled instantiation into concrete situations.
//!
//! A template declares variables ranging over ontology subtrees (optionally
//! constrained by properties), fixed object constants, and relation/action
//! structure over those symbols. Instantiation substitutes every admissible
//! combination of fillers.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ontology::{NodeId, Ontology, VarId};
use crate::rng::SplitMix64;
use crate::situation::{validate_situation, Phase, Region, Situation, SituationBuilder};
use crate::spatial::{Direction, Distance};

/// A symbol ranging over ontology nodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateVariable {
    pub name: String,
    pub root_type: NodeId,
    #[serde(default)]
    pub required_properties: BTreeSet<NodeId>,
    #[serde(default)]
    pub banned_properties: BTreeSet<NodeId>,
    #[serde(default)]
    pub banned_types: BTreeSet<NodeId>,
    /// Properties stamped onto the instantiated object (e.g. a color).
    #[serde(default)]
    pub asserted_properties: BTreeSet<NodeId>,
    #[serde(default = "default_true")]
    pub salient: bool,
}

fn default_true() -> bool {
    true
}

/// A symbol with a fixed type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateConstant {
    pub name: String,
    pub object_type: NodeId,
    #[serde(default)]
    pub asserted_properties: BTreeSet<NodeId>,
    #[serde(default = "default_true")]
    pub salient: bool,
}

/// Second argument of a relation template: another symbol, or a region
/// anchored at a symbol.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum TemplateTarget {
    Symbol(String),
    Region {
        reference: String,
        distance: Option<Distance>,
        direction: Option<Direction>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateRelation {
    pub relation: NodeId,
    pub first: String,
    pub second: TemplateTarget,
    pub phase: Phase,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateAction {
    pub action_type: NodeId,
    /// Action-description variable → template symbol.
    pub bindings: BTreeMap<VarId, String>,
}

/// Cross-variable admissibility constraint, checked per assignment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum TemplateConstraint {
    /// The named symbols must all be bound to pairwise distinct types.
    DistinctTypes(Vec<String>),
    /// The first symbol's size grade must be strictly below the second's.
    /// Assignments where either grade is unknown are excluded.
    RelativeSize { smaller: String, bigger: String },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SituationTemplate {
    #[serde(default)]
    pub variables: Vec<TemplateVariable>,
    #[serde(default)]
    pub constants: Vec<TemplateConstant>,
    #[serde(default)]
    pub relations: Vec<TemplateRelation>,
    #[serde(default)]
    pub actions: Vec<TemplateAction>,
    #[serde(default)]
    pub constraints: Vec<TemplateConstraint>,
    #[serde(default)]
    pub gazed_at: BTreeSet<String>,
    #[serde(default)]
    pub syntax_hints: BTreeSet<String>,
}

impl SituationTemplate {
    fn declared_symbols(&self) -> BTreeSet<&str> {
        self.variables
            .iter()
            .map(|v| v.name.as_str())
            .chain(self.constants.iter().map(|c| c.name.as_str()))
            .chain(std::iter::once(crate::situation::GROUND_HANDLE))
            .collect()
    }

    /// Report symbols used in relations/actions/gaze but never declared.
    pub fn undeclared_symbols(&self) -> BTreeSet<String> {
        let declared = self.declared_symbols();
        let mut bad = BTreeSet::new();
        let mut check = |s: &str| {
            if !declared.contains(s) {
                bad.insert(s.to_owned());
            }
        };
        for rel in &self.relations {
            check(&rel.first);
            match &rel.second {
                TemplateTarget::Symbol(s) => check(s),
                TemplateTarget::Region { reference, .. } => check(reference),
            }
        }
        for action in &self.actions {
            for s in action.bindings.values() {
                check(s);
            }
        }
        for (c, vars) in self.constraints.iter().map(|c| match c {
            TemplateConstraint::DistinctTypes(vs) => (c, vs.clone()),
            TemplateConstraint::RelativeSize { smaller, bigger } => {
                (c, vec![smaller.clone(), bigger.clone()])
            }
        }) {
            let _ = c;
            for v in vars {
                check(&v);
            }
        }
        for g in &self.gazed_at {
            check(g);
        }
        bad
    }
}

/// One choice of filler per variable.
type Assignment<'a> = BTreeMap<&'a str, NodeId>;

fn constraint_holds(
    constraint: &TemplateConstraint,
    assignment: &Assignment<'_>,
    template: &SituationTemplate,
    ontology: &Ontology,
) -> bool {
    let type_of = |symbol: &str| -> Option<NodeId> {
        if let Some(t) = assignment.get(symbol) {
            return Some(t.clone());
        }
        template
            .constants
            .iter()
            .find(|c| c.name == symbol)
            .map(|c| c.object_type.clone())
    };
    match constraint {
        TemplateConstraint::DistinctTypes(symbols) => {
            let types: Vec<Option<NodeId>> = symbols.iter().map(|s| type_of(s)).collect();
            for i in 0..types.len() {
                for j in (i + 1)..types.len() {
                    if types[i].is_some() && types[i] == types[j] {
                        return false;
                    }
                }
            }
            true
        }
        TemplateConstraint::RelativeSize { smaller, bigger } => {
            let (Some(a), Some(b)) = (type_of(smaller), type_of(bigger)) else {
                return false;
            };
            match (ontology.size_grade(&a), ontology.size_grade(&b)) {
                (Some(ga), Some(gb)) => ga < gb,
                _ => false,
            }
        }
    }
}

fn build_situation(template: &SituationTemplate, assignment: &Assignment<'_>) -> Result<Situation> {
    let mut b = SituationBuilder::new();
    for var in &template.variables {
        let filler = &assignment[var.name.as_str()];
        let props: Vec<&str> = var.asserted_properties.iter().map(|p| p.as_str()).collect();
        b.object_with(&var.name, filler.as_str(), &props, var.salient);
    }
    for c in &template.constants {
        let props: Vec<&str> = c.asserted_properties.iter().map(|p| p.as_str()).collect();
        b.object_with(&c.name, c.object_type.as_str(), &props, c.salient);
    }
    for rel in &template.relations {
        match &rel.second {
            TemplateTarget::Symbol(s) => {
                b.relation(
                    rel.relation.as_str(),
                    &rel.first,
                    crate::situation::RelationTarget::Object(s.as_str().into()),
                    rel.phase,
                );
            }
            TemplateTarget::Region {
                reference,
                distance,
                direction,
            } => {
                let region = Region::new(reference.as_str().into(), *distance, *direction)?;
                b.in_region(&rel.first, region, rel.phase);
            }
        }
    }
    for action in &template.actions {
        let bindings: Vec<(&str, &str)> = action
            .bindings
            .iter()
            .map(|(v, s)| (v.as_str(), s.as_str()))
            .collect();
        b.action(action.action_type.as_str(), &bindings);
    }
    for g in &template.gazed_at {
        b.gaze(g);
    }
    for h in &template.syntax_hints {
        b.syntax_hint(h);
    }
    Ok(b.build())
}

fn filler_sets<'a>(
    template: &'a SituationTemplate,
    ontology: &Ontology,
) -> Result<Vec<(&'a str, Vec<NodeId>)>> {
    let mut sets = Vec::new();
    // Sorted by variable name so the emitted order is lexicographic by
    // (variable name, filler id).
    let mut vars: Vec<&TemplateVariable> = template.variables.iter().collect();
    vars.sort_by(|a, b| a.name.cmp(&b.name));
    for var in vars {
        let fillers: Vec<NodeId> = ontology
            .template_fillers(
                &var.root_type,
                &var.required_properties,
                &var.banned_properties,
            )?
            .into_iter()
            .filter(|f| !var.banned_types.contains(f))
            .collect();
        if fillers.is_empty() {
            return Err(Error::EmptyFillerSet(var.name.clone()));
        }
        sets.push((var.name.as_str(), fillers));
    }
    Ok(sets)
}

/// Every admissible instantiation, ordered lexicographically by
/// (variable name, filler id). Constraint-violating assignments are filtered;
/// a situation that fails validation is an error, not a silent drop.
pub fn instantiate_all(
    template: &SituationTemplate,
    ontology: &Ontology,
) -> Result<Vec<Situation>> {
    let undeclared = template.undeclared_symbols();
    if let Some(symbol) = undeclared.into_iter().next() {
        return Err(Error::Invalid(format!(
            "template references undeclared symbol `{symbol}`"
        )));
    }
    let sets = filler_sets(template, ontology)?;
    let mut out = Vec::new();
    let mut indices = vec![0usize; sets.len()];
    loop {
        let assignment: Assignment<'_> = sets
            .iter()
            .zip(indices.iter())
            .map(|((name, fillers), &i)| (*name, fillers[i].clone()))
            .collect();
        if template
            .constraints
            .iter()
            .all(|c| constraint_holds(c, &assignment, template, ontology))
        {
            let situation = build_situation(template, &assignment)?;
            let issues = validate_situation(&situation, ontology);
            if !issues.is_empty() {
                return Err(crate::ontology::issues_to_error(&issues));
            }
            out.push(situation);
        }
        // Odometer increment, last variable fastest.
        let mut pos = sets.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            indices[pos] += 1;
            if indices[pos] < sets[pos].1.len() {
                break;
            }
            indices[pos] = 0;
        }
    }
}

/// `n` situations drawn uniformly with replacement from the instantiation
/// space. Pure function of (template, n, seed).
pub fn instantiate_sample(
    template: &SituationTemplate,
    ontology: &Ontology,
    n: usize,
    seed: u64,
) -> Result<Vec<Situation>> {
    let space = instantiate_all(template, ontology)?;
    if space.is_empty() {
        return Err(Error::EmptyInstantiationSpace);
    }
    let mut rng = SplitMix64::new(seed);
    Ok((0..n)
        .map(|_| space[rng.next_bounded(space.len() as u64) as usize].clone())
        .collect())
}

/// Order-preserving concatenation of curriculum sections.
pub fn curriculum_concat(parts: Vec<Vec<Situation>>) -> Vec<Situation> {
    parts.into_iter().flatten().collect()
}

/// Assembles templates in code.
#[derive(Debug, Default)]
pub struct TemplateBuilder {
    template: SituationTemplate,
}

impl TemplateBuilder {
    pub fn new() -> TemplateBuilder {
        TemplateBuilder::default()
    }

    pub fn variable(&mut self, name: &str, root_type: &str) -> &mut Self {
        self.template.variables.push(TemplateVariable {
            name: name.to_owned(),
            root_type: NodeId::new(root_type),
            required_properties: BTreeSet::new(),
            banned_properties: BTreeSet::new(),
            banned_types: BTreeSet::new(),
            asserted_properties: BTreeSet::new(),
            salient: true,
        });
        self
    }

    pub fn variable_full(&mut self, var: TemplateVariable) -> &mut Self {
        self.template.variables.push(var);
        self
    }

    pub fn require_property(&mut self, variable: &str, property: &str) -> &mut Self {
        if let Some(v) = self
            .template
            .variables
            .iter_mut()
            .find(|v| v.name == variable)
        {
            v.required_properties.insert(NodeId::new(property));
        }
        self
    }

    pub fn ban_property(&mut self, variable: &str, property: &str) -> &mut Self {
        if let Some(v) = self
            .template
            .variables
            .iter_mut()
            .find(|v| v.name == variable)
        {
            v.banned_properties.insert(NodeId::new(property));
        }
        self
    }

    pub fn ban_type(&mut self, variable: &str, banned: &str) -> &mut Self {
        if let Some(v) = self
            .template
            .variables
            .iter_mut()
            .find(|v| v.name == variable)
        {
            v.banned_types.insert(NodeId::new(banned));
        }
        self
    }

    pub fn assert_property(&mut self, symbol: &str, property: &str) -> &mut Self {
        if let Some(v) = self
            .template
            .variables
            .iter_mut()
            .find(|v| v.name == symbol)
        {
            v.asserted_properties.insert(NodeId::new(property));
        } else if let Some(c) = self
            .template
            .constants
            .iter_mut()
            .find(|c| c.name == symbol)
        {
            c.asserted_properties.insert(NodeId::new(property));
        }
        self
    }

    pub fn non_salient(&mut self, symbol: &str) -> &mut Self {
        if let Some(v) = self
            .template
            .variables
            .iter_mut()
            .find(|v| v.name == symbol)
        {
            v.salient = false;
        } else if let Some(c) = self
            .template
            .constants
            .iter_mut()
            .find(|c| c.name == symbol)
        {
            c.salient = false;
        }
        self
    }

    pub fn constant(&mut self, name: &str, object_type: &str) -> &mut Self {
        self.template.constants.push(TemplateConstant {
            name: name.to_owned(),
            object_type: NodeId::new(object_type),
            asserted_properties: BTreeSet::new(),
            salient: true,
        });
        self
    }

    pub fn constant_with(
        &mut self,
        name: &str,
        object_type: &str,
        properties: &[&str],
        salient: bool,
    ) -> &mut Self {
        self.template.constants.push(TemplateConstant {
            name: name.to_owned(),
            object_type: NodeId::new(object_type),
            asserted_properties: properties.iter().map(|p| NodeId::new(p)).collect(),
            salient,
        });
        self
    }

    pub fn relation(
        &mut self,
        relation: &str,
        first: &str,
        second: TemplateTarget,
        phase: Phase,
    ) -> &mut Self {
        self.template.relations.push(TemplateRelation {
            relation: NodeId::new(relation),
            first: first.to_owned(),
            second,
            phase,
        });
        self
    }

    pub fn in_region(
        &mut self,
        first: &str,
        reference: &str,
        distance: Option<Distance>,
        direction: Option<Direction>,
        phase: Phase,
    ) -> &mut Self {
        self.relation(
            crate::situation::IN_REGION,
            first,
            TemplateTarget::Region {
                reference: reference.to_owned(),
                distance,
                direction,
            },
            phase,
        )
    }

    /// `first` on top of and touching `reference`, in both frames.
    pub fn on(&mut self, first: &str, reference: &str) -> &mut Self {
        self.in_region(
            first,
            reference,
            Some(Distance::ExteriorButInContact),
            Some(Direction::ABOVE),
            Phase::Both,
        )
    }

    pub fn action(&mut self, action_type: &str, bindings: &[(&str, &str)]) -> &mut Self {
        self.template.actions.push(TemplateAction {
            action_type: NodeId::new(action_type),
            bindings: bindings
                .iter()
                .map(|(v, s)| (VarId::new(v), (*s).to_owned()))
                .collect(),
        });
        self
    }

    pub fn distinct_types(&mut self, symbols: &[&str]) -> &mut Self {
        self.template
            .constraints
            .push(TemplateConstraint::DistinctTypes(
                symbols.iter().map(|s| (*s).to_owned()).collect(),
            ));
        self
    }

    pub fn smaller_than(&mut self, smaller: &str, bigger: &str) -> &mut Self {
        self.template
            .constraints
            .push(TemplateConstraint::RelativeSize {
                smaller: smaller.to_owned(),
                bigger: bigger.to_owned(),
            });
        self
    }

    pub fn gaze(&mut self, symbol: &str) -> &mut Self {
        self.template.gazed_at.insert(symbol.to_owned());
        self
    }

    pub fn syntax_hint(&mut self, hint: &str) -> &mut Self {
        self.template.syntax_hints.insert(hint.to_owned());
        self
    }

    pub fn build(&mut self) -> SituationTemplate {
        std::mem::take(&mut self.template)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::{
        OntologyBuilder, ACTION, CAN_FILL_TEMPLATE_SLOT, PERCEIVABLE, PROPERTY, RELATION, THING,
    };

    fn test_ontology() -> Ontology {
        let mut b = OntologyBuilder::new();
        b.node(THING, &[])
            .node(PROPERTY, &[])
            .node(RELATION, &[])
            .node(ACTION, &[])
            .node(PERCEIVABLE, &[])
            .node(CAN_FILL_TEMPLATE_SLOT, &[PROPERTY])
            .node(crate::situation::IN_REGION, &[RELATION])
            .node("ground", &[THING])
            .node("animal", &[THING])
            .node("toy", &[THING]);
        for a in ["bear", "bird", "cat", "cow", "dog", "duck"] {
            b.node_with_properties(a, &["animal"], &[CAN_FILL_TEMPLATE_SLOT]);
        }
        for (t, grade) in [("ball", 1), ("truck", 2), ("house", 4)] {
            b.node_with_properties(t, &["toy"], &[CAN_FILL_TEMPLATE_SLOT]);
            b.size_grade(t, grade);
        }
        b.build()
    }

    #[test]
    fn one_animal_variable_yields_six() {
        let o = test_ontology();
        let t = TemplateBuilder::new().variable("x", "animal").build();
        let all = instantiate_all(&t, &o).unwrap();
        assert_eq!(all.len(), 6);
        // Lexicographic by filler id.
        let types: Vec<&str> = all
            .iter()
            .map(|s| s.objects[&"x".into()].object_type.as_str())
            .collect();
        assert_eq!(types, ["bear", "bird", "cat", "cow", "dog", "duck"]);
    }

    #[test]
    fn cross_product_counts() {
        let o = test_ontology();
        let t = TemplateBuilder::new()
            .variable("x", "animal")
            .variable("y", "toy")
            .build();
        assert_eq!(instantiate_all(&t, &o).unwrap().len(), 6 * 3);
    }

    #[test]
    fn distinct_types_on_singleton_set_yields_zero() {
        let o = test_ontology();
        let t = TemplateBuilder::new()
            .variable("x", "ball")
            .variable("y", "ball")
            .distinct_types(&["x", "y"])
            .build();
        assert!(instantiate_all(&t, &o).unwrap().is_empty());
    }

    #[test]
    fn relative_size_filters_by_grade() {
        let o = test_ontology();
        let t = TemplateBuilder::new()
            .variable("x", "toy")
            .variable("y", "toy")
            .smaller_than("x", "y")
            .build();
        // Pairs with strictly increasing grades: (ball,truck), (ball,house),
        // (truck,house).
        assert_eq!(instantiate_all(&t, &o).unwrap().len(), 3);
    }

    #[test]
    fn empty_filler_set_names_variable() {
        let mut o = test_ontology();
        // `animal` subtree with slot-marker removed from every leaf.
        for a in ["bear", "bird", "cat", "cow", "dog", "duck"] {
            o.nodes
                .get_mut(&NodeId::new(a))
                .unwrap()
                .local_properties
                .remove(&NodeId::new(CAN_FILL_TEMPLATE_SLOT));
        }
        let t = TemplateBuilder::new().variable("x", "animal").build();
        match instantiate_all(&t, &o) {
            Err(Error::EmptyFillerSet(v)) => assert_eq!(v, "x"),
            other => panic!("expected empty-filler error, got {other:?}"),
        }
    }

    #[test]
    fn sample_deterministic_and_sized() {
        let o = test_ontology();
        let t = TemplateBuilder::new().variable("x", "animal").build();
        let a = instantiate_sample(&t, &o, 10, 7).unwrap();
        let b = instantiate_sample(&t, &o, 10, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 10);
        assert!(instantiate_sample(&t, &o, 0, 7).unwrap().is_empty());
    }

    #[test]
    fn sample_single_filler_space_repeats() {
        let o = test_ontology();
        let t = TemplateBuilder::new().variable("x", "ball").build();
        let s = instantiate_sample(&t, &o, 5, 123).unwrap();
        assert_eq!(s.len(), 5);
        assert!(s.iter().all(|x| x == &s[0]));
    }

    #[test]
    fn concat_preserves_order() {
        assert_eq!(
            curriculum_concat(vec![vec![], vec![]]),
            Vec::<Situation>::new()
        );
        let o = test_ontology();
        let t = TemplateBuilder::new().variable("x", "animal").build();
        let all = instantiate_all(&t, &o).unwrap();
        let joined = curriculum_concat(vec![all[..2].to_vec(), all[2..].to_vec()]);
        assert_eq!(joined, all);
    }

    #[test]
    fn undeclared_symbol_errors() {
        let o = test_ontology();
        let t = TemplateBuilder::new()
            .variable("x", "animal")
            .on("x", "table")
            .build();
        assert!(matches!(instantiate_all(&t, &o), Err(Error::Invalid(_))));
    }

    proptest::proptest! {
        // Counting oracle: |instantiate_all| equals the constrained
        // cross-product cardinality computed by brute-force nested loops.
        #[test]
        fn counts_match_oracle(
            use_distinct in proptest::bool::ANY,
            use_size in proptest::bool::ANY,
            roots in proptest::sample::subsequence(vec!["animal", "toy"], 1..=2),
        ) {
            let o = test_ontology();
            let mut b = TemplateBuilder::new();
            let names = ["x", "y"];
            for (name, root) in names.iter().zip(roots.iter()) {
                b.variable(name, root);
            }
            let nvars = roots.len();
            if use_distinct && nvars == 2 {
                b.distinct_types(&["x", "y"]);
            }
            if use_size && nvars == 2 {
                b.smaller_than(&"x".to_string(), "y");
            }
            let t = b.build();
            let got = instantiate_all(&t, &o).unwrap().len();

            // Independent oracle.
            let empty = BTreeSet::new();
            let sets: Vec<Vec<NodeId>> = roots
                .iter()
                .map(|r| {
                    o.template_fillers(&NodeId::new(r), &empty, &empty)
                        .unwrap()
                        .into_iter()
                        .collect()
                })
                .collect();
            let mut expected = 0usize;
            let singleton = vec![NodeId::new("dummy")];
            let second = if nvars == 2 { &sets[1] } else { &singleton };
            for a in &sets[0] {
                for bty in second {
                    if use_distinct && nvars == 2 && a == bty {
                        continue;
                    }
                    if use_size && nvars == 2 {
                        match (o.size_grade(a), o.size_grade(bty)) {
                            (Some(ga), Some(gb)) if ga < gb => {}
                            _ => continue,
                        }
                    }
                    expected += 1;
                }
            }
            proptest::prop_assert_eq!(got, expected);
        }
    }
}
