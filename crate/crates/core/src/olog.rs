//! Ologs: a presented category together with a linguistic structure (noun
//! phrases on objects, verb phrases on generators, author sets everywhere).
//!
//! Only generators carry labels. The aspect of a composite path is always
//! derived by concatenating generator labels and intersecting their author
//! sets.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::category::{CategoryError, Path, PathCategory, PathEquality};
use crate::linguistics::{
    read_equivalence, AuthorSet, LinguisticsError, NounPhrase, Sentence, VerbPhrase,
};
use crate::report::{Finding, FindingKind as K, ValidationReport};

/// Prefix reserved for identifiers of synthesized facts.
pub const DERIVED_PREFIX: &str = "~derived/";

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OlogError {
    #[error("invalid path: {0}")]
    InvalidPath(#[from] CategoryError),
    #[error("object `{0}` has no type label")]
    MissingTypeLabel(String),
    #[error("generator `{0}` has no aspect label")]
    MissingAspectLabel(String),
    #[error("unknown equation `{0}`")]
    UnknownEquation(String),
    #[error("facts `{0}` and `{1}` do not compose")]
    FactsDoNotCompose(String, String),
    #[error(transparent)]
    Linguistics(#[from] LinguisticsError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeLabel {
    pub noun: NounPhrase,
    pub authors: AuthorSet,
}

/// A verb phrase with its endorsing authors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AspectLabel {
    pub verb: VerbPhrase,
    pub authors: AuthorSet,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LinguisticStructure {
    pub type_labels: BTreeMap<String, TypeLabel>,
    pub aspect_labels: BTreeMap<String, AspectLabel>,
    pub fact_authors: BTreeMap<String, AuthorSet>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Olog {
    pub name: String,
    pub category: PathCategory,
    pub structure: LinguisticStructure,
}

impl Olog {
    pub fn new(
        name: impl Into<String>,
        category: PathCategory,
        structure: LinguisticStructure,
    ) -> Self {
        Olog {
            name: name.into(),
            category,
            structure,
        }
    }

    pub fn type_label(&self, object: &str) -> Result<&TypeLabel, OlogError> {
        self.structure
            .type_labels
            .get(object)
            .ok_or_else(|| OlogError::MissingTypeLabel(object.to_string()))
    }

    pub fn aspect_label(&self, generator: &str) -> Result<&AspectLabel, OlogError> {
        self.structure
            .aspect_labels
            .get(generator)
            .ok_or_else(|| OlogError::MissingAspectLabel(generator.to_string()))
    }

    pub fn noun(&self, object: &str) -> Result<&NounPhrase, OlogError> {
        Ok(&self.type_label(object)?.noun)
    }

    /// Aspect of a path. Identity paths give the unit verb phrase endorsed by
    /// the authors of the type; a single generator gives its stored label.
    pub fn derived_aspect(&self, p: &Path) -> Result<AspectLabel, OlogError> {
        self.category.target(p)?;
        let Some((first, rest)) = p.arrows().split_first() else {
            return Ok(AspectLabel {
                verb: VerbPhrase::Unit,
                authors: self.type_label(p.source())?.authors.clone(),
            });
        };
        let mut acc = self.aspect_label(first)?.clone();
        let mut at = self.generator_target(first)?;
        for a in rest {
            let label = self.aspect_label(a)?;
            acc.verb = acc.verb.then(self.noun(&at)?, &label.verb);
            acc.authors = acc.authors.intersect(&label.authors);
            at = self.generator_target(a)?;
        }
        Ok(acc)
    }

    pub fn derived_authors(&self, p: &Path) -> Result<AuthorSet, OlogError> {
        Ok(self.derived_aspect(p)?.authors)
    }

    fn generator_target(&self, g: &str) -> Result<String, OlogError> {
        Ok(self
            .category
            .generator(g)
            .ok_or_else(|| CategoryError::UnknownGenerator(g.to_string()))?
            .target
            .clone())
    }

    /// The sentence read along a path.
    pub fn sentence(&self, p: &Path) -> Result<Sentence, OlogError> {
        let target = self.category.target(p)?;
        Ok(Sentence::new(
            self.noun(p.source())?.clone(),
            self.derived_aspect(p)?.verb,
            self.noun(&target)?.clone(),
        ))
    }

    /// Checks labels and every author-set constraint. An empty report means
    /// the olog is well formed.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        let s = &self.structure;

        for obj in self.category.objects() {
            if !s.type_labels.contains_key(obj) {
                report.push(Finding::error(
                    K::MissingLabel,
                    obj,
                    "type has no noun phrase",
                ));
            }
        }
        for k in s
            .type_labels
            .keys()
            .filter(|k| !self.category.has_object(k))
        {
            report.push(Finding::error(
                K::UnknownLabel,
                k,
                "label for an unknown object",
            ));
        }
        for k in s
            .aspect_labels
            .keys()
            .filter(|k| self.category.generator(k).is_none())
        {
            report.push(Finding::error(
                K::UnknownLabel,
                k,
                "label for an unknown generator",
            ));
        }
        for k in s
            .fact_authors
            .keys()
            .filter(|k| self.category.equation(k).is_none())
        {
            report.push(Finding::error(
                K::UnknownLabel,
                k,
                "authors for an unknown equation",
            ));
        }

        for g in self.category.generators() {
            let Some(label) = s.aspect_labels.get(&g.id) else {
                report.push(Finding::error(
                    K::MissingLabel,
                    &g.id,
                    "aspect has no verb phrase",
                ));
                continue;
            };
            let (Some(src), Some(tgt)) =
                (s.type_labels.get(&g.source), s.type_labels.get(&g.target))
            else {
                continue;
            };
            let allowed = src.authors.intersect(&tgt.authors);
            if !label.authors.is_subset(&allowed) {
                report.push(Finding::error(
                    K::AspectAuthors,
                    &g.id,
                    format!(
                        "aspect authors {} are not contained in Auth({}) ∩ Auth({}) = {allowed}",
                        label.authors, g.source, g.target
                    ),
                ));
            }
        }

        for eq in self.category.equations() {
            let Some(authors) = s.fact_authors.get(&eq.id) else {
                report.push(Finding::error(
                    K::MissingLabel,
                    &eq.id,
                    "fact has no author set",
                ));
                continue;
            };
            let (Ok(l), Ok(r)) = (self.derived_authors(&eq.lhs), self.derived_authors(&eq.rhs))
            else {
                continue;
            };
            let allowed = l.intersect(&r);
            if !authors.is_subset(&allowed) {
                report.push(Finding::error(
                    K::FactAuthors,
                    &eq.id,
                    format!(
                        "fact authors {authors} are not contained in Auth({}) ∩ Auth({}) = {allowed}",
                        eq.lhs, eq.rhs
                    ),
                ));
            }
        }
        report
    }

    /// English reading of a declared fact, left side first.
    pub fn read_fact(&self, equation: &str) -> Result<String, OlogError> {
        let eq = self
            .category
            .equation(equation)
            .ok_or_else(|| OlogError::UnknownEquation(equation.to_string()))?;
        Ok(read_equivalence(
            &self.sentence(&eq.lhs)?,
            &self.sentence(&eq.rhs)?,
        )?)
    }

    /// The sub-olog of everything `author` endorses.
    pub fn restrict_to_author(&self, author: &str) -> Olog {
        let s = &self.structure;
        let mut category = PathCategory::new();
        let mut structure = LinguisticStructure::default();

        for obj in self.category.objects() {
            if let Some(label) = s
                .type_labels
                .get(obj)
                .filter(|l| l.authors.contains(author))
            {
                category.add_object(obj.clone()).expect("ids are unique");
                structure.type_labels.insert(obj.clone(), label.clone());
            }
        }
        for g in self.category.generators() {
            let Some(label) = s
                .aspect_labels
                .get(&g.id)
                .filter(|l| l.authors.contains(author))
            else {
                continue;
            };
            if category
                .add_generator(g.id.clone(), g.source.clone(), g.target.clone())
                .is_ok()
            {
                structure.aspect_labels.insert(g.id.clone(), label.clone());
            }
        }
        for eq in self.category.equations() {
            let Some(authors) = s.fact_authors.get(&eq.id).filter(|a| a.contains(author)) else {
                continue;
            };
            if category
                .add_equation(eq.id.clone(), eq.lhs.clone(), eq.rhs.clone())
                .is_ok()
            {
                structure
                    .fact_authors
                    .insert(eq.id.clone(), authors.clone());
            }
        }
        Olog::new(format!("{}|{author}", self.name), category, structure)
    }

    /// A declared equation as a fact.
    pub fn fact(&self, equation: &str) -> Result<Fact, OlogError> {
        let eq = self
            .category
            .equation(equation)
            .ok_or_else(|| OlogError::UnknownEquation(equation.to_string()))?;
        Ok(Fact {
            id: eq.id.clone(),
            lhs: eq.lhs.clone(),
            rhs: eq.rhs.clone(),
            authors: self
                .structure
                .fact_authors
                .get(&eq.id)
                .cloned()
                .unwrap_or_default(),
        })
    }

    /// Checks a (possibly synthesized) fact: the sides must be parallel and
    /// provably equal within `bound` rewrites, and its authors must endorse
    /// both sides.
    pub fn check_fact(&self, fact: &Fact, bound: usize) -> ValidationReport {
        let mut report = ValidationReport::new();
        match self.category.path_equal(&fact.lhs, &fact.rhs, bound) {
            Ok(PathEquality::Equal) => {}
            Ok(PathEquality::NotProvedWithinBound) => report.push(Finding::error(
                K::FactNotProved,
                &fact.id,
                format!(
                    "{} and {} not proved equal within {bound} rewrites",
                    fact.lhs, fact.rhs
                ),
            )),
            Err(e) => {
                report.push(Finding::error(K::FactNotProved, &fact.id, e.to_string()));
                return report;
            }
        }
        match (
            self.derived_authors(&fact.lhs),
            self.derived_authors(&fact.rhs),
        ) {
            (Ok(l), Ok(r)) => {
                let allowed = l.intersect(&r);
                if !fact.authors.is_subset(&allowed) {
                    report.push(Finding::error(
                        K::FactAuthors,
                        &fact.id,
                        format!(
                            "fact authors {} are not contained in {allowed}",
                            fact.authors
                        ),
                    ));
                }
            }
            (Err(e), _) | (_, Err(e)) => {
                report.push(Finding::error(K::MissingLabel, &fact.id, e.to_string()))
            }
        }
        report
    }

    /// Adds a fact as a new declared equation with its author set.
    pub fn with_fact(&self, fact: &Fact) -> Result<Olog, OlogError> {
        let mut out = self.clone();
        out.category
            .add_equation(fact.id.clone(), fact.lhs.clone(), fact.rhs.clone())?;
        out.structure
            .fact_authors
            .insert(fact.id.clone(), fact.authors.clone());
        Ok(out)
    }
}

fn derived_id(parts: std::fmt::Arguments<'_>) -> String {
    let raw = parts.to_string().replace(DERIVED_PREFIX, "");
    format!("{DERIVED_PREFIX}{raw}")
}

/// An endorsed equivalence between two parallel paths.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fact {
    pub id: String,
    pub lhs: Path,
    pub rhs: Path,
    pub authors: AuthorSet,
}

impl Fact {
    /// The identity fact on `p`, endorsed by everyone endorsing `p`.
    pub fn identity(olog: &Olog, p: &Path) -> Result<Fact, OlogError> {
        Ok(Fact {
            id: derived_id(format_args!("id{p}")),
            lhs: p.clone(),
            rhs: p.clone(),
            authors: olog.derived_authors(p)?,
        })
    }

    pub fn reversed(&self) -> Fact {
        Fact {
            id: derived_id(format_args!("{}^op", self.id)),
            lhs: self.rhs.clone(),
            rhs: self.lhs.clone(),
            authors: self.authors.clone(),
        }
    }

    /// Vertical composite: from `self.lhs` to `next.rhs` through the shared
    /// middle path, endorsed by the intersection of both author sets.
    pub fn then(&self, next: &Fact) -> Result<Fact, OlogError> {
        if self.rhs != next.lhs {
            return Err(OlogError::FactsDoNotCompose(
                self.id.clone(),
                next.id.clone(),
            ));
        }
        Ok(Fact {
            id: derived_id(format_args!("{}.{}", self.id, next.id)),
            lhs: self.lhs.clone(),
            rhs: next.rhs.clone(),
            authors: self.authors.intersect(&next.authors),
        })
    }

    /// Horizontal composite: `self.lhs;other.lhs` against `self.rhs;other.rhs`.
    pub fn beside(&self, other: &Fact, olog: &Olog) -> Result<Fact, OlogError> {
        let cat = &olog.category;
        let compose = |a: &Path, b: &Path| {
            cat.compose(a, b)
                .map_err(|_| OlogError::FactsDoNotCompose(self.id.clone(), other.id.clone()))
        };
        Ok(Fact {
            id: derived_id(format_args!("{}*{}", self.id, other.id)),
            lhs: compose(&self.lhs, &other.lhs)?,
            rhs: compose(&self.rhs, &other.rhs)?,
            authors: self.authors.intersect(&other.authors),
        })
    }
}
