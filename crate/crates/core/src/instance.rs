//! Instances: token sets on types and token functions on aspects.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::category::{CategoryError, Path};
use crate::linguistics::{read_correspondence, Sentence};
use crate::olog::{Olog, OlogError};
use crate::report::{Finding, FindingKind as K, ValidationReport};
use crate::table::TableFragment;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("`{token}` is not a token of `{object}`")]
    UnknownToken { object: String, token: String },
    #[error("function `{generator}` has no value at `{token}`")]
    MissingMapping { generator: String, token: String },
    #[error(transparent)]
    Olog(#[from] OlogError),
}

impl From<CategoryError> for InstanceError {
    fn from(e: CategoryError) -> Self {
        InstanceError::Olog(e.into())
    }
}

static EMPTY: BTreeSet<String> = BTreeSet::new();

/// Token sets per object and token functions per generator.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Instance {
    pub tokens: BTreeMap<String, BTreeSet<String>>,
    pub functions: BTreeMap<String, BTreeMap<String, String>>,
}

impl Instance {
    pub fn new() -> Self {
        Self::default()
    }

    /// Tokens of `object`; absent sets are empty.
    pub fn tokens_of(&self, object: &str) -> &BTreeSet<String> {
        self.tokens.get(object).unwrap_or(&EMPTY)
    }

    pub fn apply(&self, generator: &str, token: &str) -> Result<&str, InstanceError> {
        self.functions
            .get(generator)
            .and_then(|f| f.get(token))
            .map(String::as_str)
            .ok_or_else(|| InstanceError::MissingMapping {
                generator: generator.to_string(),
                token: token.to_string(),
            })
    }

    /// Applies the token functions along `p`, left to right.
    pub fn evaluate(&self, p: &Path, token: &str) -> Result<String, InstanceError> {
        if !self.tokens_of(p.source()).contains(token) {
            return Err(InstanceError::UnknownToken {
                object: p.source().to_string(),
                token: token.to_string(),
            });
        }
        let mut at = token;
        for a in p.arrows() {
            at = self.apply(a, at)?;
        }
        Ok(at.to_string())
    }

    /// Adds what a table contributes.
    pub fn absorb(&mut self, fragment: TableFragment) {
        match fragment {
            TableFragment::Tokens { object, tokens } => {
                self.tokens.entry(object).or_default().extend(tokens);
            }
            TableFragment::Function { generator, pairs } => {
                self.functions.entry(generator).or_default().extend(pairs);
            }
        }
    }

    /// Checks that every function is total on its declared source tokens and
    /// lands in its declared target tokens, and that every declared fact holds
    /// token by token.
    pub fn validate(&self, olog: &Olog) -> ValidationReport {
        let mut report = ValidationReport::new();
        let cat = &olog.category;

        for k in self.tokens.keys().filter(|k| !cat.has_object(k)) {
            report.push(Finding::error(
                K::UnknownTokenSet,
                k,
                "tokens for an unknown type",
            ));
        }
        for k in self.functions.keys().filter(|k| cat.generator(k).is_none()) {
            report.push(Finding::error(
                K::UnknownFunction,
                k,
                "function for an unknown aspect",
            ));
        }

        for g in cat.generators() {
            let empty = BTreeMap::new();
            let f = self.functions.get(&g.id).unwrap_or(&empty);
            let domain = self.tokens_of(&g.source);
            let codomain = self.tokens_of(&g.target);
            for x in domain.iter().filter(|x| !f.contains_key(*x)) {
                report.push(Finding::error(
                    K::Totality,
                    &g.id,
                    format!("no value for token `{x}` of `{}`", g.source),
                ));
            }
            for (x, y) in f {
                if !domain.contains(x) {
                    report.push(Finding::error(
                        K::UndeclaredToken,
                        &g.id,
                        format!("`{x}` is not a declared token of `{}`", g.source),
                    ));
                }
                if !codomain.contains(y) {
                    report.push(Finding::error(
                        K::Range,
                        &g.id,
                        format!(
                            "`{x}` maps to `{y}`, which is not a declared token of `{}`",
                            g.target
                        ),
                    ));
                }
            }
        }

        for eq in cat.equations() {
            for x in self.tokens_of(eq.lhs.source()) {
                let (Ok(l), Ok(r)) = (self.evaluate(&eq.lhs, x), self.evaluate(&eq.rhs, x)) else {
                    continue;
                };
                if l != r {
                    report.push(Finding::error(
                        K::FactViolation,
                        &eq.id,
                        format!(
                            "token `{x}`: {} gives `{l}` but {} gives `{r}`",
                            eq.lhs, eq.rhs
                        ),
                    ));
                }
            }
        }
        report
    }

    /// One correspondence sentence per token of the source of `generator`.
    pub fn render_correspondences(
        &self,
        olog: &Olog,
        generator: &str,
    ) -> Result<Vec<String>, InstanceError> {
        let p = olog.category.generator_path(generator)?;
        self.render_correspondences_along(olog, &p)
    }

    /// Correspondence sentences for an arbitrary path; the identity path reads
    /// with the unit verb phrase.
    pub fn render_correspondences_along(
        &self,
        olog: &Olog,
        p: &Path,
    ) -> Result<Vec<String>, InstanceError> {
        let target = olog.category.target(p)?;
        let sentence = Sentence::new(
            olog.noun(p.source())?.clone(),
            olog.derived_aspect(p)?.verb,
            olog.noun(&target)?.clone(),
        );
        self.tokens_of(p.source())
            .iter()
            .map(|x| Ok(read_correspondence(&sentence, x, &self.evaluate(p, x)?)))
            .collect()
    }

    /// Drops everything that is not part of `sub`.
    pub fn restrict_to(&self, sub: &Olog) -> Instance {
        Instance {
            tokens: self
                .tokens
                .iter()
                .filter(|(k, _)| sub.category.has_object(k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
            functions: self
                .functions
                .iter()
                .filter(|(k, _)| sub.category.generator(k).is_some())
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{parents, person_father};

    fn bush() -> Instance {
        let mut i = Instance::new();
        i.tokens.insert(
            "person".into(),
            ["George W. Bush", "Jeb Bush", "Emmy Noether"]
                .map(String::from)
                .into(),
        );
        i.tokens.insert(
            "father".into(),
            ["George H. W. Bush", "Max Noether", "Bill Clinton"]
                .map(String::from)
                .into(),
        );
        i.functions.insert(
            "has".into(),
            [
                ("George W. Bush", "George H. W. Bush"),
                ("Jeb Bush", "George H. W. Bush"),
                ("Emmy Noether", "Max Noether"),
            ]
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .into(),
        );
        i
    }

    #[test]
    fn identity_evaluation() {
        let i = bush();
        assert_eq!(
            i.evaluate(&Path::identity("person"), "Jeb Bush").unwrap(),
            "Jeb Bush"
        );
        assert_eq!(
            i.evaluate(&Path::identity("person"), "Nobody"),
            Err(InstanceError::UnknownToken {
                object: "person".into(),
                token: "Nobody".into()
            })
        );
    }

    #[test]
    fn single_step_evaluation() {
        let i = bush();
        assert_eq!(
            i.evaluate(&Path::new("person", ["has"]), "George W. Bush")
                .unwrap(),
            "George H. W. Bush"
        );
    }

    /// Composite evaluation against a hand composition of the two tables.
    #[test]
    fn two_step_evaluation() {
        let mut i = Instance::new();
        i.tokens
            .insert("a".into(), ["1", "2", "3"].map(String::from).into());
        i.tokens
            .insert("b".into(), ["p", "q"].map(String::from).into());
        i.tokens
            .insert("c".into(), ["X", "Y"].map(String::from).into());
        i.functions.insert(
            "f".into(),
            [("1", "p"), ("2", "q"), ("3", "p")]
                .map(|(a, b)| (a.into(), b.into()))
                .into(),
        );
        i.functions.insert(
            "g".into(),
            [("p", "Y"), ("q", "X")]
                .map(|(a, b)| (a.into(), b.into()))
                .into(),
        );
        let fg = Path::new("a", ["f", "g"]);
        let expected = [("1", "Y"), ("2", "X"), ("3", "Y")];
        for (x, y) in expected {
            assert_eq!(i.evaluate(&fg, x).unwrap(), y);
        }
    }

    #[test]
    fn bush_instance_validates() {
        assert!(bush().validate(&person_father()).is_empty());
    }

    #[test]
    fn deleted_row_is_one_totality_violation() {
        let mut i = bush();
        i.functions.get_mut("has").unwrap().remove("Jeb Bush");
        let r = i.validate(&person_father());
        assert_eq!(r.len(), 1);
        assert_eq!(r.count(K::Totality), 1);
    }

    #[test]
    fn undeclared_tokens_in_function_columns() {
        let mut i = bush();
        i.functions
            .get_mut("has")
            .unwrap()
            .insert("Neil Bush".into(), "Someone".into());
        let r = i.validate(&person_father());
        assert_eq!(r.count(K::UndeclaredToken), 1);
        assert_eq!(r.count(K::Range), 1);
    }

    /// Two persons; Ann's mother disagrees with the w of her parent pair.
    #[test]
    fn fact_violation_names_the_token() {
        let o = parents();
        let mut i = Instance::new();
        i.tokens
            .insert("person".into(), ["Ann", "Bob"].map(String::from).into());
        i.tokens.insert(
            "pair".into(),
            ["(Cat,Dan)", "(Eve,Fay)"].map(String::from).into(),
        );
        i.tokens
            .insert("woman".into(), ["Cat", "Eve"].map(String::from).into());
        i.functions.insert(
            "parents".into(),
            [("Ann", "(Cat,Dan)"), ("Bob", "(Eve,Fay)")]
                .map(|(a, b)| (a.into(), b.into()))
                .into(),
        );
        i.functions.insert(
            "w".into(),
            [("(Cat,Dan)", "Cat"), ("(Eve,Fay)", "Eve")]
                .map(|(a, b)| (a.into(), b.into()))
                .into(),
        );
        i.functions.insert(
            "mother".into(),
            [("Ann", "Eve"), ("Bob", "Eve")]
                .map(|(a, b)| (a.into(), b.into()))
                .into(),
        );
        let r = i.validate(&o);
        assert_eq!(r.len(), 1, "{r}");
        assert_eq!(r.count(K::FactViolation), 1);
        assert!(r.findings[0].message.contains("`Ann`"));

        i.functions
            .get_mut("mother")
            .unwrap()
            .insert("Ann".into(), "Cat".into());
        assert!(i.validate(&o).is_empty());
    }

    #[test]
    fn correspondence_sentences() {
        let o = person_father();
        let lines = bush().render_correspondences(&o, "has").unwrap();
        assert_eq!(
            lines,
            [
                "Emmy Noether is a person, which has a father, namely Max Noether",
                "George W. Bush is a person, which has a father, namely George H. W. Bush",
                "Jeb Bush is a person, which has a father, namely George H. W. Bush",
            ]
        );
        assert!(Instance::new()
            .render_correspondences(&o, "has")
            .unwrap()
            .is_empty());
        let unit = bush()
            .render_correspondences_along(&o, &Path::identity("father"))
            .unwrap();
        assert_eq!(
            unit[0],
            "Bill Clinton is a father, which is of course a father, namely Bill Clinton"
        );
        assert!(bush().render_correspondences(&o, "nope").is_err());
    }
}
