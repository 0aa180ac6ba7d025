//! Noun phrases, verb phrases, sentences and their English readings, plus the
//! author-set algebra used for endorsement.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LinguisticsError {
    #[error("noun phrase {0:?} must start with the indefinite article \"a\" or \"an\"")]
    BadNounPhrase(String),
    #[error("verb phrase must not be empty")]
    EmptyVerbPhrase,
    #[error("sentences are not parallel: ({0}) vs ({1})")]
    ShapeMismatch(String, String),
}

/// Collapses whitespace runs to single spaces and trims the ends.
fn tidy(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// A singular indefinite noun phrase such as "a person".
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct NounPhrase(String);

impl NounPhrase {
    pub fn new(text: &str) -> Result<Self, LinguisticsError> {
        let t = tidy(text);
        if article_len(&t).is_none() {
            return Err(LinguisticsError::BadNounPhrase(text.to_string()));
        }
        Ok(NounPhrase(t))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The phrase with its leading article removed ("a person" -> "person").
    pub fn without_article(&self) -> &str {
        let n = article_len(&self.0).expect("validated on construction");
        &self.0[n..]
    }
}

fn article_len(text: &str) -> Option<usize> {
    let lower = text.to_ascii_lowercase();
    ["a ", "an "]
        .into_iter()
        .find(|a| lower.starts_with(a) && text.len() > a.len())
        .map(str::len)
}

impl TryFrom<String> for NounPhrase {
    type Error = LinguisticsError;
    fn try_from(value: String) -> Result<Self, Self::Error> {
        NounPhrase::new(&value)
    }
}

impl From<NounPhrase> for String {
    fn from(n: NounPhrase) -> String {
        n.0
    }
}

impl fmt::Display for NounPhrase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A verb phrase connecting a subject noun phrase to an object noun phrase.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerbPhrase {
    /// The unit verb phrase, read "is of course".
    Unit,
    Atomic(String),
    /// `left`, then `right`, passing through the noun phrase `via`.
    Concat(Box<VerbPhrase>, NounPhrase, Box<VerbPhrase>),
}

pub const UNIT_READING: &str = "is of course";

impl VerbPhrase {
    pub fn atomic(text: &str) -> Result<Self, LinguisticsError> {
        let t = tidy(text);
        if t.is_empty() {
            return Err(LinguisticsError::EmptyVerbPhrase);
        }
        Ok(VerbPhrase::Atomic(t))
    }

    pub fn concat(left: VerbPhrase, via: NounPhrase, right: VerbPhrase) -> Self {
        VerbPhrase::Concat(Box::new(left), via, Box::new(right))
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, VerbPhrase::Unit)
    }

    /// The English reading.
    pub fn reading(&self) -> String {
        match self {
            VerbPhrase::Unit => UNIT_READING.to_string(),
            VerbPhrase::Atomic(t) => t.clone(),
            VerbPhrase::Concat(l, n, r) => format!("{} {}, which {}", l.reading(), n, r.reading()),
        }
    }

    /// Composite `self ; other` in canonical form: units are absorbed and the
    /// result is left-nested.
    pub fn then(&self, via: &NounPhrase, other: &VerbPhrase) -> VerbPhrase {
        VerbPhrase::concat(self.clone(), via.clone(), other.clone()).normalized()
    }

    /// Canonical representative: units dropped, concatenations left-nested.
    pub fn normalized(&self) -> VerbPhrase {
        let (atoms, vias) = self.flatten();
        let mut atoms = atoms.into_iter();
        let Some(first) = atoms.next() else {
            return VerbPhrase::Unit;
        };
        atoms
            .zip(vias)
            .fold(VerbPhrase::Atomic(first), |acc, (a, n)| {
                VerbPhrase::concat(acc, n, VerbPhrase::Atomic(a))
            })
    }

    fn flatten(&self) -> (Vec<String>, Vec<NounPhrase>) {
        match self {
            VerbPhrase::Unit => (Vec::new(), Vec::new()),
            VerbPhrase::Atomic(t) => (vec![t.clone()], Vec::new()),
            VerbPhrase::Concat(l, n, r) => {
                let (mut la, mut lv) = l.flatten();
                let (ra, rv) = r.flatten();
                if la.is_empty() {
                    return (ra, rv);
                }
                if ra.is_empty() {
                    return (la, lv);
                }
                la.extend(ra);
                lv.push(n.clone());
                lv.extend(rv);
                (la, lv)
            }
        }
    }
}

impl fmt::Display for VerbPhrase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.reading())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sentence {
    pub subject: NounPhrase,
    pub verb: VerbPhrase,
    pub object: NounPhrase,
}

impl Sentence {
    pub fn new(subject: NounPhrase, verb: VerbPhrase, object: NounPhrase) -> Self {
        Sentence {
            subject,
            verb,
            object,
        }
    }

    pub fn reading(&self) -> String {
        read_sentence(self)
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.reading())
    }
}

pub fn read_verb(v: &VerbPhrase) -> String {
    v.reading()
}

/// "<subject> <verb> <object>".
pub fn read_sentence(s: &Sentence) -> String {
    format!("{} {} {}", s.subject, s.verb.reading(), s.object)
}

/// Reading of the equivalence of two parallel sentences. The symbols `x`,
/// `y1` and `y2` are literal.
pub fn read_equivalence(first: &Sentence, second: &Sentence) -> Result<String, LinguisticsError> {
    if first.subject != second.subject || first.object != second.object {
        return Err(LinguisticsError::ShapeMismatch(
            first.reading(),
            second.reading(),
        ));
    }
    Ok(format!(
        "For any {} x, we know that x {} {}, that we call y1, and we know that x {} {}, \
         that we call y2; and the fact is, y1 and y2 are the same for any x.",
        first.subject.without_article(),
        first.verb.reading(),
        first.object,
        second.verb.reading(),
        second.object,
    ))
}

/// "<x> is <subject>, which <verb> <object>, namely <y>".
pub fn read_correspondence(s: &Sentence, x: &str, y: &str) -> String {
    format!(
        "{x} is {}, which {} {}, namely {y}",
        s.subject,
        s.verb.reading(),
        s.object
    )
}

/// A finite set of endorsing authors.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AuthorSet(BTreeSet<String>);

impl AuthorSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, author: &str) -> bool {
        self.0.contains(author)
    }

    pub fn insert(&mut self, author: impl Into<String>) -> bool {
        self.0.insert(author.into())
    }

    pub fn intersect(&self, other: &AuthorSet) -> AuthorSet {
        AuthorSet(self.0.intersection(&other.0).cloned().collect())
    }

    pub fn union(&self, other: &AuthorSet) -> AuthorSet {
        AuthorSet(self.0.union(&other.0).cloned().collect())
    }

    pub fn is_subset(&self, other: &AuthorSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &String> {
        self.0.iter()
    }
}

pub fn intersect_authors(a: &AuthorSet, b: &AuthorSet) -> AuthorSet {
    a.intersect(b)
}

impl<S: Into<String>> FromIterator<S> for AuthorSet {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        AuthorSet(iter.into_iter().map(Into::into).collect())
    }
}

impl fmt::Display for AuthorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{{}}}",
            self.0.iter().cloned().collect::<Vec<_>>().join(", ")
        )
    }
}
