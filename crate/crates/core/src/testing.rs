//! Small hand-built ologs shared by unit tests.

use crate::category::{Path, PathCategory};
use crate::linguistics::{AuthorSet, NounPhrase, VerbPhrase};
use crate::olog::{AspectLabel, LinguisticStructure, Olog, TypeLabel};

pub(crate) fn authors(xs: &[&str]) -> AuthorSet {
    xs.iter().copied().collect()
}

/// Builds an olog where every label is endorsed by `{S}`.
pub(crate) struct Builder {
    name: String,
    category: PathCategory,
    structure: LinguisticStructure,
}

impl Builder {
    pub(crate) fn new(name: &str) -> Self {
        Builder {
            name: name.to_string(),
            category: PathCategory::new(),
            structure: LinguisticStructure::default(),
        }
    }

    pub(crate) fn ty(mut self, id: &str, noun: &str) -> Self {
        self.category.add_object(id).unwrap();
        self.structure.type_labels.insert(
            id.into(),
            TypeLabel {
                noun: NounPhrase::new(noun).unwrap(),
                authors: authors(&["S"]),
            },
        );
        self
    }

    pub(crate) fn aspect(mut self, id: &str, src: &str, tgt: &str, verb: &str) -> Self {
        self.category.add_generator(id, src, tgt).unwrap();
        self.structure.aspect_labels.insert(
            id.into(),
            AspectLabel {
                verb: VerbPhrase::atomic(verb).unwrap(),
                authors: authors(&["S"]),
            },
        );
        self
    }

    pub(crate) fn fact(mut self, id: &str, src: &str, lhs: &[&str], rhs: &[&str]) -> Self {
        self.category
            .add_equation(
                id,
                Path::new(src, lhs.iter().copied()),
                Path::new(src, rhs.iter().copied()),
            )
            .unwrap();
        self.structure
            .fact_authors
            .insert(id.into(), authors(&["S"]));
        self
    }

    pub(crate) fn build(self) -> Olog {
        Olog::new(self.name, self.category, self.structure)
    }
}

pub(crate) fn person_father() -> Olog {
    Builder::new("person-father")
        .ty("person", "a person")
        .ty("father", "a father")
        .aspect("has", "person", "father", "has")
        .build()
}

/// Person, parent pair, woman; mother = parents;w.
pub(crate) fn parents() -> Olog {
    Builder::new("parents")
        .ty("person", "a person")
        .ty("pair", "a pair (w,m) where w is a woman and m is a man")
        .ty("woman", "a woman")
        .aspect("parents", "person", "pair", "has as parents")
        .aspect("w", "pair", "woman", "yields as w")
        .aspect("mother", "person", "woman", "has as mother")
        .fact("F", "person", &["mother"], &["parents", "w"])
        .build()
}
