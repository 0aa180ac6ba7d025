//! Ologs: finitely presented categories whose objects and arrows carry English
//! noun and verb phrases endorsed by author sets, together with instances
//! (token tables), mappings between ologs, pullback, and a search for
//! instance morphisms that conform to a mapping.

pub mod bundle;
pub mod category;
pub mod cli;
pub mod dsl;
pub mod instance;
pub mod linguistics;
pub mod mapping;
pub mod olog;
pub mod report;
pub mod table;

#[cfg(test)]
mod testing;

pub use category::{
    CatFunctor, CategoryError, Equation, Generator, Path, PathCategory, PathEquality, DEFAULT_BOUND,
};
pub use dsl::{
    parse_mapping, parse_olog, serialize_mapping, serialize_olog, DslError, MappingDocument,
    OlogDocument,
};
pub use instance::{Instance, InstanceError};
pub use linguistics::{AuthorSet, NounPhrase, Sentence, VerbPhrase};
pub use mapping::{
    Correspondences, InstanceMorphism, MappingError, OlogMorphism, Orientation, SearchResult,
};
pub use olog::{AspectLabel, Fact, LinguisticStructure, Olog, OlogError, TypeLabel};
pub use report::{Finding, FindingKind, Severity, ValidationReport};
pub use table::{bind_table, load_table, InstanceTable, TableError, TableFragment};
