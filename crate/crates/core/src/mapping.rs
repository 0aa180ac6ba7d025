//! Mappings between ologs.
//!
//! An [`OlogMorphism`] is a functor of underlying categories plus, for each
//! source type, a component aspect into the image type, and for each source
//! generator the authors endorsing the square fact formed with the two
//! components. Data moves backwards along the functor: an instance `J` on the
//! target pulls back to `J∘F` on the source, and an instance morphism picks,
//! per source type, a function from source tokens to pulled-back tokens.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::category::{CatFunctor, CategoryError, Generator, Path, PathCategory, DEFAULT_BOUND};
use crate::instance::{Instance, InstanceError};
use crate::linguistics::{read_equivalence, AuthorSet, Sentence, VerbPhrase};
use crate::olog::{AspectLabel, LinguisticStructure, Olog, OlogError, TypeLabel};
use crate::report::{Finding, FindingKind as K, ValidationReport};

/// Default cap on the number of candidates [`search_conforming`] enumerates.
pub const DEFAULT_SEARCH_LIMIT: u128 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MappingError {
    #[error("invalid functor:\n{0}")]
    InvalidFunctor(ValidationReport),
    #[error("search space has {candidates} candidates, limit is {limit}")]
    SearchSpaceTooLarge { candidates: u128, limit: u128 },
    #[error(transparent)]
    Olog(#[from] OlogError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

impl From<CategoryError> for MappingError {
    fn from(e: CategoryError) -> Self {
        MappingError::Olog(e.into())
    }
}

/// Which way the component aspects point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// Components `L(c) ⇝ M(Fc)`; instance morphisms `I ⇒ J∘F`.
    Forward,
    /// Components `M(Fc) ⇝ L(c)`; instance morphisms `J∘F ⇒ I`.
    Reversed,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OlogMorphism {
    pub name: String,
    pub functor: CatFunctor,
    pub components: BTreeMap<String, AspectLabel>,
    pub square_authors: BTreeMap<String, AuthorSet>,
}

/// The square fact of a generator `f: c → c'`: two parallel sentences from
/// the component's source noun to the image of `c'`, and who endorses that
/// they agree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Square {
    pub generator: String,
    pub first: Sentence,
    pub first_authors: AuthorSet,
    pub second: Sentence,
    pub second_authors: AuthorSet,
    pub authors: AuthorSet,
}

impl Square {
    pub fn reversed(&self) -> Square {
        Square {
            generator: self.generator.clone(),
            first: self.second.clone(),
            first_authors: self.second_authors.clone(),
            second: self.first.clone(),
            second_authors: self.first_authors.clone(),
            authors: self.authors.clone(),
        }
    }

    pub fn reading(&self) -> String {
        read_equivalence(&self.first, &self.second).expect("square sides are parallel")
    }

    pub fn check(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        let allowed = self.first_authors.intersect(&self.second_authors);
        if !self.authors.is_subset(&allowed) {
            report.push(Finding::error(
                K::SquareAuthors,
                &self.generator,
                format!(
                    "square authors {} are not contained in the authors of both sides {allowed}",
                    self.authors
                ),
            ));
        } else if self.authors.is_empty() {
            report.push(Finding::note(
                K::EmptySquareAuthors,
                &self.generator,
                "nobody endorses this square",
            ));
        }
        report
    }
}

impl OlogMorphism {
    /// The pair (source olog, target olog) in the order the components read.
    fn ends<'a>(
        &self,
        o: Orientation,
        src: &'a Olog,
        dst: &'a Olog,
        c: &str,
    ) -> Result<(&'a TypeLabel, &'a TypeLabel), MappingError> {
        let here = src.type_label(c)?;
        let there = dst.type_label(self.functor.map_object(c)?)?;
        Ok(match o {
            Orientation::Forward => (here, there),
            Orientation::Reversed => (there, here),
        })
    }

    pub fn component(&self, c: &str) -> Result<&AspectLabel, MappingError> {
        self.components
            .get(c)
            .ok_or_else(|| MappingError::Olog(OlogError::MissingAspectLabel(c.to_string())))
    }

    /// The square for generator `g` of `src`.
    pub fn square(
        &self,
        o: Orientation,
        src: &Olog,
        dst: &Olog,
        g: &Generator,
    ) -> Result<Square, MappingError> {
        let image = self
            .functor
            .apply(&Path::new(g.source.clone(), [g.id.clone()]))?;
        let here = src.derived_aspect(&Path::new(g.source.clone(), [g.id.clone()]))?;
        let there = dst.derived_aspect(&image)?;
        let (top, bottom) = (self.component(&g.source)?, self.component(&g.target)?);
        let (c_from, c_to) = self.ends(o, src, dst, &g.source)?;
        let (t_from, t_to) = self.ends(o, src, dst, &g.target)?;
        // Both sides run from the component source of c to the component
        // target of c'.
        let (down_first, down_second) = match o {
            Orientation::Forward => (&here, &there),
            Orientation::Reversed => (&there, &here),
        };
        let first = Sentence::new(
            c_from.noun.clone(),
            down_first.verb.then(&t_from.noun, &bottom.verb),
            t_to.noun.clone(),
        );
        let second = Sentence::new(
            c_from.noun.clone(),
            top.verb.then(&c_to.noun, &down_second.verb),
            t_to.noun.clone(),
        );
        Ok(Square {
            generator: g.id.clone(),
            first,
            first_authors: down_first.authors.intersect(&bottom.authors),
            second,
            second_authors: top.authors.intersect(&down_second.authors),
            authors: self.square_authors.get(&g.id).cloned().unwrap_or_default(),
        })
    }
}

/// Checks that `m` is a linguistic functor from `src` to `dst`: the functor
/// is valid, every component is endorsed only by authors of both its types,
/// and every square is endorsed only by authors of both its sides.
pub fn validate_linguistic_functor(
    m: &OlogMorphism,
    src: &Olog,
    dst: &Olog,
    bound: usize,
) -> ValidationReport {
    validate_oriented(m, Orientation::Forward, src, dst, bound)
}

pub fn validate_oriented(
    m: &OlogMorphism,
    o: Orientation,
    src: &Olog,
    dst: &Olog,
    bound: usize,
) -> ValidationReport {
    let mut report = m.functor.validate(&src.category, &dst.category, bound);
    if !report.is_ok() {
        return report;
    }

    for c in src.category.objects() {
        let Some(comp) = m.components.get(c) else {
            report.push(Finding::error(
                K::MissingComponent,
                c,
                "type has no component aspect",
            ));
            continue;
        };
        let Ok((from, to)) = m.ends(o, src, dst, c) else {
            continue;
        };
        let allowed = from.authors.intersect(&to.authors);
        if !comp.authors.is_subset(&allowed) {
            report.push(Finding::error(
                K::ComponentAuthors,
                c,
                format!(
                    "component authors {} are not contained in Auth({}) ∩ Auth({}) = {allowed}",
                    comp.authors, from.noun, to.noun
                ),
            ));
        }
    }
    for k in m.components.keys().filter(|k| !src.category.has_object(k)) {
        report.push(Finding::error(
            K::UnknownObject,
            k,
            "component for an unknown type",
        ));
    }
    for k in m
        .square_authors
        .keys()
        .filter(|k| src.category.generator(k).is_none())
    {
        report.push(Finding::error(
            K::UnknownGenerator,
            k,
            "square for an unknown aspect",
        ));
    }

    for g in src.category.generators() {
        match m.square(o, src, dst, g) {
            Ok(sq) => report.extend(sq.check()),
            // Missing components are already reported above.
            Err(MappingError::Olog(OlogError::MissingAspectLabel(_))) => {}
            Err(e) => report.push(Finding::error(K::MissingLabel, &g.id, e.to_string())),
        }
    }
    report
}

fn checked_functor(
    f: &CatFunctor,
    src: &PathCategory,
    dst: &PathCategory,
) -> Result<(), MappingError> {
    let report = f.validate(src, dst, DEFAULT_BOUND);
    if report.is_ok() {
        Ok(())
    } else {
        Err(MappingError::InvalidFunctor(report))
    }
}

/// `F*(M)`: the labels of `m` read along `f`. Fact authors are everyone who
/// endorses both image sides.
pub fn pullback_structure(
    f: &CatFunctor,
    src: &PathCategory,
    m: &Olog,
) -> Result<LinguisticStructure, MappingError> {
    checked_functor(f, src, &m.category)?;
    let mut out = LinguisticStructure::default();
    for c in src.objects() {
        out.type_labels
            .insert(c.clone(), m.type_label(f.map_object(c)?)?.clone());
    }
    for g in src.generators() {
        let image = f.apply(&Path::new(g.source.clone(), [g.id.clone()]))?;
        let mut label = m.derived_aspect(&image)?;
        label.verb = label.verb.normalized();
        out.aspect_labels.insert(g.id.clone(), label);
    }
    for eq in src.equations() {
        let l = m.derived_authors(&f.apply(&eq.lhs)?)?;
        let r = m.derived_authors(&f.apply(&eq.rhs)?)?;
        out.fact_authors.insert(eq.id.clone(), l.intersect(&r));
    }
    Ok(out)
}

/// `(C, F*(M))` as an olog.
pub fn pullback_olog(
    f: &CatFunctor,
    src: &PathCategory,
    m: &Olog,
    name: impl Into<String>,
) -> Result<Olog, MappingError> {
    Ok(Olog::new(name, src.clone(), pullback_structure(f, src, m)?))
}

/// `J∘F`: tokens of each image type, token functions evaluated along images.
pub fn pullback_instance(
    f: &CatFunctor,
    src: &PathCategory,
    dst: &PathCategory,
    j: &Instance,
) -> Result<Instance, MappingError> {
    checked_functor(f, src, dst)?;
    let mut out = Instance::new();
    for c in src.objects() {
        out.tokens
            .insert(c.clone(), j.tokens_of(f.map_object(c)?).clone());
    }
    for g in src.generators() {
        let image = f.apply(&Path::new(g.source.clone(), [g.id.clone()]))?;
        let table = j
            .tokens_of(image.source())
            .iter()
            .map(|x| Ok((x.clone(), j.evaluate(&image, x)?)))
            .collect::<Result<_, InstanceError>>()?;
        out.functions.insert(g.id.clone(), table);
    }
    Ok(out)
}

/// The cartesian morphism `(C, F*(M)) → (D, M)` over `f`: unit components
/// endorsed by the type authors and squares endorsed by the aspect authors.
pub fn cartesian_lift(
    f: &CatFunctor,
    src: &PathCategory,
    m: &Olog,
) -> Result<(Olog, OlogMorphism), MappingError> {
    let pulled = pullback_olog(f, src, m, format!("{}*", m.name))?;
    let components = pulled
        .structure
        .type_labels
        .iter()
        .map(|(c, t)| {
            (
                c.clone(),
                AspectLabel {
                    verb: VerbPhrase::Unit,
                    authors: t.authors.clone(),
                },
            )
        })
        .collect();
    let square_authors = pulled
        .structure
        .aspect_labels
        .iter()
        .map(|(g, a)| (g.clone(), a.authors.clone()))
        .collect();
    let morphism = OlogMorphism {
        name: format!("{}-cartesian", m.name),
        functor: f.clone(),
        components,
        square_authors,
    };
    Ok((pulled, morphism))
}

/// Per source type, a function on tokens.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct InstanceMorphism {
    pub components: BTreeMap<String, BTreeMap<String, String>>,
}

impl InstanceMorphism {
    pub fn apply(&self, c: &str, x: &str) -> Option<&str> {
        self.components.get(c)?.get(x).map(String::as_str)
    }
}

impl fmt::Display for InstanceMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, table) in &self.components {
            for (x, y) in table {
                writeln!(f, "{c}: {x} -> {y}")?;
            }
        }
        Ok(())
    }
}

/// Endorsed (token, token) pairs per source type.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Correspondences {
    pub pairs: BTreeMap<String, BTreeSet<(String, String)>>,
}

impl Correspondences {
    pub fn endorses(&self, c: &str, x: &str, y: &str) -> bool {
        self.pairs
            .get(c)
            .is_some_and(|s| s.contains(&(x.to_string(), y.to_string())))
    }

    /// Reads the endorsed pairs as an instance morphism, when each token is
    /// paired with exactly one other.
    pub fn as_morphism(&self) -> Option<InstanceMorphism> {
        let mut out = InstanceMorphism::default();
        for (c, pairs) in &self.pairs {
            let table = out.components.entry(c.clone()).or_default();
            for (x, y) in pairs {
                if table.insert(x.clone(), y.clone()).is_some() {
                    return None;
                }
            }
        }
        Some(out)
    }
}

/// Header of the correspondence table for type `c`.
pub fn correspondence_header(
    m: &OlogMorphism,
    o: Orientation,
    src: &Olog,
    dst: &Olog,
    c: &str,
) -> Result<Vec<String>, MappingError> {
    let (from, to) = m.ends(o, src, dst, c)?;
    Ok(vec![
        from.noun.to_string(),
        crate::table::correspondence_heading(&m.component(c)?.verb, &to.noun),
    ])
}

/// Checks that `p: from ⇒ to` is a natural transformation of instances on
/// `cat`: each component is total and lands in the target tokens, and for
/// every generator `f: c → c'` and token `x`, `p_c'(from(f)(x)) = to(f)(p_c(x))`.
pub fn check_natural(
    cat: &PathCategory,
    from: &Instance,
    to: &Instance,
    p: &InstanceMorphism,
) -> ValidationReport {
    let mut report = ValidationReport::new();
    for c in cat.objects() {
        let targets = to.tokens_of(c);
        for x in from.tokens_of(c) {
            match p.apply(c, x) {
                None => report.push(Finding::error(
                    K::Totality,
                    c,
                    format!("no value for token `{x}`"),
                )),
                Some(y) if !targets.contains(y) => report.push(Finding::error(
                    K::Range,
                    c,
                    format!("`{x}` maps to `{y}`, which is not a target token"),
                )),
                Some(_) => {}
            }
        }
    }
    for k in p.components.keys().filter(|k| !cat.has_object(k)) {
        report.push(Finding::error(
            K::UnknownObject,
            k,
            "component for an unknown type",
        ));
    }
    for g in cat.generators() {
        for x in from.tokens_of(&g.source) {
            let down_then_across = from
                .apply(&g.id, x)
                .ok()
                .and_then(|fx| p.apply(&g.target, fx));
            let across_then_down = p
                .apply(&g.source, x)
                .and_then(|px| to.apply(&g.id, px).ok());
            if let (Some(a), Some(b)) = (down_then_across, across_then_down) {
                if a != b {
                    report.push(Finding::error(
                        K::Naturality,
                        &g.id,
                        format!("token `{x}`: going down then across gives `{a}`, across then down gives `{b}`"),
                    ));
                }
            }
        }
    }
    report
}

/// Naturality of `p: I ⇒ J∘F`.
pub fn check_naturality(
    m: &OlogMorphism,
    src: &PathCategory,
    dst: &PathCategory,
    i: &Instance,
    j: &Instance,
    p: &InstanceMorphism,
) -> ValidationReport {
    match pullback_instance(&m.functor, src, dst, j) {
        Ok(k) => check_natural(src, i, &k, p),
        Err(e) => [Finding::error(
            K::Totality,
            &m.name,
            format!("cannot pull back the target instance: {e}"),
        )]
        .into_iter()
        .collect(),
    }
}

/// Every pair `(x, p_c(x))` with `x` a token of `from` must be declared.
pub fn check_conformance(
    cat: &PathCategory,
    from: &Instance,
    p: &InstanceMorphism,
    declared: &Correspondences,
) -> ValidationReport {
    let mut report = ValidationReport::new();
    for c in cat.objects() {
        for x in from.tokens_of(c) {
            if let Some(y) = p.apply(c, x) {
                if !declared.endorses(c, x, y) {
                    report.push(Finding::error(
                        K::Unendorsed,
                        c,
                        format!("correspondence `{x}` -> `{y}` is not declared"),
                    ));
                }
            }
        }
    }
    report
}

/// Outcome of [`search_conforming`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    /// Number of families of total component functions considered.
    pub candidates: u128,
    /// Those passing both naturality and conformance, in enumeration order.
    pub survivors: Vec<InstanceMorphism>,
}

/// Number of candidate morphisms from `from` to `to` on `cat`.
pub fn candidate_count(cat: &PathCategory, from: &Instance, to: &Instance) -> u128 {
    cat.objects().fold(1u128, |acc, c| {
        let base = to.tokens_of(c).len() as u128;
        (0..from.tokens_of(c).len()).fold(acc, |a, _| a.saturating_mul(base))
    })
}

/// Enumerates every family of total functions `from(c) → to(c)`, ordered
/// lexicographically by (type, token) slot and then by target token, and
/// keeps those that are natural and declared in `declared`.
pub fn search_natural(
    cat: &PathCategory,
    from: &Instance,
    to: &Instance,
    declared: &Correspondences,
    limit: u128,
) -> Result<SearchResult, MappingError> {
    let candidates = candidate_count(cat, from, to);
    if candidates > limit {
        return Err(MappingError::SearchSpaceTooLarge { candidates, limit });
    }
    let slots: Vec<(&String, &String, Vec<&String>)> = cat
        .objects()
        .flat_map(|c| {
            let choices: Vec<&String> = to.tokens_of(c).iter().collect();
            from.tokens_of(c)
                .iter()
                .map(move |x| (c, x, choices.clone()))
        })
        .collect();
    let mut survivors = Vec::new();
    if candidates == 0 {
        return Ok(SearchResult {
            candidates,
            survivors,
        });
    }
    let mut digits = vec![0usize; slots.len()];
    loop {
        let mut p = InstanceMorphism::default();
        for c in cat.objects() {
            p.components.insert(c.clone(), BTreeMap::new());
        }
        for ((c, x, choices), &d) in slots.iter().zip(&digits) {
            p.components
                .get_mut(*c)
                .expect("every object has a component")
                .insert((*x).clone(), choices[d].clone());
        }
        if check_natural(cat, from, to, &p).is_ok()
            && check_conformance(cat, from, &p, declared).is_ok()
        {
            survivors.push(p);
        }
        // Odometer step; the last slot turns fastest.
        let mut i = slots.len();
        loop {
            if i == 0 {
                return Ok(SearchResult {
                    candidates,
                    survivors,
                });
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < slots[i].2.len() {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// All `p: I ⇒ J∘F` that are natural and conform to the declared
/// correspondences of `m`'s components.
pub fn search_conforming(
    m: &OlogMorphism,
    src: &PathCategory,
    dst: &PathCategory,
    i: &Instance,
    j: &Instance,
    declared: &Correspondences,
    limit: u128,
) -> Result<SearchResult, MappingError> {
    let k = pullback_instance(&m.functor, src, dst, j)?;
    search_natural(src, i, &k, declared, limit)
}

/// Checks that `f` embeds `src` into `dst`: injective on objects and sending
/// each generator to a distinct single generator.
pub fn check_inclusion(f: &CatFunctor, src: &PathCategory) -> ValidationReport {
    let mut report = ValidationReport::new();
    let mut seen = BTreeMap::new();
    for c in src.objects() {
        if let Some(img) = f.object_map.get(c) {
            if let Some(prev) = seen.insert(img.clone(), c.clone()) {
                report.push(Finding::error(
                    K::NotAnInclusion,
                    c,
                    format!("`{prev}` and `{c}` both map to `{img}`"),
                ));
            }
        }
    }
    let mut seen = BTreeMap::new();
    for g in src.generators() {
        let Some(img) = f.generator_map.get(&g.id) else {
            continue;
        };
        if img.len() != 1 {
            report.push(Finding::error(
                K::NotAnInclusion,
                &g.id,
                format!("image {img} is not a single aspect"),
            ));
        } else if let Some(prev) = seen.insert(img.arrows()[0].clone(), g.id.clone()) {
            report.push(Finding::error(
                K::NotAnInclusion,
                &g.id,
                format!("`{prev}` and `{}` have the same image", g.id),
            ));
        }
    }
    report
}

/// Checks a co-instantiated morphism over an inclusion `i: C → D`: the
/// components of `m` read `M(ic) ⇝ L(c)`, and `q: J∘i ⇒ I` must be natural
/// and conform to the declared correspondences.
#[allow(clippy::too_many_arguments)]
pub fn check_co_instantiated(
    m: &OlogMorphism,
    src: &Olog,
    dst: &Olog,
    i: &Instance,
    j: &Instance,
    q: &InstanceMorphism,
    declared: &Correspondences,
    bound: usize,
) -> ValidationReport {
    let mut report = check_inclusion(&m.functor, &src.category);
    report.extend(validate_oriented(m, Orientation::Reversed, src, dst, bound));
    if !report.is_ok() {
        return report;
    }
    match pullback_instance(&m.functor, &src.category, &dst.category, j) {
        Ok(k) => {
            report.extend(check_natural(&src.category, &k, i, q));
            report.extend(check_conformance(&src.category, &k, q, declared));
        }
        Err(e) => report.push(Finding::error(
            K::Totality,
            &m.name,
            format!("cannot restrict the larger instance: {e}"),
        )),
    }
    report
}
