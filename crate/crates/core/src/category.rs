//! Finitely presented categories: objects, generating arrows and declared path
//! equations.
//!
//! Morphisms are [`Path`]s of generators. Equality of morphisms is decided by
//! bounded rewriting with the declared equations, which is sound but not
//! complete: [`PathEquality::NotProvedWithinBound`] does not mean "unequal".

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Default rewrite bound used by checkers and the CLI.
pub const DEFAULT_BOUND: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate object `{0}`")]
    DuplicateObject(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("duplicate equation `{0}`")]
    DuplicateEquation(String),
    #[error("paths do not compose: `{left}` ends at `{left_target}` but `{right}` starts at `{right_source}`")]
    NonComposable {
        left: String,
        left_target: String,
        right: String,
        right_source: String,
    },
    #[error("paths `{0}` and `{1}` are not parallel")]
    ShapeMismatch(String, String),
}

/// A composable sequence of generators. The empty sequence is the identity at
/// `source`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Path {
    source: String,
    arrows: Vec<String>,
}

impl Path {
    pub fn new<S: Into<String>>(
        source: impl Into<String>,
        arrows: impl IntoIterator<Item = S>,
    ) -> Self {
        Path {
            source: source.into(),
            arrows: arrows.into_iter().map(Into::into).collect(),
        }
    }

    pub fn identity(object: impl Into<String>) -> Self {
        Path {
            source: object.into(),
            arrows: Vec::new(),
        }
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn arrows(&self) -> &[String] {
        &self.arrows
    }

    pub fn is_identity(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arrows.is_empty() {
            write!(f, "[1@{}]", self.source)
        } else {
            write!(f, "[{}]", self.arrows.join("; "))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub id: String,
    pub source: String,
    pub target: String,
}

/// A declared equality between two parallel paths. The pair is unordered for
/// every purpose except rendering, where `lhs` is read first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Equation {
    pub id: String,
    pub lhs: Path,
    pub rhs: Path,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PathEquality {
    Equal,
    NotProvedWithinBound,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PathCategory {
    objects: BTreeSet<String>,
    generators: BTreeMap<String, Generator>,
    equations: BTreeMap<String, Equation>,
}

impl PathCategory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_object(&mut self, id: impl Into<String>) -> Result<(), CategoryError> {
        let id = id.into();
        if !self.objects.insert(id.clone()) {
            return Err(CategoryError::DuplicateObject(id));
        }
        Ok(())
    }

    pub fn add_generator(
        &mut self,
        id: impl Into<String>,
        source: impl Into<String>,
        target: impl Into<String>,
    ) -> Result<(), CategoryError> {
        let (id, source, target) = (id.into(), source.into(), target.into());
        for obj in [&source, &target] {
            if !self.objects.contains(obj) {
                return Err(CategoryError::UnknownObject(obj.clone()));
            }
        }
        if self.generators.contains_key(&id) {
            return Err(CategoryError::DuplicateGenerator(id));
        }
        self.generators
            .insert(id.clone(), Generator { id, source, target });
        Ok(())
    }

    pub fn add_equation(
        &mut self,
        id: impl Into<String>,
        lhs: Path,
        rhs: Path,
    ) -> Result<(), CategoryError> {
        let id = id.into();
        if self.equations.contains_key(&id) {
            return Err(CategoryError::DuplicateEquation(id));
        }
        self.check_parallel(&lhs, &rhs)?;
        self.equations.insert(id.clone(), Equation { id, lhs, rhs });
        Ok(())
    }

    pub fn objects(&self) -> impl Iterator<Item = &String> {
        self.objects.iter()
    }

    pub fn generators(&self) -> impl Iterator<Item = &Generator> {
        self.generators.values()
    }

    pub fn equations(&self) -> impl Iterator<Item = &Equation> {
        self.equations.values()
    }

    pub fn has_object(&self, id: &str) -> bool {
        self.objects.contains(id)
    }

    pub fn generator(&self, id: &str) -> Option<&Generator> {
        self.generators.get(id)
    }

    pub fn equation(&self, id: &str) -> Option<&Equation> {
        self.equations.get(id)
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    /// Single-generator path.
    pub fn generator_path(&self, id: &str) -> Result<Path, CategoryError> {
        let g = self
            .generator(id)
            .ok_or_else(|| CategoryError::UnknownGenerator(id.to_string()))?;
        Ok(Path::new(g.source.clone(), [g.id.clone()]))
    }

    /// Checks that `p` is a well-formed path and returns its target object.
    pub fn target(&self, p: &Path) -> Result<String, CategoryError> {
        if !self.has_object(&p.source) {
            return Err(CategoryError::UnknownObject(p.source.clone()));
        }
        let mut at = p.source.as_str();
        for (k, a) in p.arrows.iter().enumerate() {
            let g = self
                .generator(a)
                .ok_or_else(|| CategoryError::UnknownGenerator(a.clone()))?;
            if g.source != at {
                return Err(CategoryError::NonComposable {
                    left: Path::new(p.source.clone(), p.arrows[..k].iter().cloned()).to_string(),
                    left_target: at.to_string(),
                    right: format!("[{a}]"),
                    right_source: g.source.clone(),
                });
            }
            at = &g.target;
        }
        Ok(at.to_string())
    }

    pub fn endpoints(&self, p: &Path) -> Result<(String, String), CategoryError> {
        let t = self.target(p)?;
        Ok((p.source.clone(), t))
    }

    fn check_parallel(&self, p: &Path, q: &Path) -> Result<(), CategoryError> {
        if self.endpoints(p)? != self.endpoints(q)? {
            return Err(CategoryError::ShapeMismatch(p.to_string(), q.to_string()));
        }
        Ok(())
    }

    /// `p` followed by `q`.
    pub fn compose(&self, p: &Path, q: &Path) -> Result<Path, CategoryError> {
        let t = self.target(p)?;
        self.target(q)?;
        if t != q.source {
            return Err(CategoryError::NonComposable {
                left: p.to_string(),
                left_target: t,
                right: q.to_string(),
                right_source: q.source.clone(),
            });
        }
        let mut arrows = p.arrows.clone();
        arrows.extend(q.arrows.iter().cloned());
        Ok(Path {
            source: p.source.clone(),
            arrows,
        })
    }

    /// Decides whether `q` is reachable from `p` in at most `bound` single
    /// rewrites, each replacing an occurrence of one side of a declared
    /// equation by the other side.
    pub fn path_equal(
        &self,
        p: &Path,
        q: &Path,
        bound: usize,
    ) -> Result<PathEquality, CategoryError> {
        self.check_parallel(p, q)?;
        if p == q {
            return Ok(PathEquality::Equal);
        }
        Ok(self
            .rewrite_distance(p, q, bound)
            .map_or(PathEquality::NotProvedWithinBound, |_| PathEquality::Equal))
    }

    /// Length of a shortest rewrite sequence from `p` to `q` if it is at most
    /// `bound`. Paths are assumed well-formed and parallel.
    fn rewrite_distance(&self, p: &Path, q: &Path, bound: usize) -> Option<usize> {
        let rw = Rewriter::new(self);
        let start = rw.encode(p);
        let goal = rw.encode(q);
        let source = rw.object_index[p.source.as_str()];
        // Rewrites are symmetric, so search from both ends and meet halfway.
        let forward = rw.ball(&start, source, bound.div_ceil(2));
        if let Some(d) = forward.get(&goal) {
            return Some(*d);
        }
        let backward = rw.ball(&goal, source, bound / 2);
        let (small, large) = if forward.len() <= backward.len() {
            (&forward, &backward)
        } else {
            (&backward, &forward)
        };
        small
            .iter()
            .filter_map(|(w, d)| large.get(w).map(|e| d + e))
            .min()
    }
}

/// Equation sides compiled to generator indices, applied in both directions.
struct Rewriter<'a> {
    object_index: HashMap<&'a str, usize>,
    generator_index: HashMap<&'a str, usize>,
    generator_source: Vec<usize>,
    generator_target: Vec<usize>,
    rules: Vec<Rule>,
}

struct Rule {
    at: usize,
    from: Vec<usize>,
    to: Vec<usize>,
}

impl<'a> Rewriter<'a> {
    fn new(cat: &'a PathCategory) -> Self {
        let object_index: HashMap<&str, usize> = cat
            .objects
            .iter()
            .enumerate()
            .map(|(i, o)| (o.as_str(), i))
            .collect();
        let generator_index: HashMap<&str, usize> = cat
            .generators
            .keys()
            .enumerate()
            .map(|(i, g)| (g.as_str(), i))
            .collect();
        let generator_source = cat
            .generators
            .values()
            .map(|g| object_index[g.source.as_str()])
            .collect();
        let generator_target = cat
            .generators
            .values()
            .map(|g| object_index[g.target.as_str()])
            .collect();
        let mut rw = Rewriter {
            object_index,
            generator_index,
            generator_source,
            generator_target,
            rules: Vec::new(),
        };
        for eq in cat.equations.values() {
            let at = rw.object_index[eq.lhs.source.as_str()];
            let l = rw.encode(&eq.lhs);
            let r = rw.encode(&eq.rhs);
            if l == r {
                continue;
            }
            rw.rules.push(Rule {
                at,
                from: l.clone(),
                to: r.clone(),
            });
            rw.rules.push(Rule { at, from: r, to: l });
        }
        rw
    }

    fn encode(&self, p: &Path) -> Vec<usize> {
        p.arrows
            .iter()
            .map(|a| self.generator_index[a.as_str()])
            .collect()
    }

    /// Every word reachable from `start` in at most `depth` rewrites, with its
    /// distance.
    fn ball(&self, start: &[usize], source: usize, depth: usize) -> HashMap<Vec<usize>, usize> {
        let mut seen = HashMap::new();
        seen.insert(start.to_vec(), 0);
        let mut frontier = vec![start.to_vec()];
        for d in 1..=depth {
            let mut next = Vec::new();
            for w in &frontier {
                for n in self.neighbours(w, source) {
                    if !seen.contains_key(&n) {
                        seen.insert(n.clone(), d);
                        next.push(n);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        seen
    }

    fn neighbours(&self, word: &[usize], source: usize) -> HashSet<Vec<usize>> {
        // objects[i] is the object sitting before word[i]
        let mut objects = Vec::with_capacity(word.len() + 1);
        objects.push(source);
        objects.extend(word.iter().map(|g| self.generator_target[*g]));
        debug_assert!(word
            .iter()
            .enumerate()
            .all(|(i, g)| self.generator_source[*g] == objects[i]));

        let mut out = HashSet::new();
        for rule in &self.rules {
            let n = rule.from.len();
            if n > word.len() {
                continue;
            }
            for i in 0..=word.len() - n {
                if objects[i] != rule.at || word[i..i + n] != rule.from[..] {
                    continue;
                }
                let mut w = Vec::with_capacity(word.len() - n + rule.to.len());
                w.extend_from_slice(&word[..i]);
                w.extend_from_slice(&rule.to);
                w.extend_from_slice(&word[i + n..]);
                out.insert(w);
            }
        }
        out
    }
}

/// A functor between presented categories, given on generators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CatFunctor {
    pub object_map: BTreeMap<String, String>,
    pub generator_map: BTreeMap<String, Path>,
}

impl CatFunctor {
    pub fn identity(cat: &PathCategory) -> Self {
        CatFunctor {
            object_map: cat.objects().map(|o| (o.clone(), o.clone())).collect(),
            generator_map: cat
                .generators()
                .map(|g| (g.id.clone(), Path::new(g.source.clone(), [g.id.clone()])))
                .collect(),
        }
    }

    pub fn map_object(&self, obj: &str) -> Result<&str, CategoryError> {
        self.object_map
            .get(obj)
            .map(String::as_str)
            .ok_or_else(|| CategoryError::UnknownObject(obj.to_string()))
    }

    /// Image of a path: the mapped source object with generator images spliced
    /// in order.
    pub fn apply(&self, p: &Path) -> Result<Path, CategoryError> {
        let source = self.map_object(&p.source)?.to_string();
        let mut arrows = Vec::new();
        for a in &p.arrows {
            let image = self
                .generator_map
                .get(a)
                .ok_or_else(|| CategoryError::UnknownGenerator(a.clone()))?;
            arrows.extend(image.arrows.iter().cloned());
        }
        Ok(Path { source, arrows })
    }

    /// `self` followed by `then` (the composite `then ∘ self`).
    pub fn then(&self, then: &CatFunctor) -> Result<CatFunctor, CategoryError> {
        let object_map = self
            .object_map
            .iter()
            .map(|(k, v)| Ok((k.clone(), then.map_object(v)?.to_string())))
            .collect::<Result<_, CategoryError>>()?;
        let generator_map = self
            .generator_map
            .iter()
            .map(|(k, p)| Ok((k.clone(), then.apply(p)?)))
            .collect::<Result<_, CategoryError>>()?;
        Ok(CatFunctor {
            object_map,
            generator_map,
        })
    }

    /// Checks that every object and generator of `source` is mapped, that
    /// generator images are well-formed paths with the right endpoints, and
    /// that every source equation maps to a pair of paths equal in `target`
    /// within `bound` rewrites.
    pub fn validate(
        &self,
        source: &PathCategory,
        target: &PathCategory,
        bound: usize,
    ) -> crate::ValidationReport {
        use crate::report::{Finding, FindingKind as K};
        let mut report = crate::ValidationReport::new();

        for obj in source.objects() {
            match self.object_map.get(obj) {
                None => report.push(Finding::error(
                    K::UnmappedObject,
                    obj,
                    "object has no image",
                )),
                Some(img) if !target.has_object(img) => report.push(Finding::error(
                    K::UnknownObject,
                    obj,
                    format!("image `{img}` is not an object of the target"),
                )),
                Some(_) => {}
            }
        }
        for k in self.object_map.keys().filter(|k| !source.has_object(k)) {
            report.push(Finding::error(
                K::UnknownObject,
                k,
                "mapped object is not in the source",
            ));
        }

        let mut generators_ok = true;
        for g in source.generators() {
            let Some(image) = self.generator_map.get(&g.id) else {
                generators_ok = false;
                report.push(Finding::error(
                    K::UnmappedGenerator,
                    &g.id,
                    "generator has no image",
                ));
                continue;
            };
            let expected = (
                self.object_map.get(&g.source),
                self.object_map.get(&g.target),
            );
            match target.endpoints(image) {
                Err(e) => {
                    generators_ok = false;
                    report.push(Finding::error(
                        K::EndpointViolation,
                        &g.id,
                        format!("image {image} is not a path of the target: {e}"),
                    ));
                }
                Ok((s, t)) => {
                    if expected != (Some(&s), Some(&t)) {
                        generators_ok = false;
                        report.push(Finding::error(
                            K::EndpointViolation,
                            &g.id,
                            format!(
                                "image {image} runs {s} -> {t}, expected {} -> {}",
                                expected.0.map_or("?", |x| x.as_str()),
                                expected.1.map_or("?", |x| x.as_str()),
                            ),
                        ));
                    }
                }
            }
        }
        for k in self
            .generator_map
            .keys()
            .filter(|k| source.generator(k).is_none())
        {
            report.push(Finding::error(
                K::UnknownGenerator,
                k,
                "mapped generator is not in the source",
            ));
        }

        if generators_ok {
            for eq in source.equations() {
                let verdict = self
                    .apply(&eq.lhs)
                    .and_then(|l| Ok((l, self.apply(&eq.rhs)?)))
                    .and_then(|(l, r)| target.path_equal(&l, &r, bound));
                match verdict {
                    Ok(PathEquality::Equal) => {}
                    Ok(PathEquality::NotProvedWithinBound) => report.push(Finding::error(
                        K::EquationNotPreserved,
                        &eq.id,
                        format!(
                            "images of {} and {} not proved equal within {bound} rewrites",
                            eq.lhs, eq.rhs
                        ),
                    )),
                    Err(e) => report.push(Finding::error(
                        K::EquationNotPreserved,
                        &eq.id,
                        e.to_string(),
                    )),
                }
            }
        }
        report
    }
}
